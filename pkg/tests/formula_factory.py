"""Seeded random formulas for property tests.

Formulas use at most three variables and three quantifiers, at least one
of them unbounded. Coefficients are polynomials of degree <= 2 with
coefficients in [-5, 5] and moduli come from {2, 3, t, t - 2, t + 1}.
Quantified variables draw from a weighted pool that favours small
coefficients, so periods stay small enough for grid checks.
"""

import random
from typing import Sequence

from app.logic.formula import (
    BExists,
    BForall,
    Div,
    Eq,
    Exists,
    Forall,
    Formula,
    LinearTerm,
    Lt,
    Not,
    VarId,
    conj,
    disj,
)
from app.logic.poly import ONE, T, Polynomial

X, U = VarId("x"), VarId("u")
Y, W, Z = VarId("y"), VarId("w"), VarId("z")

MODULI = (Polynomial.constant(2), Polynomial.constant(3), T, T - 2, T + 1)
QUANTIFIED_COEFFICIENTS = (
    (ONE, 6),
    (Polynomial.constant(-1), 3),
    (Polynomial.constant(2), 2),
    (Polynomial.constant(-3), 1),
    (T, 1),
    (T + 1, 1),
    (T * T - T, 1),
)
SMALL_QUANTIFIED_COEFFICIENTS = (
    (ONE, 6),
    (Polynomial.constant(-1), 3),
    (Polynomial.constant(2), 1),
    (T, 1),
)
SMALL_COEFFICIENTS = (ONE, Polynomial.constant(-1), Polynomial.constant(2))
SMALL_CONSTANTS = (Polynomial.constant(0), ONE, Polynomial.constant(-2), T, T - 1)
BOUNDS = (Polynomial.constant(2), T, T + 1)


class FormulaFactory:
    """Deterministic generator of formulas over x and u."""

    def __init__(self, seed: int) -> None:
        self.rng = random.Random(seed)

    def polynomial(self) -> Polynomial:
        degree = self.rng.choice((0, 0, 1, 1, 2))
        return Polynomial(tuple(self.rng.randint(-5, 5) for _ in range(degree + 1)))

    def quantified_coefficient(self, small: bool) -> Polynomial:
        pool = SMALL_QUANTIFIED_COEFFICIENTS if small else QUANTIFIED_COEFFICIENTS
        values, weights = zip(*pool)
        return self.rng.choices(values, weights=weights)[0]

    def term(self, quantified: Sequence[VarId], free: Sequence[VarId], small: bool = False) -> LinearTerm:
        """The last quantified variable always occurs; the others may."""
        term = LinearTerm.const(self.rng.choice(SMALL_CONSTANTS) if small else self.polynomial())
        for i, var in enumerate(quantified):
            if i == len(quantified) - 1 or self.rng.random() < 0.4:
                term = term + LinearTerm.variable(var).scale(self.quantified_coefficient(small))
        for var in free:
            if self.rng.random() < 0.5:
                coefficient = self.rng.choice(SMALL_COEFFICIENTS) if small else self.polynomial()
                term = term + LinearTerm.variable(var).scale(coefficient)
        return term

    def literal(self, quantified: Sequence[VarId], free: Sequence[VarId], small: bool = False) -> Formula:
        roll = self.rng.random()
        term = self.term(quantified, free, small)
        if roll < 0.5:
            return Lt(term)
        if roll < 0.7:
            return Eq(term) if self.rng.random() < 0.5 else Not(Eq(term))
        atom = Div(self.rng.choice(MODULI), term)
        return atom if self.rng.random() < 0.7 else Not(atom)

    def body(self, quantified: Sequence[VarId], free: Sequence[VarId], size: int = 2, small: bool = False) -> Formula:
        literals = [self.literal(quantified, free, small) for _ in range(size)]
        if self.rng.random() < 0.6:
            return conj(*literals)
        return disj(conj(*literals[:1]), conj(*literals[1:]))

    def quantify(self, var: VarId, body: Formula) -> Formula:
        return Exists(var, body) if self.rng.random() < 0.65 else Forall(var, body)

    def connect(self, left: Formula, right: Formula) -> Formula:
        return conj(left, right) if self.rng.random() < 0.5 else disj(left, right)

    def formula(self) -> Formula:
        shape = self.rng.random()
        if shape < 0.3:
            return self.quantify(Y, self.body([Y], [X, U]))
        if shape < 0.5:
            inner = self.quantify(W, self.body([Y, W], [X]))
            return self.quantify(Y, self.connect(self.literal([Y], [X]), inner))
        if shape < 0.65:
            return self.connect(self.quantify(Y, self.body([Y], [X])), self.quantify(W, self.body([W], [X])))
        if shape < 0.85:
            bound = self.rng.choice(BOUNDS)
            inner = conj(self.literal([Y], [X]), self.literal([Y, Z], []))
            bounded = BExists(Z, bound, inner) if self.rng.random() < 0.6 else BForall(Z, bound, inner)
            return self.quantify(Y, bounded)
        innermost = self.quantify(Z, self.body([Y, W, Z], [], small=True))
        return self.quantify(Y, self.quantify(W, innermost))

    def matrix(self) -> Formula:
        """Quantifier-free formula in y and x with small coefficients."""
        return self.body([Y], [X], size=self.rng.choice((2, 3)), small=True)


def random_formulas(count: int, seed: int = 20240601) -> list[Formula]:
    factory = FormulaFactory(seed)
    return [factory.formula() for _ in range(count)]


def random_matrices(count: int, seed: int = 20240602) -> list[Formula]:
    factory = FormulaFactory(seed)
    return [factory.matrix() for _ in range(count)]
