"""Normalization of a formula in one variable.

This module provides:
- to_nnf: negations pushed onto atoms, quantifiers dualized
- classify_literal: the seven literal shapes relative to a variable y
- eliminate_equalities: y-equalities and y-disequalities rewritten as bounds
- coefficient_set / sign_cases: the coefficient sign case analysis
- normalize_in: Exists y. phi  ->  Exists y'. phi~ with every y'
  coefficient equal to 1, where y' stands for nu * y

After normalization the only literals mentioning y' are `y' < a`,
`b < y'`, `D_m(y' + c)` and `~D_m(y' + d)`; they may sit under And, Or and
bounded quantifiers.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from app.logic.formula import (
    FALSE,
    TRUE,
    And,
    BExists,
    BForall,
    Div,
    Eq,
    Exists,
    FalseFormula,
    Forall,
    Formula,
    LinearTerm,
    Lt,
    Not,
    Or,
    TrueFormula,
    VariableSupply,
    VarId,
    bound_variables,
    conj,
    count_unbounded_quantifiers,
    disj,
    formula_size,
    map_literals,
)
from app.logic.poly import Polynomial, SignClass, constant_sign, poly_product
from app.models.responses import EliminationStats
from app.utils.logging import log_stage_event

logger = logging.getLogger(__name__)


class NormalizationError(Exception):
    """Raised when a formula cannot be normalized in the requested variable."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


class AtomClass(str, Enum):
    """Shape of a literal relative to the variable being normalized."""

    T1 = "T1"  # alpha*y < a
    T2 = "T2"  # b < beta*y
    T3 = "T3"  # D_gamma(delta*y + c)
    T4 = "T4"  # ~D_eps(zeta*y + d)
    T5 = "T5"  # eta*y = e
    T6 = "T6"  # theta*y != f
    T7 = "T7"  # y-free


@dataclass(frozen=True)
class ClassifiedLiteral:
    """A literal split into its y-coefficient and y-free remainder.

    The coefficient always has a positive leading coefficient. `rest` is the
    bound for T1/T2 (`a` or `b`), the right-hand side for T5/T6, and the
    added term (`c` or `d`) for T3/T4.
    """

    kind: AtomClass
    coefficient: Polynomial
    rest: LinearTerm
    modulus: Optional[Polynomial] = None


@dataclass(frozen=True)
class SignCase:
    """One choice S' of the coefficients assumed nonzero."""

    selected: tuple[Polynomial, ...]
    guard: Formula
    nu: Polynomial


def _positive(p: Polynomial) -> bool:
    return p.leading_coefficient > 0


def to_nnf(phi: Formula) -> Formula:
    """Push negations down to atoms.

    `~(term < 0)` becomes `-term - 1 < 0`, so only equalities and
    divisibilities stay negated.
    """
    match phi:
        case Not(arg):
            return _negate(arg)
        case And(args):
            return And(tuple(to_nnf(a) for a in args))
        case Or(args):
            return Or(tuple(to_nnf(a) for a in args))
        case Exists(var, body):
            return Exists(var, to_nnf(body))
        case Forall(var, body):
            return Forall(var, to_nnf(body))
        case BExists(var, bound, body):
            return BExists(var, bound, to_nnf(body))
        case BForall(var, bound, body):
            return BForall(var, bound, to_nnf(body))
    return phi


def _negate(phi: Formula) -> Formula:
    match phi:
        case TrueFormula():
            return FALSE
        case FalseFormula():
            return TRUE
        case Lt(term):
            return Lt(-term - 1)
        case Eq() | Div():
            return Not(phi)
        case Not(arg):
            return to_nnf(arg)
        case And(args):
            return Or(tuple(_negate(a) for a in args))
        case Or(args):
            return And(tuple(_negate(a) for a in args))
        case Exists(var, body):
            return Forall(var, _negate(body))
        case Forall(var, body):
            return Exists(var, _negate(body))
        case BExists(var, bound, body):
            return BForall(var, bound, _negate(body))
        case BForall(var, bound, body):
            return BExists(var, bound, _negate(body))
    raise TypeError(f"Not a formula: {phi!r}")


def classify_literal(literal: Formula, y: VarId) -> ClassifiedLiteral:
    """Classify an NNF literal relative to y.

    Raises:
        NormalizationError: If the argument is not a literal.
    """
    negated = isinstance(literal, Not)
    atom = literal.arg if isinstance(literal, Not) else literal

    match atom:
        case Lt(term) if not negated:
            c = term.coefficient(y)
            r = term.drop(y)
            if c.is_zero:
                return ClassifiedLiteral(AtomClass.T7, c, term)
            if _positive(c):
                return ClassifiedLiteral(AtomClass.T1, c, -r)
            return ClassifiedLiteral(AtomClass.T2, -c, r)
        case Eq(term):
            c = term.coefficient(y)
            r = term.drop(y)
            if c.is_zero:
                return ClassifiedLiteral(AtomClass.T7, c, term)
            kind = AtomClass.T6 if negated else AtomClass.T5
            if _positive(c):
                return ClassifiedLiteral(kind, c, -r)
            return ClassifiedLiteral(kind, -c, r)
        case Div(modulus, term):
            c = term.coefficient(y)
            r = term.drop(y)
            if c.is_zero:
                return ClassifiedLiteral(AtomClass.T7, c, term, modulus)
            kind = AtomClass.T4 if negated else AtomClass.T3
            if _positive(c):
                return ClassifiedLiteral(kind, c, r, modulus)
            return ClassifiedLiteral(kind, -c, -r, modulus)
        case TrueFormula() | FalseFormula() if not negated:
            return ClassifiedLiteral(AtomClass.T7, Polynomial(), LinearTerm())
    raise NormalizationError(f"Not an NNF literal: {literal!r}")


def eliminate_equalities(phi: Formula, y: VarId) -> Formula:
    """Replace `eta*y = e` by two strict bounds and `theta*y != f` by their disjunction."""

    def rewrite(literal: Formula) -> Formula:
        match literal:
            case Eq(term) if not term.coefficient(y).is_zero:
                return And((Lt(term - 1), Lt(-term - 1)))
            case Not(Eq(term)) if not term.coefficient(y).is_zero:
                return Or((Lt(term), Lt(-term)))
        return literal

    return map_literals(phi, rewrite)


def _literals(phi: Formula) -> Iterable[Formula]:
    match phi:
        case Not(_) | Lt() | Eq() | Div():
            yield phi
        case And(args) | Or(args):
            for a in args:
                yield from _literals(a)
        case Exists(_, body) | Forall(_, body) | BExists(_, _, body) | BForall(_, _, body):
            yield from _literals(body)


def _sorted_unique(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    return tuple(sorted(set(polys), key=lambda p: (p.degree, p.coeffs)))


def coefficient_set(phi: Formula, y: VarId) -> tuple[Polynomial, ...]:
    """All y-coefficients of T1-T4 literals, deduplicated, in a fixed order."""
    found = []
    for literal in _literals(phi):
        classified = classify_literal(literal, y)
        if classified.kind in (AtomClass.T1, AtomClass.T2, AtomClass.T3, AtomClass.T4):
            found.append(classified.coefficient)
    return _sorted_unique(found)


def _const(p: Polynomial) -> LinearTerm:
    return LinearTerm.const(p)


def nonzero_guard(p: Polynomial) -> Formula:
    if p.is_constant:
        return TRUE if not p.is_zero else FALSE
    return Not(Eq(_const(p)))


def zero_guard(p: Polynomial) -> Formula:
    if p.is_constant:
        return TRUE if p.is_zero else FALSE
    return Eq(_const(p))


def positive_guard(p: Polynomial) -> Formula:
    if p.is_constant:
        return TRUE if p.constant_value() > 0 else FALSE
    return Lt(_const(-p))


def negative_guard(p: Polynomial) -> Formula:
    if p.is_constant:
        return TRUE if p.constant_value() < 0 else FALSE
    return Lt(_const(p))


def sign_cases(coefficients: tuple[Polynomial, ...]) -> list[SignCase]:
    """Enumerate subsets S' of the coefficient set, skipping impossible ones.

    A subset is dropped when it assumes a nonzero constant to vanish or the
    zero polynomial to be nonzero.
    """
    cases = []
    for mask in range(1 << len(coefficients)):
        selected = tuple(p for i, p in enumerate(coefficients) if mask >> i & 1)
        rest = tuple(p for i, p in enumerate(coefficients) if not mask >> i & 1)
        if any(constant_sign(p) == SignClass.IDENTICALLY_ZERO for p in selected):
            continue
        if any(constant_sign(p) in (SignClass.POSITIVE_CONSTANT, SignClass.NEGATIVE_CONSTANT) for p in rest):
            continue
        guard = conj(*(nonzero_guard(p) for p in selected), *(zero_guard(p) for p in rest))
        cases.append(SignCase(selected, guard, poly_product(selected)))
    return cases


def _cofactor(selected: tuple[Polynomial, ...], alpha: Polynomial) -> Polynomial:
    remaining = list(selected)
    remaining.remove(alpha)
    return poly_product(remaining)


def _signed_bound(cofactor: Polynomial, positive_case: Formula, negative_case: Formula) -> Formula:
    """(cofactor > 0 /\\ positive_case) \\/ (cofactor < 0 /\\ negative_case)."""
    return disj(
        conj(positive_guard(cofactor), positive_case),
        conj(negative_guard(cofactor), negative_case),
    )


def _rewrite_case(phi: Formula, y: VarId, y_new: VarId, case: SignCase) -> Formula:
    target = LinearTerm.variable(y_new)

    def rewrite(literal: Formula) -> Formula:
        if isinstance(literal, (TrueFormula, FalseFormula)):
            return literal
        classified = classify_literal(literal, y)
        alpha = classified.coefficient
        rest = classified.rest
        match classified.kind:
            case AtomClass.T1:
                if alpha not in case.selected:
                    return Lt(-rest)
                k = _cofactor(case.selected, alpha)
                bound = rest.scale(k)
                return _signed_bound(k, Lt(target - bound), Lt(bound - target))
            case AtomClass.T2:
                if alpha not in case.selected:
                    return Lt(rest)
                k = _cofactor(case.selected, alpha)
                bound = rest.scale(k)
                return _signed_bound(k, Lt(bound - target), Lt(target - bound))
            case AtomClass.T3 | AtomClass.T4:
                assert classified.modulus is not None
                if alpha not in case.selected:
                    atom: Formula = Div(classified.modulus, rest)
                else:
                    k = _cofactor(case.selected, alpha)
                    atom = Div(classified.modulus * k, target + rest.scale(k))
                return Not(atom) if classified.kind == AtomClass.T4 else atom
            case AtomClass.T5 | AtomClass.T6:
                raise NormalizationError("Equalities in the normalized variable must be eliminated first")
        return literal

    return map_literals(phi, rewrite)


def normalize_in(
    phi: Formula,
    y: VarId,
    supply: Optional[VariableSupply] = None,
    stats: Optional[EliminationStats] = None,
) -> tuple[VarId, Formula]:
    """Rewrite phi so that Exists y. phi is equivalent to Exists y'. phi~.

    For each sign case S' the disjunct is guard(S') /\\ phi~_S' /\\ D_nu(y'),
    where nu is the product of S' and every coefficient alpha in S' is
    replaced through its cofactor nu / alpha.

    Args:
        phi: Formula with bounded quantifiers only, y not bound inside it.
        y: Variable to normalize.
        supply: Fresh-variable source; built from phi when omitted.
        stats: Optional counters to update.

    Returns:
        The fresh variable y' and the normalized formula.

    Raises:
        NormalizationError: If phi has unbounded quantifiers or binds y.
    """
    started = time.perf_counter()
    if count_unbounded_quantifiers(phi):
        raise NormalizationError("Normalization requires a formula with bounded quantifiers only")
    if y in bound_variables(phi):
        raise NormalizationError(f"Variable {y} is bound inside the formula; rename it first")

    supply = supply or VariableSupply.for_formulas(phi)
    prepared = eliminate_equalities(to_nnf(phi), y)
    coefficients = coefficient_set(prepared, y)
    y_new = supply.fresh(y)

    disjuncts = []
    cases = sign_cases(coefficients)
    for case in cases:
        body = _rewrite_case(prepared, y, y_new, case)
        disjuncts.append(conj(case.guard, body, Div(case.nu, LinearTerm.variable(y_new))))
    result = disj(*disjuncts)

    if stats is not None:
        stats.sign_cases += len(cases)
    log_stage_event(
        logger,
        "normalize",
        variable=str(y),
        cases=len(cases),
        output_size=formula_size(result),
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )
    return y_new, result

