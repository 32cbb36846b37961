"""Counting members of parametric families.

This module provides:
- count_family: |S_t ∩ box| for each t, with truncation detection
- fit_quasi_polynomial: exact rational least-squares fit of the counts by
  one polynomial per residue class of t (reported as empirical)
"""

import itertools
import logging
from typing import Iterable, Optional

from sympy import Matrix, Poly, Rational, symbols

from app.logic.formula import Formula, VarId, count_unbounded_quantifiers, evaluate, free_variables
from app.logic.parser import print_formula
from app.logic.poly import Polynomial, format_polynomial
from app.models.responses import BoxSpec, CountRow, CountTable, FitClass, FitReport
from app.services.oracle import ground
from app.services.workers import run_parallel
from app.utils.logging import log_count_event

logger = logging.getLogger(__name__)

t_symbol = symbols("t")


class CountingError(Exception):
    """Raised when a family cannot be counted."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


def _shell(lo: int, hi: int, dimension: int) -> Iterable[tuple[int, ...]]:
    """Points of [lo-1, hi+1]^d with at least one coordinate outside [lo, hi]."""
    for point in itertools.product(range(lo - 1, hi + 2), repeat=dimension):
        if any(c < lo or c > hi for c in point):
            yield point


def count_family(
    phi: Formula,
    variables: list[VarId],
    t_values: Iterable[int],
    lower: Polynomial,
    upper: Polynomial,
    threads: Optional[int] = None,
) -> CountTable:
    """Count the points of [lower(t), upper(t)]^d satisfying phi, for each t.

    A row is marked truncated when some point just outside the box is a
    member, which proves the family does not fit in the box at that t.

    Raises:
        CountingError: If phi has unbounded quantifiers or free variables
            outside `variables`.
    """
    if count_unbounded_quantifiers(phi):
        raise CountingError("Family has unbounded quantifiers; run eliminate first")
    unknown = sorted(str(v) for v in free_variables(phi) if v not in variables)
    if unknown:
        raise CountingError(f"Free variables not listed for counting: {', '.join(unknown)}")
    text = print_formula(phi)

    def count_at(t: int) -> CountRow:
        grounded = ground(phi, t)
        lo, hi = lower(t), upper(t)

        def member(point: tuple[int, ...]) -> bool:
            return evaluate(grounded, t, dict(zip(variables, point)), checked=False)

        count = sum(1 for p in itertools.product(range(lo, hi + 1), repeat=len(variables)) if member(p))
        truncated = any(member(p) for p in _shell(lo, hi, len(variables)))
        log_count_event(logger, text, t, count, truncated)
        return CountRow(t=t, count=count, truncated=truncated)

    rows = run_parallel(count_at, sorted(set(t_values)), threads)
    return CountTable(
        rows=rows,
        box=BoxSpec(lower=format_polynomial(lower), upper=format_polynomial(upper)),
        variables=[str(v) for v in variables],
    )


def _fit_class(residue: int, points: list[tuple[int, int]], degree: int) -> FitClass:
    if len(points) < degree + 1:
        return FitClass(
            residue=residue,
            points=len(points),
            note=f"needs at least {degree + 1} points, has {len(points)}",
        )
    a = Matrix([[Rational(t) ** k for k in range(degree + 1)] for t, _ in points])
    b = Matrix([Rational(count) for _, count in points])
    solution = (a.T * a).solve(a.T * b)
    residuals = b - a * solution
    polynomial = Poly(list(reversed(list(solution))), t_symbol, domain="QQ")
    return FitClass(
        residue=residue,
        points=len(points),
        coefficients=[str(c) for c in solution],
        polynomial=str(polynomial.as_expr()),
        residuals=[str(r) for r in residuals],
        exact=all(r == 0 for r in residuals),
    )


def fit_quasi_polynomial(
    table: CountTable, modulus: int, degree: int, tail_from: Optional[int] = None
) -> FitReport:
    """Fit count(t) by a degree-`degree` polynomial on each class t mod `modulus`.

    Only rows with t >= tail_from are used; truncated rows are skipped.
    The fit is exact rational arithmetic, so `exact` means zero residuals.
    """
    if modulus < 1 or degree < 0:
        raise CountingError("Fit needs modulus >= 1 and degree >= 0")
    usable = [r for r in table.rows if not r.truncated]
    start = tail_from if tail_from is not None else min((r.t for r in usable), default=0)
    classes = []
    for residue in range(modulus):
        points = [(r.t, r.count) for r in usable if r.t >= start and r.t % modulus == residue]
        classes.append(_fit_class(residue, points, degree))
    exact = all(c.exact for c in classes)
    logger.info(f"Quasi-polynomial fit modulus={modulus} degree={degree} exact={exact}")
    return FitReport(modulus=modulus, degree=degree, tail_from=start, classes=classes, exact=exact)
