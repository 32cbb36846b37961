"""Quantifier-free elimination for formulas meeting the constant-coefficient criterion.

This module provides:
- qfree_eligible: scan for (1) non-constant divisibility moduli and
  (2) non-constant coefficients on quantified variables
- desugar_bounded: bounded quantifiers rewritten with explicit range atoms
- expand_bounded: unroll constant-bound quantifiers under a global budget
- eliminate_to_qfree: the bounding pipeline followed by full expansion

When both conditions hold every period and every binder bound produced by
the elimination is a constant, so each step can be expanded completely.
"""

import logging
import time
from typing import Optional

from app.engine.eliminate import bound_all_quantifiers, simplify
from app.logic.formula import (
    And,
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
    Or,
    VariableSupply,
    VarId,
    conj,
    count_quantifiers,
    disj,
    formula_size,
    ge,
    gt,
    le,
    lt,
    rename_bound,
    substitute,
)
from app.logic.poly import format_polynomial, is_monomial
from app.models.responses import EligibilityReport, EliminationStats, Violation
from app.utils.logging import log_stage_event

logger = logging.getLogger(__name__)


class IneligibleFormulaError(Exception):
    """Raised when quantifier-free elimination is requested for an ineligible formula."""

    def __init__(self, report: EligibilityReport) -> None:
        self.report = report
        details = "; ".join(describe_violation(v) for v in report.violations)
        self.message = f"Formula is not eligible for quantifier-free elimination: {details}"
        super().__init__(self.message)


class ExpansionLimitError(Exception):
    """Raised when unrolling bounded quantifiers exceeds the disjunct budget."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.message = f"Expansion exceeded the limit of {limit} disjuncts"
        super().__init__(self.message)


def _atom_label(phi: Formula) -> str:
    match phi:
        case Lt():
            return "lt"
        case Eq():
            return "eq"
        case Div():
            return "div"
    return type(phi).__name__.lower()


def _summand(coefficient, var: VarId) -> str:
    text = format_polynomial(coefficient)
    return f"{text}*{var}" if is_monomial(coefficient) else f"({text})*{var}"


def qfree_eligible(phi: Formula) -> EligibilityReport:
    """Check the constant-modulus and constant-coefficient conditions.

    Condition (2) is checked under every quantifier, bounded or not: a
    variable bound by an enclosing quantifier may only carry constant
    coefficients. Free variables may carry any coefficient.
    """
    violations: list[Violation] = []

    def scan_term(term: LinearTerm, scope: frozenset[VarId], location: str) -> None:
        for var, coefficient in term.coeffs:
            if var in scope and not coefficient.is_constant:
                violations.append(Violation(location=location, condition="2", offending=_summand(coefficient, var)))

    def walk(node: Formula, scope: frozenset[VarId], path: str) -> None:
        match node:
            case Lt(term) | Eq(term):
                scan_term(term, scope, f"{path}/{_atom_label(node)}")
            case Div(modulus, term):
                location = f"{path}/div"
                if not modulus.is_constant:
                    violations.append(
                        Violation(location=location, condition="1", offending=format_polynomial(modulus))
                    )
                scan_term(term, scope, location)
            case Not(arg):
                walk(arg, scope, f"{path}/not")
            case And(args):
                for i, a in enumerate(args):
                    walk(a, scope, f"{path}/and[{i}]")
            case Or(args):
                for i, a in enumerate(args):
                    walk(a, scope, f"{path}/or[{i}]")
            case Exists(var, body):
                walk(body, scope | {var}, f"{path}/E {var}")
            case Forall(var, body):
                walk(body, scope | {var}, f"{path}/A {var}")
            case BExists(var, _, body):
                walk(body, scope | {var}, f"{path}/Eb {var}")
            case BForall(var, _, body):
                walk(body, scope | {var}, f"{path}/Ab {var}")

    walk(phi, frozenset(), "")
    return EligibilityReport(eligible=not violations, violations=violations)


def desugar_bounded(phi: Formula) -> Formula:
    """Rewrite Eb/Ab as unbounded quantifiers guarded by 0 <= z <= bound."""
    match phi:
        case Not(arg):
            return Not(desugar_bounded(arg))
        case And(args):
            return And(tuple(desugar_bounded(a) for a in args))
        case Or(args):
            return Or(tuple(desugar_bounded(a) for a in args))
        case Exists(var, body) | Forall(var, body):
            return type(phi)(var, desugar_bounded(body))
        case BExists(var, bound, body):
            return Exists(var, conj(ge(var, 0), le(var, bound), desugar_bounded(body)))
        case BForall(var, bound, body):
            return Forall(var, disj(lt(var, 0), gt(var, bound), desugar_bounded(body)))
    return phi


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def spend(self, amount: int) -> None:
        self.used += amount
        if self.used > self.limit:
            raise ExpansionLimitError(self.limit)


_NO_CAPTURE = VariableSupply()


def expand_bounded(phi: Formula, limit: int = 1_000_000, budget: Optional[_Budget] = None) -> Formula:
    """Unroll every bounded quantifier; all bounds must be constant.

    Raises:
        ExpansionLimitError: If more than `limit` instances are produced in total.
        ValueError: If a bound depends on t.
    """
    budget = budget or _Budget(limit)

    def walk(node: Formula) -> Formula:
        match node:
            case Not(arg):
                return Not(walk(arg))
            case And(args):
                return conj(*(walk(a) for a in args))
            case Or(args):
                return disj(*(walk(a) for a in args))
            case Exists(var, body) | Forall(var, body):
                return type(node)(var, walk(body))
            case BExists(var, bound, body) | BForall(var, bound, body):
                if not bound.is_constant:
                    raise ValueError(f"Bound {bound} of {var} is not constant")
                upper = bound.constant_value()
                existential = isinstance(node, BExists)
                if upper < 0:
                    return disj() if existential else conj()
                budget.spend(upper + 1)
                inner = walk(body)
                instances = [
                    simplify(substitute(inner, var, LinearTerm.const(k), _NO_CAPTURE), 0)
                    for k in range(upper + 1)
                ]
                return disj(*instances) if existential else conj(*instances)
        return node

    return walk(phi)


def eliminate_to_qfree(
    phi: Formula,
    expansion_limit: int = 1_000_000,
    stats: Optional[EliminationStats] = None,
) -> Formula:
    """Quantifier-free equivalent of an eligible formula.

    Raises:
        IneligibleFormulaError: With the EligibilityReport, if the criterion fails.
        ExpansionLimitError: If unrolling exceeds `expansion_limit` instances.
    """
    report = qfree_eligible(phi)
    if not report.eligible:
        raise IneligibleFormulaError(report)

    started = time.perf_counter()
    stats = stats if stats is not None else EliminationStats()
    supply = VariableSupply.for_formulas(phi)
    budget = _Budget(expansion_limit)

    def expand(step: Formula) -> Formula:
        return simplify(expand_bounded(step, expansion_limit, budget), 0)

    prepared = desugar_bounded(rename_bound(phi, supply))
    result = bound_all_quantifiers(prepared, supply, 0, stats, after_step=expand)
    result = expand(result)
    stats.expanded_disjuncts = budget.used
    stats.output_size = formula_size(result)
    stats.unbounded_remaining = 0

    log_stage_event(
        logger,
        "qfree-expand",
        cases=budget.used,
        output_size=stats.output_size,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )
    assert count_quantifiers(result) == 0
    return result


def describe_violation(violation: Violation) -> str:
    return f"condition ({violation.condition}) at {violation.location or '/'}: {violation.offending}"

