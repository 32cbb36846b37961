"""Elimination of unbounded quantifiers in favour of bounded ones.

This module provides:
- phi_minus_infinity: the behaviour of a normalized formula as y -> -oo
- lower_bound_terms: the symbolic B-set, with binders for bounded quantifiers
- divisibility_case_splits: sign cases of the divisibility moduli and their period
- eliminate_exists: Exists y. phi -> a formula with bounded quantifiers only
- bound_all_quantifiers: the full pipeline, innermost quantifier first
- simplify: semantics-preserving cleanup and small-range unrolling
- bset_values / active_case / minus_infinity_threshold: helpers used to test
  the elimination against concrete values

For a formula phi normalized in y and a divisibility case with period delta,

    Exists y. phi  <=>  guard /\\ ( Eb z <= delta - 1 . phi_-oo[y := z + 1]
                                   \\/ OR_b binders. Eb z <= delta - 1 . phi[y := b + z + 1] )

taken as a disjunction over all divisibility cases.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from app.config import settings
from app.engine.normalize import (
    AtomClass,
    classify_literal,
    negative_guard,
    normalize_in,
    positive_guard,
    to_nnf,
    zero_guard,
)
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
    conj,
    count_unbounded_quantifiers,
    disj,
    evaluate,
    formula_size,
    free_variables,
    map_literals,
    rename_bound,
    substitute,
)
from app.logic.poly import Polynomial, SignClass, constant_sign, poly_product
from app.models.responses import EliminationStats
from app.utils.logging import log_stage_event

logger = logging.getLogger(__name__)


class NotNormalizedError(Exception):
    """Raised when a formula handed to elimination is not normalized in y."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


@dataclass(frozen=True)
class BSetEntry:
    """A lower-bound template and the bounded binders it ranges over.

    Binders are listed outermost first; each binder variable occurs only in
    this entry's template.
    """

    template: LinearTerm
    binders: tuple[tuple[VarId, Polynomial], ...] = ()


@dataclass(frozen=True)
class DivCaseSplit:
    """A sign assignment of the divisibility moduli.

    delta is positive whenever the guard holds.
    """

    negative: tuple[Polynomial, ...]
    positive: tuple[Polynomial, ...]
    guard: Formula
    delta: Polynomial


def _normalized(literal: Formula, y: VarId):
    """Classify a literal and check that y has coefficient 1."""
    classified = classify_literal(literal, y)
    if classified.kind in (AtomClass.T5, AtomClass.T6):
        raise NotNormalizedError(f"Equality on {y} left in a normalized formula")
    if classified.kind != AtomClass.T7 and classified.coefficient.coeffs != (1,):
        raise NotNormalizedError(f"Coefficient {classified.coefficient} on {y} is not 1")
    return classified


def phi_minus_infinity(phi: Formula, y: VarId) -> Formula:
    """Replace every `y < a` by TRUE and every `b < y` by FALSE."""

    def rewrite(literal: Formula) -> Formula:
        kind = _normalized(literal, y).kind
        if kind == AtomClass.T1:
            return TRUE
        if kind == AtomClass.T2:
            return FALSE
        return literal

    return map_literals(phi, rewrite)


def lower_bound_terms(
    phi: Formula, y: VarId, supply: Optional[VariableSupply] = None
) -> list[BSetEntry]:
    """Collect the symbolic lower bounds b of all `b < y` literals.

    Under a bounded quantifier over z, each template mentioning z gets its
    own fresh binder in place of z.
    """
    supply = supply or VariableSupply.for_formulas(phi)

    def collect(node: Formula) -> list[BSetEntry]:
        match node:
            case Not(_) | Lt() | Eq() | Div():
                classified = _normalized(node, y)
                if classified.kind == AtomClass.T2:
                    return [BSetEntry(classified.rest)]
                return []
            case And(args) | Or(args):
                return [entry for a in args for entry in collect(a)]
            case BExists(var, bound, body) | BForall(var, bound, body):
                entries = []
                for entry in collect(body):
                    if var not in entry.template.variables:
                        entries.append(entry)
                        continue
                    binder = supply.fresh(var)
                    template = entry.template.substitute(var, LinearTerm.variable(binder))
                    entries.append(BSetEntry(template, ((binder, bound),) + entry.binders))
                return entries
            case Exists() | Forall():
                raise NotNormalizedError("Unbounded quantifier inside a formula being eliminated")
        return []

    unique: list[BSetEntry] = []
    for entry in collect(phi):
        if entry not in unique:
            unique.append(entry)
    return unique


def _divisibility_moduli(phi: Formula, y: VarId) -> tuple[Polynomial, ...]:
    found: set[Polynomial] = set()

    def walk(node: Formula) -> None:
        match node:
            case Div() | Not(Div()):
                classified = _normalized(node, y)
                if classified.kind in (AtomClass.T3, AtomClass.T4):
                    assert classified.modulus is not None
                    found.add(classified.modulus)
            case And(args) | Or(args):
                for a in args:
                    walk(a)
            case Exists(_, body) | Forall(_, body) | BExists(_, _, body) | BForall(_, _, body):
                walk(body)

    walk(phi)
    return tuple(sorted(found, key=lambda p: (p.degree, p.coeffs)))


def divisibility_case_splits(phi: Formula, y: VarId) -> list[DivCaseSplit]:
    """One case per disjoint pair (S-, S+) of the moduli of y-divisibilities.

    Cases whose guard fails for every t because of a constant modulus are
    dropped.
    """
    moduli = _divisibility_moduli(phi, y)
    splits = []
    for signs in itertools.product((-1, 1, 0), repeat=len(moduli)):
        possible = True
        for p, sign in zip(moduli, signs):
            fixed = constant_sign(p)
            if fixed == SignClass.IDENTICALLY_ZERO and sign != 0:
                possible = False
            elif fixed == SignClass.POSITIVE_CONSTANT and sign != 1:
                possible = False
            elif fixed == SignClass.NEGATIVE_CONSTANT and sign != -1:
                possible = False
        if not possible:
            continue
        negative = tuple(p for p, s in zip(moduli, signs) if s == -1)
        positive = tuple(p for p, s in zip(moduli, signs) if s == 1)
        zero = tuple(p for p, s in zip(moduli, signs) if s == 0)
        guard = conj(
            *(negative_guard(p) for p in negative),
            *(positive_guard(p) for p in positive),
            *(zero_guard(p) for p in zero),
        )
        delta = poly_product(negative + positive)
        if len(negative) % 2:
            delta = -delta
        splits.append(DivCaseSplit(negative, positive, guard, delta))
    return splits


def active_case(splits: list[DivCaseSplit], t: int) -> DivCaseSplit:
    """The case whose guard holds at t.

    Raises:
        ValueError: If no guard holds, which means the split is incomplete.
    """
    for split in splits:
        if evaluate(split.guard, t, {}):
            return split
    raise ValueError(f"No divisibility case holds at t={t}")


def eliminate_exists(
    phi: Formula,
    y: VarId,
    supply: Optional[VariableSupply] = None,
    stats: Optional[EliminationStats] = None,
) -> Formula:
    """Equivalent of Exists y. phi with only bounded quantifiers.

    Args:
        phi: Formula normalized in y, with bounded quantifiers only.
        y: The normalized variable.
        supply: Fresh-variable source; built from phi when omitted.
        stats: Optional counters to update.

    Raises:
        NotNormalizedError: If phi is not normalized in y.
    """
    supply = supply or VariableSupply.for_formulas(phi)
    splits = divisibility_case_splits(phi, y)
    minus_infinity = phi_minus_infinity(phi, y)
    entries = lower_bound_terms(phi, y, supply)

    disjuncts = []
    for split in splits:
        bound = split.delta - 1
        z = supply.fresh("z")
        shift = LinearTerm.variable(z) + 1
        parts = [BExists(z, bound, substitute(minus_infinity, y, shift, supply))]
        for entry in entries:
            w = supply.fresh("z")
            inner: Formula = BExists(
                w,
                bound,
                substitute(phi, y, entry.template + LinearTerm.variable(w) + 1, supply),
            )
            for binder, binder_bound in reversed(entry.binders):
                inner = BExists(binder, binder_bound, inner)
            parts.append(inner)
        disjuncts.append(conj(split.guard, disj(*parts)))

    if stats is not None:
        stats.divisibility_cases += len(splits)
        stats.bset_entries += len(entries)
    return disj(*disjuncts)


# --- Simplification ---


def _fold_constant(term: LinearTerm) -> Optional[int]:
    if term.is_constant and term.constant.is_constant:
        return term.constant.constant_value()
    return None


def _reduce_mod(term: LinearTerm, m: int) -> LinearTerm:
    coeffs = []
    for var, p in term.coeffs:
        coeffs.append((var, Polynomial.constant(p.constant_value() % m) if p.is_constant else p))
    constant = term.constant
    if constant.is_constant:
        constant = Polynomial.constant(constant.constant_value() % m)
    return LinearTerm(tuple(coeffs), constant)


def _simplify_atom(phi: Formula) -> Formula:
    match phi:
        case Lt(term):
            value = _fold_constant(term)
            if value is not None:
                return TRUE if value < 0 else FALSE
        case Eq(term):
            value = _fold_constant(term)
            if value is not None:
                return TRUE if value == 0 else FALSE
        case Div(modulus, term) if modulus.is_constant:
            m = abs(modulus.constant_value())
            if m == 0:
                return FALSE
            if m == 1:
                return TRUE
            reduced = _reduce_mod(term, m)
            value = _fold_constant(reduced)
            if value is not None:
                return TRUE if value == 0 else FALSE
            return Div(Polynomial.constant(m), reduced)
    return phi


def _unique(items: Iterable[Formula]) -> list[Formula]:
    seen: set[Formula] = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


_NO_CAPTURE = VariableSupply()


def simplify(phi: Formula, expansion_limit: int = 4) -> Formula:
    """Semantics-preserving cleanup.

    Folds variable-free constant atoms, propagates TRUE/FALSE, flattens and
    deduplicates And/Or, drops quantifiers whose variable is unused and
    unrolls bounded quantifiers with a constant bound <= expansion_limit.
    """
    match phi:
        case Lt() | Eq() | Div():
            return _simplify_atom(phi)
        case Not(arg):
            inner = simplify(arg, expansion_limit)
            if isinstance(inner, TrueFormula):
                return FALSE
            if isinstance(inner, FalseFormula):
                return TRUE
            if isinstance(inner, Not):
                return inner.arg
            return Not(inner)
        case And(args):
            items = _unique(_flatten(And, [simplify(a, expansion_limit) for a in args]))
            return conj(*items)
        case Or(args):
            items = _unique(_flatten(Or, [simplify(a, expansion_limit) for a in args]))
            return disj(*items)
        case Exists(var, body) | Forall(var, body):
            inner = simplify(body, expansion_limit)
            if var not in free_variables(inner):
                return inner
            return type(phi)(var, inner)
        case BExists(var, bound, body) | BForall(var, bound, body):
            return _simplify_bounded(phi, var, bound, simplify(body, expansion_limit), expansion_limit)
    return phi


def _flatten(kind: type, items: list[Formula]) -> list[Formula]:
    out: list[Formula] = []
    for item in items:
        if isinstance(item, kind):
            out.extend(item.args)  # type: ignore[attr-defined]
        else:
            out.append(item)
    return out


def _simplify_bounded(
    phi: Formula, var: VarId, bound: Polynomial, body: Formula, expansion_limit: int
) -> Formula:
    existential = isinstance(phi, BExists)
    if var not in free_variables(body):
        # the range is nonempty iff bound >= 0
        if existential:
            return conj(_simplify_atom(Lt(LinearTerm.const(-bound - 1))), body)
        return disj(_simplify_atom(Lt(LinearTerm.const(bound))), body)
    if bound.is_constant:
        upper = bound.constant_value()
        if upper < 0:
            return FALSE if existential else TRUE
        if upper <= expansion_limit:
            return expand_range(var, upper, body, existential, expansion_limit)
    return type(phi)(var, bound, body)


def expand_range(var: VarId, upper: int, body: Formula, existential: bool, expansion_limit: int = 4) -> Formula:
    """Unroll a quantifier over [0, upper] into a finite disjunction or conjunction."""
    instances = (
        simplify(substitute(body, var, LinearTerm.const(k), _NO_CAPTURE), expansion_limit)
        for k in range(upper + 1)
    )
    return disj(*_unique(instances)) if existential else conj(*_unique(instances))


# --- Pipeline ---


def bound_all_quantifiers(
    phi: Formula,
    supply: Optional[VariableSupply] = None,
    expansion_limit: int = 4,
    stats: Optional[EliminationStats] = None,
    after_step: Optional[Callable[[Formula], Formula]] = None,
) -> Formula:
    """Equivalent formula whose quantifiers are all bounded.

    Unbounded quantifiers are removed innermost first; `Forall y. psi` is
    handled as `~Exists y. ~psi`.

    Args:
        phi: Any formula.
        supply: Fresh-variable source; built from phi when omitted.
        expansion_limit: Largest constant bound simplify unrolls.
        stats: Optional counters to update.
        after_step: Extra rewriting applied after each elimination step.

    Returns:
        A formula with count_unbounded_quantifiers == 0.
    """
    supply = supply or VariableSupply.for_formulas(phi)
    stats = stats if stats is not None else EliminationStats()
    finish = after_step or (lambda f: f)

    def eliminate_one(y: VarId, body: Formula) -> Formula:
        started = time.perf_counter()
        if y not in free_variables(body):
            return body
        y_new, normalized = normalize_in(body, y, supply, stats)
        eliminated = eliminate_exists(normalized, y_new, supply, stats)
        result = finish(simplify(eliminated, expansion_limit))
        stats.quantifiers_eliminated += 1
        log_stage_event(
            logger,
            "eliminate",
            variable=str(y),
            output_size=formula_size(result),
            elapsed_ms=(time.perf_counter() - started) * 1000,
        )
        return result

    def walk(node: Formula) -> Formula:
        match node:
            case Not(arg):
                return Not(walk(arg))
            case And(args):
                return And(tuple(walk(a) for a in args))
            case Or(args):
                return Or(tuple(walk(a) for a in args))
            case BExists(var, bound, body) | BForall(var, bound, body):
                return type(node)(var, bound, walk(body))
            case Exists(var, body):
                return eliminate_one(var, walk(body))
            case Forall(var, body):
                negated = to_nnf(Not(walk(body)))
                return to_nnf(Not(eliminate_one(var, negated)))
        return node

    result = finish(simplify(walk(rename_bound(phi, supply)), expansion_limit))
    stats.output_size = formula_size(result)
    stats.unbounded_remaining = count_unbounded_quantifiers(result)
    return result


# --- Concrete-value helpers ---


def bset_values(entry: BSetEntry, t: int, env: Mapping[VarId, int]) -> list[int]:
    """Every value of an entry's template at t over all binder instantiations."""
    ranges = [range(bound(t) + 1) for _, bound in entry.binders]
    names = [binder for binder, _ in entry.binders]
    values = []
    for choice in itertools.product(*ranges):
        local = dict(env)
        local.update(zip(names, choice))
        values.append(entry.template.evaluate(t, local))
    return values


def stabilization_window(
    entries: list[BSetEntry],
    t: int,
    env: Mapping[VarId, int],
    delta: int,
    multiplier: Optional[int] = None,
) -> int:
    """Search depth for minus_infinity_threshold: multiplier * delta * (1 + max |b|).

    The multiplier defaults to PPRES_WINDOW_MULTIPLIER.
    """
    if multiplier is None:
        multiplier = settings.PPRES_WINDOW_MULTIPLIER
    largest = max((abs(v) for entry in entries for v in bset_values(entry, t, env)), default=0)
    return multiplier * max(delta, 1) * (1 + largest)


def minus_infinity_threshold(
    phi: Formula,
    minus_infinity: Formula,
    y: VarId,
    t: int,
    env: Mapping[VarId, int],
    window: int,
) -> Optional[int]:
    """Largest M in [-window, 0] such that phi and its -oo variant agree on [-window, M].

    Returns:
        M, or None when they already disagree at -window (inconclusive).
    """
    local = dict(env)
    threshold = None
    for e in range(-window, 1):
        local[y] = e
        if evaluate(phi, t, local) != evaluate(minus_infinity, t, local):
            break
        threshold = e
    return threshold
