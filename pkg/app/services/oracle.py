"""Ground-truth semantics for parametric formulas.

This module provides:
- ground: fix the parameter t, turning every polynomial into an integer
- classical_cooper_eliminate / classical_cooper_decide: textbook Cooper
  quantifier elimination over Z for ground formulas
- eval_bounded: finite enumeration for formulas with bounded quantifiers only
- check_equiv / replay: equivalence on a finite (t, assignment) grid

The Cooper procedure here is written independently of app.engine; the two
share only the formula AST, so a bug in one is visible to the other.
"""

import itertools
import logging
import math
import time
from typing import Callable, Iterable, Mapping, Optional

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
    MissingAssignmentError,
    Not,
    Or,
    TrueFormula,
    VariableSupply,
    VarId,
    conj,
    count_unbounded_quantifiers,
    disj,
    evaluate,
    free_variables,
    substitute,
)
from app.logic.parser import print_formula
from app.logic.poly import Polynomial
from app.models.responses import EquivReport, GridSpec, Witness
from app.services.workers import run_parallel
from app.utils.logging import log_check_event

logger = logging.getLogger(__name__)

GroundFormula = Formula


class ArityMismatchError(Exception):
    """Raised when two formulas compared on a grid have unrelated free variables."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


def _ground_term(term: LinearTerm, t: int) -> LinearTerm:
    return LinearTerm(
        tuple((v, Polynomial.constant(p(t))) for v, p in term.coeffs),
        Polynomial.constant(term.constant(t)),
    )


def ground(phi: Formula, t: int) -> GroundFormula:
    """Evaluate every coefficient, modulus and bound of phi at t.

    Divisibility atoms whose modulus vanishes at t become FALSE.
    """
    match phi:
        case Lt(term):
            return Lt(_ground_term(term, t))
        case Eq(term):
            return Eq(_ground_term(term, t))
        case Div(modulus, term):
            m = modulus(t)
            return FALSE if m == 0 else Div(Polynomial.constant(m), _ground_term(term, t))
        case Not(arg):
            return Not(ground(arg, t))
        case And(args):
            return And(tuple(ground(a, t) for a in args))
        case Or(args):
            return Or(tuple(ground(a, t) for a in args))
        case Exists(var, body):
            return Exists(var, ground(body, t))
        case Forall(var, body):
            return Forall(var, ground(body, t))
        case BExists(var, bound, body):
            return BExists(var, Polynomial.constant(bound(t)), ground(body, t))
        case BForall(var, bound, body):
            return BForall(var, Polynomial.constant(bound(t)), ground(body, t))
    return phi


# --- Classical Cooper elimination ---


def _int(p: Polynomial) -> int:
    return p.constant_value()


def _fold(phi: GroundFormula) -> GroundFormula:
    """Evaluate closed atoms and propagate TRUE/FALSE."""
    match phi:
        case Lt(term) if term.is_constant:
            return TRUE if _int(term.constant) < 0 else FALSE
        case Eq(term) if term.is_constant:
            return TRUE if _int(term.constant) == 0 else FALSE
        case Div(modulus, term) if term.is_constant:
            m = _int(modulus)
            return TRUE if m != 0 and _int(term.constant) % m == 0 else FALSE
        case Not(arg):
            inner = _fold(arg)
            if isinstance(inner, TrueFormula):
                return FALSE
            if isinstance(inner, FalseFormula):
                return TRUE
            return Not(inner)
        case And(args):
            return conj(*(_fold(a) for a in args))
        case Or(args):
            return disj(*(_fold(a) for a in args))
    return phi


def _nnf(phi: GroundFormula, negate: bool = False) -> GroundFormula:
    """NNF over <, D and ~D only; equalities become pairs of strict bounds."""
    match phi:
        case TrueFormula():
            return FALSE if negate else TRUE
        case FalseFormula():
            return TRUE if negate else FALSE
        case Lt(term):
            return Lt(-term - 1) if negate else phi
        case Eq(term):
            if negate:
                return Or((Lt(term), Lt(-term)))
            return And((Lt(term - 1), Lt(-term - 1)))
        case Div():
            return Not(phi) if negate else phi
        case Not(arg):
            return _nnf(arg, not negate)
        case And(args):
            parts = tuple(_nnf(a, negate) for a in args)
            return Or(parts) if negate else And(parts)
        case Or(args):
            parts = tuple(_nnf(a, negate) for a in args)
            return And(parts) if negate else Or(parts)
    raise ValueError(f"Quantified subformula reached Cooper NNF: {phi!r}")


def _map_atoms(phi: GroundFormula, fn: Callable[[Formula], Formula]) -> GroundFormula:
    match phi:
        case Lt() | Div():
            return fn(phi)
        case Not(arg):
            return Not(_map_atoms(arg, fn))
        case And(args):
            return And(tuple(_map_atoms(a, fn) for a in args))
        case Or(args):
            return Or(tuple(_map_atoms(a, fn) for a in args))
    return phi


def _atoms(phi: GroundFormula) -> Iterable[Formula]:
    match phi:
        case Lt() | Div():
            yield phi
        case Not(arg):
            yield from _atoms(arg)
        case And(args) | Or(args):
            for a in args:
                yield from _atoms(a)


def _cooper_exists(x: VarId, body: GroundFormula) -> GroundFormula:
    psi = _fold(_nnf(body))
    if x not in free_variables(psi):
        return psi

    # make every coefficient of x equal to +-l, then read x as l*x
    l = math.lcm(*(abs(_int(a.term.coefficient(x))) for a in _atoms(psi) if x in a.term.variables))

    def unify(atom: Formula) -> Formula:
        c = _int(atom.term.coefficient(x))
        if c == 0:
            return atom
        k = l // abs(c)
        term = atom.term.drop(x).scale(k) + LinearTerm.variable(x).scale(1 if c > 0 else -1)
        if isinstance(atom, Div):
            return Div(Polynomial.constant(abs(_int(atom.modulus)) * k), term)
        return Lt(term)

    psi = _map_atoms(psi, unify)
    if l > 1:
        psi = conj(psi, Div(Polynomial.constant(l), LinearTerm.variable(x)))

    delta = 1
    lower_bounds: list[LinearTerm] = []
    for atom in _atoms(psi):
        c = _int(atom.term.coefficient(x))
        if c == 0:
            continue
        if isinstance(atom, Div):
            delta = math.lcm(delta, abs(_int(atom.modulus)))
        elif c == -1 and atom.term.drop(x) not in lower_bounds:
            # -x + r < 0  <=>  r < x
            lower_bounds.append(atom.term.drop(x))

    def minus_infinity(atom: Formula) -> Formula:
        if isinstance(atom, Lt):
            c = _int(atom.term.coefficient(x))
            if c == 1:
                return TRUE
            if c == -1:
                return FALSE
        return atom

    psi_minf = _map_atoms(psi, minus_infinity)
    no_capture = VariableSupply()
    disjuncts = [_fold(substitute(psi_minf, x, LinearTerm.const(j), no_capture)) for j in range(1, delta + 1)]
    for b in lower_bounds:
        for j in range(1, delta + 1):
            disjuncts.append(_fold(substitute(psi, x, b + j, no_capture)))
            if isinstance(disjuncts[-1], TrueFormula):
                return TRUE
    return _fold(disj(*disjuncts))


def classical_cooper_eliminate(phi: GroundFormula) -> GroundFormula:
    """Quantifier-free equivalent of a ground formula over Z.

    Bounded quantifiers are expanded into finite disjunctions/conjunctions
    first; unbounded ones are eliminated innermost first.
    """
    no_capture = VariableSupply()
    match phi:
        case Lt() | Eq() | Div():
            return _fold(phi)
        case Not(arg):
            return _fold(Not(classical_cooper_eliminate(arg)))
        case And(args):
            return _fold(And(tuple(classical_cooper_eliminate(a) for a in args)))
        case Or(args):
            return _fold(Or(tuple(classical_cooper_eliminate(a) for a in args)))
        case BExists(var, bound, body) | BForall(var, bound, body):
            inner = classical_cooper_eliminate(body)
            instances = [
                _fold(substitute(inner, var, LinearTerm.const(k), no_capture)) for k in range(_int(bound) + 1)
            ]
            return disj(*instances) if isinstance(phi, BExists) else conj(*instances)
        case Exists(var, body):
            return _cooper_exists(var, classical_cooper_eliminate(body))
        case Forall(var, body):
            return _fold(Not(_cooper_exists(var, Not(classical_cooper_eliminate(body)))))
    return phi


def classical_cooper_decide(phi: GroundFormula, env: Mapping[VarId, int]) -> bool:
    """Truth of a ground formula over Z, unbounded quantifiers included.

    Raises:
        MissingAssignmentError: If env misses a free variable.
    """
    missing = sorted(str(v) for v in free_variables(phi) if v not in env)
    if missing:
        raise MissingAssignmentError(missing)
    closed = phi
    no_capture = VariableSupply()
    for var in free_variables(phi):
        closed = substitute(closed, var, LinearTerm.const(env[var]), no_capture)
    return evaluate(classical_cooper_eliminate(closed), 0, {})


def eval_bounded(phi: Formula, t: int, env: Mapping[VarId, int]) -> bool:
    """Finite-enumeration truth value; phi may contain bounded quantifiers only.

    Raises:
        UnboundedQuantifierError: If phi has Exists/Forall nodes.
    """
    return evaluate(ground(phi, t), t, env)


# --- Equivalence checks ---


def decider(phi: Formula, t: int) -> Callable[[Mapping[VarId, int]], bool]:
    """Truth function of phi at fixed t, reusable across many assignments."""
    grounded = ground(phi, t)
    if count_unbounded_quantifiers(grounded):
        grounded = classical_cooper_eliminate(grounded)
    return lambda env: evaluate(grounded, t, env, checked=False)


def _grid_variables(phi: Formula, psi: Formula) -> list[VarId]:
    left, right = free_variables(phi), free_variables(psi)
    if not (left <= right or right <= left):
        raise ArityMismatchError(
            f"Free variables differ: {', '.join(sorted(map(str, left)))} "
            f"vs {', '.join(sorted(map(str, right)))}"
        )
    return sorted(left | right)


def grid_axis(radius: int) -> list[int]:
    """Values of one grid coordinate, smallest magnitude first: 0, 1, -1, 2, -2, ..."""
    axis = [0]
    for k in range(1, radius + 1):
        axis.extend((k, -k))
    return axis


def check_equiv(
    phi: Formula,
    psi: Formula,
    t_values: Iterable[int],
    radius: int,
    threads: Optional[int] = None,
) -> EquivReport:
    """Compare phi and psi at every t and every assignment in [-radius, radius]^n.

    The free variables of one formula must include those of the other.
    The reported counterexample is the first failing (t, assignment): least t,
    then the first assignment of itertools.product over grid_axis, so each
    coordinate runs 0, 1, -1, 2, -2, ... rather than in numeric order.

    Raises:
        ArityMismatchError: If neither free-variable set contains the other.
    """
    started = time.perf_counter()
    variables = _grid_variables(phi, psi)
    ts = sorted(set(t_values))
    names = [str(v) for v in variables]

    def check_one(t: int) -> tuple[int, Optional[Witness]]:
        left, right = decider(phi, t), decider(psi, t)
        checked = 0
        for point in itertools.product(grid_axis(radius), repeat=len(variables)):
            env = dict(zip(variables, point))
            a, b = left(env), right(env)
            checked += 1
            if a != b:
                return checked, Witness(t=t, assignment=dict(zip(names, point)), left=a, right=b)
        return checked, None

    results = run_parallel(check_one, ts, threads)
    grid = GridSpec(
        t_min=ts[0] if ts else 0,
        t_max=ts[-1] if ts else 0,
        radius=radius,
        variables=names,
    )
    points = sum(count for count, _ in results)
    witness = next((w for _, w in results if w is not None), None)
    if witness is not None:
        status = "counterexample"
    elif ts:
        status = "pass"
    else:
        status = "inconclusive"
    report = EquivReport(status=status, witness=witness, grid=grid, points_checked=points)

    log_check_event(
        logger,
        print_formula(phi),
        print_formula(psi),
        report.status,
        points,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )
    return report


def replay(report: EquivReport, phi: Formula, psi: Formula) -> bool:
    """Re-verify a counterexample: True iff the formulas really disagree there."""
    if report.witness is None:
        return False
    witness = report.witness
    by_name = {str(v): v for v in free_variables(phi) | free_variables(psi)}
    env = {by_name[name]: value for name, value in witness.assignment.items() if name in by_name}
    return decider(phi, witness.t)(env) != decider(psi, witness.t)(env)
