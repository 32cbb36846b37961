"""Formula representation for Presburger arithmetic with coefficients in Z[t].

This module provides:
- VarId and VariableSupply (fresh-name generation)
- LinearTerm: canonical sum of polynomial-scaled variables plus a constant
- Syntactic term trees and term_normalize
- The Formula AST (atoms, Boolean connectives, bounded and unbounded quantifiers)
- Capture-avoiding substitution, rectification and alpha-equivalence
- evaluate: truth of a formula at a fixed parameter value t

Comparison atoms are stored normalized: Lt(term) means `term < 0` and
Eq(term) means `term = 0`. The parameter t never appears as a variable; it
only occurs inside Polynomial coefficients.
"""

import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

from app.logic.poly import ONE, ZERO, Polynomial


class UnboundedQuantifierError(Exception):
    """Raised when finite evaluation meets an unbounded quantifier."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


class MissingAssignmentError(Exception):
    """Raised when an environment does not cover the free variables.

    Attributes:
        variables: Printable names of the unassigned variables.
    """

    def __init__(self, variables: list[str]) -> None:
        self.variables = variables
        self.message = f"Missing assignment for free variables: {', '.join(variables)}"
        super().__init__(self.message)


# --- Variables ---


@dataclass(frozen=True, order=True, slots=True)
class VarId:
    """A variable name plus a serial number; serial 0 means user-written."""

    name: str
    serial: int = 0

    def __str__(self) -> str:
        if self.serial == 0:
            return self.name
        return f"{self.name}'{self.serial}"


class VariableSupply:
    """Thread-safe source of fresh variables.

    Serials are issued monotonically and never reused by one supply. Build
    the supply with `for_formulas` so that it starts above every serial
    already present in the inputs.
    """

    def __init__(self, start: int = 0) -> None:
        self._last = start
        self._lock = threading.Lock()

    @classmethod
    def for_formulas(cls, *items: Union["Formula", "LinearTerm"]) -> "VariableSupply":
        return cls(max((max_serial(item) for item in items), default=0))

    def fresh(self, base: Union[VarId, str]) -> VarId:
        name = base.name if isinstance(base, VarId) else base
        with self._lock:
            self._last += 1
            serial = self._last
        return VarId(name, serial)


# --- Linear terms ---


@dataclass(frozen=True, slots=True)
class LinearTerm:
    """Canonical term sum(p_i(t) * x_i) + q(t).

    `coeffs` is kept sorted by variable with no zero coefficients, so equal
    terms compare equal.
    """

    coeffs: tuple[tuple[VarId, Polynomial], ...] = ()
    constant: Polynomial = ZERO

    def __post_init__(self) -> None:
        merged: dict[VarId, Polynomial] = {}
        for var, coefficient in self.coeffs:
            merged[var] = merged.get(var, ZERO) + coefficient
        items = tuple(sorted((v, p) for v, p in merged.items() if not p.is_zero))
        object.__setattr__(self, "coeffs", items)

    @classmethod
    def variable(cls, var: VarId) -> "LinearTerm":
        return cls(((var, ONE),))

    @classmethod
    def const(cls, value: Union[int, Polynomial]) -> "LinearTerm":
        if isinstance(value, int):
            value = Polynomial.constant(value)
        return cls((), value)

    @property
    def variables(self) -> frozenset[VarId]:
        return frozenset(v for v, _ in self.coeffs)

    @property
    def is_constant(self) -> bool:
        """True when no variable occurs (the constant may still depend on t)."""
        return not self.coeffs

    @property
    def is_zero(self) -> bool:
        return not self.coeffs and self.constant.is_zero

    def coefficient(self, var: VarId) -> Polynomial:
        for v, p in self.coeffs:
            if v == var:
                return p
        return ZERO

    def drop(self, var: VarId) -> "LinearTerm":
        """The term with the `var` summand removed."""
        return LinearTerm(tuple((v, p) for v, p in self.coeffs if v != var), self.constant)

    def __add__(self, other: Union["LinearTerm", int, Polynomial]) -> "LinearTerm":
        if not isinstance(other, LinearTerm):
            other = LinearTerm.const(other)
        return LinearTerm(self.coeffs + other.coeffs, self.constant + other.constant)

    def __neg__(self) -> "LinearTerm":
        return LinearTerm(tuple((v, -p) for v, p in self.coeffs), -self.constant)

    def __sub__(self, other: Union["LinearTerm", int, Polynomial]) -> "LinearTerm":
        if not isinstance(other, LinearTerm):
            other = LinearTerm.const(other)
        return self + (-other)

    def scale(self, factor: Union[int, Polynomial]) -> "LinearTerm":
        if isinstance(factor, int):
            factor = Polynomial.constant(factor)
        return LinearTerm(tuple((v, p * factor) for v, p in self.coeffs), self.constant * factor)

    def substitute(self, var: VarId, replacement: "LinearTerm") -> "LinearTerm":
        coefficient = self.coefficient(var)
        if coefficient.is_zero:
            return self
        return self.drop(var) + replacement.scale(coefficient)

    def rename(self, mapping: Mapping[VarId, VarId]) -> "LinearTerm":
        if not any(v in mapping for v, _ in self.coeffs):
            return self
        return LinearTerm(tuple((mapping.get(v, v), p) for v, p in self.coeffs), self.constant)

    def evaluate(self, t: int, env: Mapping[VarId, int]) -> int:
        total = self.constant(t)
        for var, coefficient in self.coeffs:
            total += coefficient(t) * env[var]
        return total


# --- Syntactic terms ---


@dataclass(frozen=True)
class TermVar:
    var: VarId


@dataclass(frozen=True)
class TermConst:
    value: Polynomial


@dataclass(frozen=True)
class TermAdd:
    left: "TermNode"
    right: "TermNode"


@dataclass(frozen=True)
class TermNeg:
    arg: "TermNode"


@dataclass(frozen=True)
class TermScale:
    """f_alpha(arg): scalar multiplication by alpha(t)."""

    factor: Polynomial
    arg: "TermNode"


TermNode = Union[TermVar, TermConst, TermAdd, TermNeg, TermScale]


def term_normalize(node: TermNode) -> LinearTerm:
    """Flatten a syntactic term built from constants, variables, +, - and f_alpha."""
    match node:
        case TermVar(var):
            return LinearTerm.variable(var)
        case TermConst(value):
            return LinearTerm.const(value)
        case TermAdd(left, right):
            return term_normalize(left) + term_normalize(right)
        case TermNeg(arg):
            return -term_normalize(arg)
        case TermScale(factor, arg):
            return term_normalize(arg).scale(factor)
    raise TypeError(f"Not a term node: {node!r}")


# --- Formulas ---


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True)
class FalseFormula(Formula):
    pass


TRUE = TrueFormula()
FALSE = FalseFormula()


@dataclass(frozen=True)
class Lt(Formula):
    """term < 0"""

    term: LinearTerm


@dataclass(frozen=True)
class Eq(Formula):
    """term = 0"""

    term: LinearTerm


@dataclass(frozen=True)
class Div(Formula):
    """D_modulus(term); false whenever the modulus evaluates to 0."""

    modulus: Polynomial
    term: LinearTerm


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Exists(Formula):
    var: VarId
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: VarId
    body: Formula


@dataclass(frozen=True)
class BExists(Formula):
    """Exists var in [0, bound(t)]."""

    var: VarId
    bound: Polynomial
    body: Formula


@dataclass(frozen=True)
class BForall(Formula):
    """Forall var in [0, bound(t)]."""

    var: VarId
    bound: Polynomial
    body: Formula


Atom = Union[Lt, Eq, Div]
ATOM_TYPES = (Lt, Eq, Div)
UNBOUNDED_TYPES = (Exists, Forall)
BOUNDED_TYPES = (BExists, BForall)
QUANTIFIER_TYPES = UNBOUNDED_TYPES + BOUNDED_TYPES


# --- Constructors ---


def _as_term(value: Union[LinearTerm, VarId, int, Polynomial]) -> LinearTerm:
    if isinstance(value, LinearTerm):
        return value
    if isinstance(value, VarId):
        return LinearTerm.variable(value)
    return LinearTerm.const(value)


TermLike = Union[LinearTerm, VarId, int, Polynomial]


def lt(lhs: TermLike, rhs: TermLike) -> Formula:
    return Lt(_as_term(lhs) - _as_term(rhs))


def le(lhs: TermLike, rhs: TermLike) -> Formula:
    return Lt(_as_term(lhs) - _as_term(rhs) - 1)


def gt(lhs: TermLike, rhs: TermLike) -> Formula:
    return lt(rhs, lhs)


def ge(lhs: TermLike, rhs: TermLike) -> Formula:
    return le(rhs, lhs)


def eq(lhs: TermLike, rhs: TermLike) -> Formula:
    return Eq(_as_term(lhs) - _as_term(rhs))


def ne(lhs: TermLike, rhs: TermLike) -> Formula:
    return Not(eq(lhs, rhs))


def div(modulus: Union[int, Polynomial], term: TermLike) -> Formula:
    if isinstance(modulus, int):
        modulus = Polynomial.constant(modulus)
    return Div(modulus, _as_term(term))


def conj(*args: Formula) -> Formula:
    """n-ary conjunction that flattens nested And nodes and folds units."""
    items: list[Formula] = []
    for arg in args:
        if isinstance(arg, FalseFormula):
            return FALSE
        if isinstance(arg, TrueFormula):
            continue
        if isinstance(arg, And):
            items.extend(arg.args)
        else:
            items.append(arg)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def disj(*args: Formula) -> Formula:
    """n-ary disjunction that flattens nested Or nodes and folds units."""
    items: list[Formula] = []
    for arg in args:
        if isinstance(arg, TrueFormula):
            return TRUE
        if isinstance(arg, FalseFormula):
            continue
        if isinstance(arg, Or):
            items.extend(arg.args)
        else:
            items.append(arg)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


# --- Structural queries ---


def _terms_and_binders(phi: Formula) -> Iterable[Union[LinearTerm, VarId]]:
    stack = [phi]
    while stack:
        node = stack.pop()
        match node:
            case Lt(term) | Eq(term) | Div(_, term):
                yield term
            case Not(arg):
                stack.append(arg)
            case And(args) | Or(args):
                stack.extend(args)
            case Exists(var, body) | Forall(var, body) | BExists(var, _, body) | BForall(var, _, body):
                yield var
                stack.append(body)


def max_serial(item: Union[Formula, LinearTerm]) -> int:
    """Largest variable serial occurring anywhere in a formula or term."""
    if isinstance(item, LinearTerm):
        return max((v.serial for v in item.variables), default=0)
    best = 0
    for entry in _terms_and_binders(item):
        if isinstance(entry, VarId):
            best = max(best, entry.serial)
        else:
            best = max(best, max((v.serial for v in entry.variables), default=0))
    return best


def free_variables(phi: Formula) -> frozenset[VarId]:
    match phi:
        case Lt(term) | Eq(term) | Div(_, term):
            return term.variables
        case Not(arg):
            return free_variables(arg)
        case And(args) | Or(args):
            return frozenset().union(*(free_variables(a) for a in args))
        case Exists(var, body) | Forall(var, body) | BExists(var, _, body) | BForall(var, _, body):
            return free_variables(body) - {var}
    return frozenset()


def bound_variables(phi: Formula) -> frozenset[VarId]:
    return frozenset(entry for entry in _terms_and_binders(phi) if isinstance(entry, VarId))


def count_unbounded_quantifiers(phi: Formula) -> int:
    """Number of Exists/Forall nodes; 0 means the formula has only bounded quantifiers."""
    match phi:
        case Not(arg):
            return count_unbounded_quantifiers(arg)
        case And(args) | Or(args):
            return sum(count_unbounded_quantifiers(a) for a in args)
        case Exists(_, body) | Forall(_, body):
            return 1 + count_unbounded_quantifiers(body)
        case BExists(_, _, body) | BForall(_, _, body):
            return count_unbounded_quantifiers(body)
    return 0


def count_quantifiers(phi: Formula) -> int:
    return sum(1 for entry in _terms_and_binders(phi) if isinstance(entry, VarId))


def formula_size(phi: Formula) -> int:
    """Number of AST nodes."""
    match phi:
        case Not(arg):
            return 1 + formula_size(arg)
        case And(args) | Or(args):
            return 1 + sum(formula_size(a) for a in args)
        case Exists(_, body) | Forall(_, body) | BExists(_, _, body) | BForall(_, _, body):
            return 1 + formula_size(body)
    return 1


def map_literals(phi: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild phi with every literal (atom or negated atom) replaced by fn(literal).

    Connectives and quantifiers are kept; TRUE/FALSE are passed through.
    """
    match phi:
        case Not(arg) if isinstance(arg, ATOM_TYPES):
            return fn(phi)
        case Not(arg):
            return Not(map_literals(arg, fn))
        case And(args):
            return And(tuple(map_literals(a, fn) for a in args))
        case Or(args):
            return Or(tuple(map_literals(a, fn) for a in args))
        case Exists(var, body):
            return Exists(var, map_literals(body, fn))
        case Forall(var, body):
            return Forall(var, map_literals(body, fn))
        case BExists(var, bound, body):
            return BExists(var, bound, map_literals(body, fn))
        case BForall(var, bound, body):
            return BForall(var, bound, map_literals(body, fn))
        case Lt() | Eq() | Div():
            return fn(phi)
    return phi


# --- Renaming and substitution ---


def _rename(phi: Formula, mapping: dict[VarId, VarId], fresh: Callable[[VarId], VarId]) -> Formula:
    match phi:
        case Lt(term):
            return Lt(term.rename(mapping))
        case Eq(term):
            return Eq(term.rename(mapping))
        case Div(modulus, term):
            return Div(modulus, term.rename(mapping))
        case Not(arg):
            return Not(_rename(arg, mapping, fresh))
        case And(args):
            return And(tuple(_rename(a, mapping, fresh) for a in args))
        case Or(args):
            return Or(tuple(_rename(a, mapping, fresh) for a in args))
        case Exists(var, body) | Forall(var, body):
            new = fresh(var)
            return type(phi)(new, _rename(body, {**mapping, var: new}, fresh))
        case BExists(var, bound, body) | BForall(var, bound, body):
            new = fresh(var)
            return type(phi)(new, bound, _rename(body, {**mapping, var: new}, fresh))
    return phi


def rename_bound(phi: Formula, supply: Optional[VariableSupply] = None) -> Formula:
    """Give every binder a fresh variable (rectification).

    Afterwards bound variables are pairwise distinct and distinct from all
    free variables.
    """
    supply = supply or VariableSupply.for_formulas(phi)
    return _rename(phi, {}, supply.fresh)


def alpha_equivalent(phi: Formula, psi: Formula) -> bool:
    """Structural equality up to the names of bound variables."""

    def canonical(formula: Formula) -> Formula:
        counter = iter(range(1, 1 << 62))
        return _rename(formula, {}, lambda _var: VarId("#", next(counter)))

    return canonical(phi) == canonical(psi)


def substitute(
    phi: Formula,
    var: VarId,
    replacement: LinearTerm,
    supply: Optional[VariableSupply] = None,
) -> Formula:
    """Replace the free occurrences of var in phi by a linear term.

    Binders of phi that occur free in the replacement are renamed first, so
    no variable of the replacement is captured.
    """
    supply = supply or VariableSupply.for_formulas(phi, replacement)
    captured = replacement.variables

    def walk(node: Formula) -> Formula:
        match node:
            case Lt(term):
                return Lt(term.substitute(var, replacement))
            case Eq(term):
                return Eq(term.substitute(var, replacement))
            case Div(modulus, term):
                return Div(modulus, term.substitute(var, replacement))
            case Not(arg):
                return Not(walk(arg))
            case And(args):
                return And(tuple(walk(a) for a in args))
            case Or(args):
                return Or(tuple(walk(a) for a in args))
            case Exists(bv, body) | Forall(bv, body) | BExists(bv, _, body) | BForall(bv, _, body):
                if bv == var:
                    return node
                if bv in captured:
                    new = supply.fresh(bv)
                    body = _rename(body, {bv: new}, lambda v: v)
                    bv = new
                if isinstance(node, BOUNDED_TYPES):
                    return type(node)(bv, node.bound, walk(body))
                return type(node)(bv, walk(body))
        return node

    return walk(phi)


# --- Semantics ---


def _evaluate(phi: Formula, t: int, env: dict[VarId, int]) -> bool:
    match phi:
        case TrueFormula():
            return True
        case FalseFormula():
            return False
        case Lt(term):
            return term.evaluate(t, env) < 0
        case Eq(term):
            return term.evaluate(t, env) == 0
        case Div(modulus, term):
            m = modulus(t)
            return m != 0 and term.evaluate(t, env) % m == 0
        case Not(arg):
            return not _evaluate(arg, t, env)
        case And(args):
            return all(_evaluate(a, t, env) for a in args)
        case Or(args):
            return any(_evaluate(a, t, env) for a in args)
        case BExists(var, bound, body) | BForall(var, bound, body):
            want = isinstance(phi, BExists)
            saved = env.get(var)
            try:
                for k in range(bound(t) + 1):
                    env[var] = k
                    if _evaluate(body, t, env) == want:
                        return want
                return not want
            finally:
                if saved is None:
                    env.pop(var, None)
                else:
                    env[var] = saved
        case Exists() | Forall():
            raise UnboundedQuantifierError(
                "Unbounded quantifier reached during finite evaluation; "
                "decide the formula with the classical oracle instead"
            )
    raise TypeError(f"Not a formula: {phi!r}")


def evaluate(phi: Formula, t: int, env: Mapping[VarId, int], checked: bool = True) -> bool:
    """Truth value of phi at parameter t under env.

    Bounded quantifiers range over [0, bound(t)] (empty when the bound is
    negative) and D_m with m(t) = 0 is false. Grid loops that already
    validated phi once pass checked=False to skip the upfront scans.

    Raises:
        UnboundedQuantifierError: If phi has Exists/Forall nodes.
        MissingAssignmentError: If env misses a free variable of phi.
    """
    if not checked:
        return _evaluate(phi, t, dict(env))
    if count_unbounded_quantifiers(phi):
        raise UnboundedQuantifierError(
            f"Formula has {count_unbounded_quantifiers(phi)} unbounded quantifier(s)"
        )
    missing = sorted(str(v) for v in free_variables(phi) if v not in env)
    if missing:
        raise MissingAssignmentError(missing)
    return _evaluate(phi, t, dict(env))
