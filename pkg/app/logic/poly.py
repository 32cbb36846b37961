"""Univariate integer polynomials in the parameter t.

This module provides:
- Polynomial: an immutable, canonical dense coefficient sequence over Z
- Ring operations (add, negate, multiply, finite products)
- Evaluation at a natural-number parameter value
- Constant-sign classification used to prune impossible case splits
- Textual rendering in the `2t^2 - 3t + 1` syntax shared with the parser

Python integers are arbitrary precision, so products of many case-split
factors never overflow.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

IntLike = Union[int, "Polynomial"]


class SignClass(str, Enum):
    """Sign classification of a polynomial that holds for every t."""

    IDENTICALLY_ZERO = "identically-zero"
    POSITIVE_CONSTANT = "positive-constant"
    NEGATIVE_CONSTANT = "negative-constant"
    NONCONSTANT = "nonconstant"


def _canonical(coeffs: Iterable[int]) -> tuple[int, ...]:
    items = [int(c) for c in coeffs]
    while items and items[-1] == 0:
        items.pop()
    return tuple(items)


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Element of Z[t]; index i of `coeffs` holds the coefficient of t^i.

    The zero polynomial is the empty sequence. Construction always strips
    trailing zeros, so equal polynomials have equal coefficient tuples.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _canonical(self.coeffs))

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls((value,))

    @classmethod
    def parameter(cls) -> "Polynomial":
        """The polynomial t itself."""
        return cls((0, 1))

    @classmethod
    def monomial(cls, coefficient: int, degree: int) -> "Polynomial":
        return cls((0,) * degree + (coefficient,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def constant_value(self) -> int:
        """Return the integer value of a constant polynomial.

        Raises:
            ValueError: If the polynomial has degree >= 1.
        """
        if not self.is_constant:
            raise ValueError(f"Polynomial {self} is not constant")
        return self.coeffs[0] if self.coeffs else 0

    def __call__(self, t: int) -> int:
        return poly_eval(self, t)

    def __add__(self, other: IntLike) -> "Polynomial":
        return poly_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return poly_neg(self)

    def __sub__(self, other: IntLike) -> "Polynomial":
        return poly_add(self, poly_neg(_coerce(other)))

    def __rsub__(self, other: IntLike) -> "Polynomial":
        return poly_add(_coerce(other), poly_neg(self))

    def __mul__(self, other: IntLike) -> "Polynomial":
        return poly_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


ZERO = Polynomial()
ONE = Polynomial((1,))
T = Polynomial.parameter()


def _coerce(value: IntLike) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def poly_eval(p: Polynomial, t: int) -> int:
    """Evaluate p at the parameter value t (Horner's rule, exact)."""
    result = 0
    for c in reversed(p.coeffs):
        result = result * t + c
    return result


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    size = max(len(p.coeffs), len(q.coeffs))
    a = p.coeffs + (0,) * (size - len(p.coeffs))
    b = q.coeffs + (0,) * (size - len(q.coeffs))
    return Polynomial(tuple(x + y for x, y in zip(a, b)))


def poly_neg(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(-c for c in p.coeffs))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero or q.is_zero:
        return ZERO
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(tuple(out))


def poly_product(ps: Iterable[Polynomial]) -> Polynomial:
    """Multiply a finite list of polynomials; the empty product is 1."""
    result = ONE
    for p in ps:
        result = poly_mul(result, p)
    return result


def constant_sign(p: Polynomial) -> SignClass:
    """Classify p by sign when that sign does not depend on t."""
    if p.is_zero:
        return SignClass.IDENTICALLY_ZERO
    if not p.is_constant:
        return SignClass.NONCONSTANT
    if p.coeffs[0] > 0:
        return SignClass.POSITIVE_CONSTANT
    return SignClass.NEGATIVE_CONSTANT


def _monomial_text(coefficient: int, degree: int) -> str:
    magnitude = abs(coefficient)
    if degree == 0:
        return str(magnitude)
    power = "t" if degree == 1 else f"t^{degree}"
    return power if magnitude == 1 else f"{magnitude}{power}"


def format_polynomial(p: Polynomial) -> str:
    """Render p as `2t^2 - 3t + 1`; the zero polynomial renders as `0`."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for degree in range(p.degree, -1, -1):
        c = p.coeffs[degree]
        if c == 0:
            continue
        text = _monomial_text(c, degree)
        if not parts:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(parts)


def is_monomial(p: Polynomial) -> bool:
    """True when p has exactly one nonzero coefficient."""
    return sum(1 for c in p.coeffs if c != 0) == 1
