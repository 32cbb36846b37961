"""Tests for polynomials in the parameter t."""

import itertools
import random

import pytest

from app.logic.poly import (
    ONE,
    T,
    ZERO,
    Polynomial,
    SignClass,
    constant_sign,
    format_polynomial,
    is_monomial,
    poly_add,
    poly_eval,
    poly_mul,
    poly_product,
)


class TestCanonicalForm:
    """Tests for construction and equality."""

    def test_strips_trailing_zeros(self):
        """Should store no zero leading coefficient."""
        assert Polynomial((1, 2, 0, 0)).coeffs == (1, 2)
        assert Polynomial((0, 0)).coeffs == ()

    def test_equality_is_structural(self):
        """Should treat equal coefficient sequences as equal polynomials."""
        assert Polynomial((3, 0, 1)) == T * T + 3
        assert hash(Polynomial((0, 1))) == hash(T)

    def test_degree(self):
        """Should report -1 for zero and the top index otherwise."""
        assert ZERO.degree == -1
        assert ONE.degree == 0
        assert (T * T - T).degree == 2


class TestEvaluation:
    """Tests for poly_eval."""

    @pytest.mark.parametrize(
        "p, t, expected",
        [
            (2 * T + 1, 3, 7),
            (ZERO, 5, 0),
            (T * T - T, 4, 12),
            (T - 2, 0, -2),
        ],
    )
    def test_evaluates(self, p, t, expected):
        """Should evaluate exactly at natural t."""
        assert poly_eval(p, t) == expected
        assert p(t) == expected

    def test_large_values_do_not_overflow(self):
        """Should keep exact integers for large products."""
        p = poly_product([T + 1] * 10)
        assert p(10**6) == (10**6 + 1) ** 10


class TestArithmetic:
    """Tests for ring operations."""

    def test_multiplies(self):
        """Should multiply t by t + 1 into t^2 + t."""
        assert T * (T + 1) == Polynomial((0, 1, 1))

    def test_additive_inverse_is_zero(self):
        """Should cancel 2t - 1 against 1 - 2t."""
        assert (2 * T - 1) + (1 - 2 * T) == ZERO
        assert ((2 * T - 1) + (1 - 2 * T)).is_zero

    def test_constant_product(self):
        """Should multiply constants."""
        assert Polynomial.constant(2) * Polynomial.constant(-3) == Polynomial.constant(-6)

    def test_empty_product_is_one(self):
        """Should return 1 for the empty product."""
        assert poly_product([]) == ONE

    def test_products(self):
        """Should multiply lists of factors."""
        assert poly_product([T, Polynomial.constant(2)]) == 2 * T
        assert poly_product([T - 1, T + 1]) == T * T - 1


class TestConstantSign:
    """Tests for constant_sign."""

    def test_classifies(self):
        """Should classify zero, constants and nonconstant polynomials."""
        assert constant_sign(ZERO) == SignClass.IDENTICALLY_ZERO
        assert constant_sign(Polynomial.constant(-4)) == SignClass.NEGATIVE_CONSTANT
        assert constant_sign(Polynomial.constant(7)) == SignClass.POSITIVE_CONSTANT
        assert constant_sign(T - 3) == SignClass.NONCONSTANT

    def test_constant_value_rejects_nonconstant(self):
        """Should refuse to read a constant out of t - 3."""
        with pytest.raises(ValueError):
            (T - 3).constant_value()


class TestFormatting:
    """Tests for format_polynomial."""

    @pytest.mark.parametrize(
        "p, text",
        [
            (ZERO, "0"),
            (ONE, "1"),
            (Polynomial.constant(-6), "-6"),
            (T, "t"),
            (2 * T * T - 3 * T + 1, "2t^2 - 3t + 1"),
            (-T + 2, "-t + 2"),
        ],
    )
    def test_formats(self, p, text):
        """Should render the parser's polynomial syntax."""
        assert format_polynomial(p) == text

    def test_is_monomial(self):
        """Should detect single-term polynomials."""
        assert is_monomial(3 * T * T)
        assert not is_monomial(T + 1)
        assert not is_monomial(ZERO)


def random_polynomials(count: int, seed: int = 7) -> list[Polynomial]:
    """Degree <= 3 polynomials with coefficients in [-5, 5]."""
    rng = random.Random(seed)
    return [Polynomial(tuple(rng.randint(-5, 5) for _ in range(rng.randint(0, 4)))) for _ in range(count)]


class TestRingProperties:
    """Seeded property checks on random polynomials."""

    PAIRS = list(zip(random_polynomials(40, seed=1), random_polynomials(40, seed=2)))

    @pytest.mark.parametrize("p, q", PAIRS)
    def test_product_evaluates_pointwise(self, p, q):
        """Should evaluate p*q to p(t) * q(t) for every t in [0, 50]."""
        product = poly_mul(p, q)
        for t in range(51):
            assert poly_eval(product, t) == poly_eval(p, t) * poly_eval(q, t)

    @pytest.mark.parametrize("p, q", PAIRS)
    def test_sum_evaluates_pointwise(self, p, q):
        """Should evaluate p+q to p(t) + q(t) for every t in [0, 50]."""
        total = poly_add(p, q)
        for t in range(51):
            assert poly_eval(total, t) == poly_eval(p, t) + poly_eval(q, t)

    def test_canonicalization_is_idempotent(self):
        """Should leave a canonical polynomial unchanged when rebuilt."""
        for p in random_polynomials(100, seed=3):
            assert Polynomial(p.coeffs) == p
            assert Polynomial(p.coeffs).coeffs == p.coeffs
            assert not p.coeffs or p.coeffs[-1] != 0

    def test_product_ignores_order(self):
        """Should give the same canonical form for every permutation of the factors."""
        rng = random.Random(4)
        for _ in range(20):
            factors = random_polynomials(4, seed=rng.randint(0, 10**6))
            expected = poly_product(factors)
            for order in itertools.permutations(factors):
                assert poly_product(order).coeffs == expected.coeffs
