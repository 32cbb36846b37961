"""Tests for family counting and quasi-polynomial fitting."""

import pytest

from app.logic.formula import FALSE, VarId
from app.logic.parser import parse, parse_polynomial
from app.logic.poly import Polynomial
from app.models.responses import BoxSpec, CountRow, CountTable
from app.services.counting import CountingError, count_family, fit_quasi_polynomial

X, Y = VarId("x"), VarId("y")
BOX_UPPER = parse_polynomial("2t^2 + t")
ZERO = Polynomial.constant(0)


def table_of(counts: dict[int, int]) -> CountTable:
    return CountTable(
        rows=[CountRow(t=t, count=c) for t, c in counts.items()],
        box=BoxSpec(lower="0", upper="t"),
        variables=["x"],
    )


class TestCountFamily:
    """Tests for count_family."""

    def test_intervals(self, intervals):
        """Should count t(t + 1) members for t = 1..8."""
        table = count_family(intervals, [X], range(1, 9), ZERO, BOX_UPPER)
        assert [r.count for r in table.rows] == [t * t + t for t in range(1, 9)]
        assert not any(r.truncated for r in table.rows)
        assert table.variables == ["x"]
        assert table.box.upper == "2t^2 + t"

    def test_empty_family(self):
        """Should count zero members of FALSE."""
        table = count_family(FALSE, [X], range(1, 5), ZERO, parse_polynomial("t"))
        assert [r.count for r in table.rows] == [0, 0, 0, 0]

    def test_truncation(self, intervals):
        """Should flag a row whose family leaves the box."""
        (row,) = count_family(intervals, [X], [2], ZERO, Polynomial.constant(1)).rows
        assert row.count == 2
        assert row.truncated is True

    def test_two_variables(self):
        """Should count pairs in a square box."""
        phi = parse("x < y")
        (row,) = count_family(phi, [X, Y], [3], ZERO, parse_polynomial("t")).rows
        assert row.count == 6
        assert row.truncated is True

    def test_unlisted_variable_counts_as_free_dimension(self):
        """Should accept listed variables that do not occur in the formula."""
        (row,) = count_family(parse("x = 0"), [X, Y], [1], ZERO, parse_polynomial("t")).rows
        assert row.count == 2

    def test_rows_sorted(self, intervals):
        """Should report rows in increasing t regardless of input order."""
        table = count_family(intervals, [X], [3, 1, 2, 1], ZERO, BOX_UPPER, threads=2)
        assert [r.t for r in table.rows] == [1, 2, 3]

    def test_rejects_unbounded(self):
        """Should require elimination before counting."""
        with pytest.raises(CountingError):
            count_family(parse("E y. y < x"), [X], [1], ZERO, BOX_UPPER)

    def test_rejects_unlisted_free_variable(self):
        """Should name free variables missing from the variable list."""
        with pytest.raises(CountingError) as exc_info:
            count_family(parse("x < y"), [X], [1], ZERO, BOX_UPPER)
        assert "y" in exc_info.value.message


class TestFitQuasiPolynomial:
    """Tests for fit_quasi_polynomial."""

    def test_exact_quadratic(self, intervals):
        """Should recover t^2 + t from the interval counts."""
        table = count_family(intervals, [X], range(1, 9), ZERO, BOX_UPPER)
        report = fit_quasi_polynomial(table, 1, 2)
        assert report.exact is True
        assert report.label == "empirical"
        (fit,) = report.classes
        assert fit.coefficients == ["0", "1", "1"]
        assert fit.polynomial == "t**2 + t"
        assert fit.residuals == ["0"] * 8

    def test_two_residue_classes(self):
        """Should fit even and odd t separately."""
        table = table_of({t: t // 2 for t in range(0, 10)})
        report = fit_quasi_polynomial(table, 2, 1)
        assert report.exact is True
        even, odd = report.classes
        assert even.coefficients == ["0", "1/2"]
        assert odd.coefficients == ["-1/2", "1/2"]

    def test_inexact(self):
        """Should report nonzero residuals when the degree is too low."""
        table = table_of({t: t * t for t in range(0, 6)})
        report = fit_quasi_polynomial(table, 1, 1)
        assert report.exact is False
        assert any(r != "0" for r in report.classes[0].residuals)

    def test_tail_from(self):
        """Should ignore rows before tail_from."""
        counts = {0: 7, 1: 1, 2: 2, 3: 3, 4: 4}
        report = fit_quasi_polynomial(table_of(counts), 1, 1, tail_from=1)
        assert report.exact is True
        assert report.tail_from == 1
        assert report.classes[0].points == 4

    def test_too_few_points(self):
        """Should leave a note instead of fitting an underdetermined class."""
        report = fit_quasi_polynomial(table_of({0: 1, 1: 2}), 1, 3)
        assert report.exact is False
        assert report.classes[0].note is not None

    def test_skips_truncated_rows(self):
        """Should not fit counts that are known to be clipped by the box."""
        table = table_of({1: 1, 2: 2, 3: 3})
        table.rows.append(CountRow(t=4, count=0, truncated=True))
        report = fit_quasi_polynomial(table, 1, 1)
        assert report.exact is True
        assert report.classes[0].points == 3

    def test_invalid_parameters(self):
        """Should reject modulus 0."""
        with pytest.raises(CountingError):
            fit_quasi_polynomial(table_of({1: 1}), 0, 1)
