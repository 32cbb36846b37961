"""Tests for grounding, the classical Cooper decider and grid equivalence checks."""

import logging

import pytest

from app.logic.formula import (
    FALSE,
    TRUE,
    BExists,
    Div,
    MissingAssignmentError,
    UnboundedQuantifierError,
    VarId,
    count_unbounded_quantifiers,
)
from app.logic.parser import parse
from app.logic.poly import Polynomial
from app.services.oracle import (
    ArityMismatchError,
    check_equiv,
    classical_cooper_decide,
    decider,
    eval_bounded,
    grid_axis,
    ground,
    replay,
)

X, A1, A2 = VarId("x"), VarId("a1"), VarId("a2")


class TestGround:
    """Tests for ground."""

    def test_evaluates_coefficients(self):
        """Should replace polynomial coefficients by their values at t."""
        grounded = ground(parse("(t + 2)*x < t^2"), 3)
        assert grounded == parse("5*x < 9")

    def test_vanishing_modulus(self):
        """Should turn D[t - 2] into FALSE at t = 2."""
        assert ground(parse("D[t - 2](x)"), 2) == FALSE

    def test_bound(self):
        """Should evaluate bounded-quantifier bounds."""
        grounded = ground(parse("Eb z <= 2t . z = x"), 4)
        assert isinstance(grounded, BExists)
        assert grounded.bound == Polynomial.constant(8)

    def test_modulus(self):
        """Should keep a nonzero modulus as a constant."""
        grounded = ground(parse("D[t + 1](x)"), 2)
        assert isinstance(grounded, Div)
        assert grounded.modulus == Polynomial.constant(3)


class TestClassicalCooper:
    """Tests for classical_cooper_decide."""

    def test_even_sum(self):
        """Should find x = 2 for x + x = 4."""
        assert classical_cooper_decide(ground(parse("E x. x + x = 4"), 0), {}) is True

    def test_odd_sum(self):
        """Should refute x + x = 5."""
        assert classical_cooper_decide(ground(parse("E x. x + x = 5"), 0), {}) is False

    def test_divisibility_with_upper_bound(self, cooper_example_text):
        """Should find x = -3 for a1 = 0, a2 = 1."""
        grounded = ground(parse(cooper_example_text), 0)
        assert classical_cooper_decide(grounded, {A1: 0, A2: 1}) is True

    def test_universal(self):
        """Should decide a universally quantified statement."""
        phi = ground(parse("A x. x < 0 \\/ ~(x < 0)"), 0)
        assert classical_cooper_decide(phi, {}) is True
        assert classical_cooper_decide(ground(parse("A x. x < 3"), 0), {}) is False

    def test_nested(self):
        """Should handle a quantifier alternation."""
        phi = ground(parse("A x. E y. x < y"), 0)
        assert classical_cooper_decide(phi, {}) is True

    def test_bounded_inside(self):
        """Should expand bounded quantifiers under an unbounded one."""
        phi = ground(parse("E y. Eb z <= 2 . y = x + z /\\ D[3](y)"), 0)
        for x in range(-4, 5):
            assert classical_cooper_decide(phi, {X: x}) is True

    def test_missing_assignment(self):
        """Should name the unassigned free variable."""
        with pytest.raises(MissingAssignmentError) as exc_info:
            classical_cooper_decide(ground(parse("E y. y < x"), 0), {})
        assert "x" in exc_info.value.message


class TestEvalBounded:
    """Tests for eval_bounded."""

    def test_intervals_member(self, intervals):
        """Should accept x = 5 at t = 2 (interval [4, 6])."""
        assert eval_bounded(intervals, 2, {X: 5}) is True

    def test_intervals_gap(self, intervals):
        """Should reject x = 3 at t = 2 (between [0, 2] and [4, 6])."""
        assert eval_bounded(intervals, 2, {X: 3}) is False

    def test_empty_range_at_zero(self, intervals):
        """Should be false for every x at t = 0."""
        assert eval_bounded(intervals, 0, {X: 0}) is False

    def test_rejects_unbounded(self):
        """Should refuse formulas with unbounded quantifiers."""
        with pytest.raises(UnboundedQuantifierError):
            eval_bounded(parse("E y. y < x"), 0, {X: 0})


class TestDecider:
    """Tests for decider."""

    def test_unbounded(self):
        """Should fall back to elimination when unbounded quantifiers remain."""
        decide = decider(parse("E y. 2*y = x"), 0)
        assert decide({X: 4}) is True
        assert decide({X: 5}) is False

    def test_parametric(self):
        """Should ground the formula at the given t."""
        phi = parse("E y. t*y = x")
        assert decider(phi, 3)({X: 6}) is True
        assert decider(phi, 3)({X: 7}) is False
        assert decider(phi, 0)({X: 0}) is True
        assert decider(phi, 0)({X: 1}) is False


class TestGridAxis:
    """Tests for grid_axis."""

    def test_order(self):
        """Should list values by increasing magnitude, positive first."""
        assert grid_axis(2) == [0, 1, -1, 2, -2]

    def test_zero_radius(self):
        """Should contain only 0."""
        assert grid_axis(0) == [0]


class TestCheckEquiv:
    """Tests for check_equiv and replay."""

    def test_counterexample(self):
        """Should report the first disagreement: t = 0, x = 1."""
        phi, psi = parse("x < 0"), parse("0 < x")
        report = check_equiv(phi, psi, range(0, 3), 2)
        assert report.status == "counterexample"
        assert report.witness.t == 0
        assert report.witness.assignment == {"x": 1}
        assert report.witness.left is False
        assert report.witness.right is True
        assert replay(report, phi, psi) is True

    def test_counterexample_follows_grid_axis_order(self):
        """Should try 1 before -1 in each coordinate, the first coordinate varying slowest."""
        report = check_equiv(parse("y < 0 \\/ x = 0"), TRUE, range(0, 1), 2)
        assert report.witness.assignment == {"x": 1, "y": 0}
        report = check_equiv(parse("x < 0 \\/ y = 0"), TRUE, range(0, 1), 2)
        assert report.witness.assignment == {"x": 0, "y": 1}
        report = check_equiv(parse("x <= 0 \\/ 2 <= x"), TRUE, range(0, 1), 2)
        assert report.witness.assignment == {"x": 1}

    def test_reflexive_pass(self):
        """Should pass and count every grid point."""
        phi = parse("D[t + 1](x)")
        report = check_equiv(phi, phi, range(0, 3), 2)
        assert report.status == "pass"
        assert report.witness is None
        assert report.points_checked == 15
        assert report.grid.variables == ["x"]
        assert report.grid.t_min == 0
        assert report.grid.t_max == 2

    def test_replay_pass(self):
        """Should not replay a report without a witness."""
        phi = parse("x < 0")
        report = check_equiv(phi, phi, range(0, 2), 1)
        assert replay(report, phi, phi) is False

    def test_quantified_against_quantifier_free(self):
        """Should compare an unbounded formula with its closed form."""
        report = check_equiv(parse("E y. 2*y = x"), parse("D[2](x)"), range(0, 3), 4)
        assert report.status == "pass"

    def test_subset_free_variables(self):
        """Should allow one side to use fewer variables."""
        report = check_equiv(parse("x < 1 \\/ 0 <= x"), TRUE, range(0, 2), 2)
        assert report.status == "pass"
        assert report.grid.variables == ["x"]

    def test_arity_mismatch(self):
        """Should refuse formulas with unrelated free variables."""
        with pytest.raises(ArityMismatchError):
            check_equiv(parse("x < 0"), parse("y < 0"), range(0, 2), 1)

    def test_no_parameter_values(self):
        """Should be inconclusive for an empty t range."""
        report = check_equiv(parse("x < 0"), parse("x < 0"), [], 2)
        assert report.status == "inconclusive"
        assert report.points_checked == 0

    def test_threads_agree(self):
        """Should give the same witness with several worker threads."""
        phi, psi = parse("D[t + 1](x)"), parse("D[2](x)")
        single = check_equiv(phi, psi, range(0, 4), 3, threads=1)
        pooled = check_equiv(phi, psi, range(0, 4), 3, threads=3)
        assert single.witness == pooled.witness
        assert single.witness.t == 0

    def test_logs_fingerprints(self, caplog):
        """Should log the outcome without the formula text."""
        with caplog.at_level(logging.INFO, logger="app.services.oracle"):
            check_equiv(parse("x < 0"), parse("0 < x"), range(0, 2), 1)
        (record,) = [r for r in caplog.records if hasattr(r, "status")]
        assert record.status == "counterexample"
        assert record.levelno == logging.WARNING
        assert "x < 0" not in record.getMessage()
        assert record.formula_hash.startswith("fm_")

    def test_unbounded_input(self):
        """Should accept inputs that still contain unbounded quantifiers."""
        phi = parse("E y. y < x")
        assert count_unbounded_quantifiers(phi) == 1
        assert check_equiv(phi, TRUE, range(0, 2), 2).status == "pass"
