import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evalcomb.betting import (
    DEFAULT_LAMBDA_TOL,
    BettingOptimum,
    Boundary,
    optimize_lambda,
    product_value,
    score_derivative,
)
from evalcomb.core import validate_evalues
from evalcomb.errors import ConfigError, ValidationError
from evalcomb.sympoly import symmetric_averages


def test_product_value_oracle():
    # (1 - l + 2 l)(1 - l + 0.5 l) at l = 1/2 is 1.5 * 0.75
    ev = validate_evalues([2.0, 0.5])
    assert product_value(ev, 0.5).value == pytest.approx(1.125, rel=1e-12)


def test_product_value_endpoints():
    ev = validate_evalues([3.0, 0.0])
    assert product_value(ev, 0.0).value == 1.0
    assert product_value(ev, 1.0).is_zero


def test_product_value_with_infinity():
    ev = validate_evalues([math.inf, 2.0])
    assert product_value(ev, 0.5).is_infinite
    assert product_value(ev, 0.0).value == 1.0


def test_product_zero_entry_kills_all_in_product_at_one():
    # 0 * inf = 0 under the working convention
    ev = validate_evalues([0.0, math.inf])
    assert product_value(ev, 1.0).is_zero


def test_product_rejects_bad_lambda():
    ev = validate_evalues([1.0])
    for lam in (-0.01, 1.01, float("nan")):
        with pytest.raises(ConfigError):
            product_value(ev, lam)


def test_derivative_oracle_at_zero():
    # d/dl log M at 0 is sum(e - 1)
    ev = validate_evalues([0.5, 0.5])
    assert score_derivative(ev, 0.0) == pytest.approx(-1.0, rel=1e-14)
    ev2 = validate_evalues([2.0, 1.0])
    assert score_derivative(ev2, 0.0) == pytest.approx(1.0, rel=1e-14)


def test_derivative_matches_finite_difference():
    ev = validate_evalues([0.3, 5.0, 1.1])
    h = 1e-7
    for lam in (0.2, 0.5, 0.8):
        fd = (
            product_value(ev, lam + h).log_magnitude
            - product_value(ev, lam - h).log_magnitude
        ) / (2 * h)
        assert score_derivative(ev, lam) == pytest.approx(fd, rel=1e-6)


def test_derivative_rejects_lambda_one():
    ev = validate_evalues([2.0])
    with pytest.raises(ConfigError):
        score_derivative(ev, 1.0)


def test_derivative_rejects_infinite_entries():
    ev = validate_evalues([math.inf])
    with pytest.raises(ValidationError):
        score_derivative(ev, 0.5)


class TestOptimizeLambda:
    def test_closed_form_zero_eight(self):
        """E = (0, 8): the optimum is lambda = 3/7 with value 16/7."""
        opt = optimize_lambda(validate_evalues([0.0, 8.0]))
        assert opt.boundary is Boundary.INTERIOR
        assert opt.lambda_star == pytest.approx(3.0 / 7.0, abs=1e-9)
        assert opt.log_value.value == pytest.approx(16.0 / 7.0, rel=1e-9)
        assert not opt.infinite_evidence

    def test_all_below_one_stays_at_zero(self):
        opt = optimize_lambda(validate_evalues([0.5, 0.9]))
        assert opt.boundary is Boundary.AT_ZERO
        assert opt.lambda_star == 0.0
        assert opt.log_value.value == 1.0
        assert opt.iterations == 0

    def test_strong_evidence_pushes_to_one(self):
        opt = optimize_lambda(validate_evalues([2.0, 1.0]))
        assert opt.boundary is Boundary.AT_ONE
        assert opt.lambda_star == 1.0
        assert opt.log_value.value == pytest.approx(2.0, rel=1e-14)

    def test_single_large_evalue(self):
        # n = 1: sup over lambda of 1 - l + l e is max(1, e)
        opt = optimize_lambda(validate_evalues([7.0]))
        assert opt.boundary is Boundary.AT_ONE
        assert opt.log_value.value == pytest.approx(7.0, rel=1e-14)
        opt2 = optimize_lambda(validate_evalues([0.7]))
        assert opt2.boundary is Boundary.AT_ZERO
        assert opt2.log_value.value == 1.0

    def test_infinite_entry_short_circuits(self):
        opt = optimize_lambda(validate_evalues([math.inf, 0.5]))
        assert opt.infinite_evidence
        assert opt.log_value.is_infinite

    def test_tolerance_respected(self):
        opt = optimize_lambda(validate_evalues([0.0, 8.0]), tol=1e-6)
        assert opt.achieved_tol <= 1e-6
        assert abs(opt.lambda_star - 3.0 / 7.0) <= 1e-6 + 1e-12

    def test_bad_tolerance(self):
        with pytest.raises(ConfigError):
            optimize_lambda(validate_evalues([1.0]), tol=0.0)

    def test_value_never_below_one(self):
        # sup includes lambda = 0, whose value is exactly 1
        rng = np.random.default_rng(21)
        for _ in range(40):
            values = rng.lognormal(sigma=1.0, size=rng.integers(1, 10))
            opt = optimize_lambda(validate_evalues(values))
            assert opt.log_value.log_magnitude >= 0.0


@st.composite
def evalue_lists(draw):
    n = draw(st.integers(min_value=1, max_value=10))
    entry = st.one_of(
        st.just(0.0),
        st.floats(min_value=0.05, max_value=20.0, allow_nan=False),
    )
    return draw(st.lists(entry, min_size=n, max_size=n))


@given(evalue_lists())
@settings(max_examples=150, deadline=None)
def test_optimum_beats_a_coarse_grid(values):
    ev = validate_evalues(values)
    opt = optimize_lambda(ev)
    for lam in np.linspace(0.0, 1.0, 101):
        assert (
            opt.log_value.log_magnitude
            >= product_value(ev, float(lam)).log_magnitude - 1e-9
        )


@given(evalue_lists())
@settings(max_examples=150, deadline=None)
def test_optimum_dominated_by_max_average(values):
    """The betting product is a mixture of the symmetric averages, so its
    supremum cannot beat their maximum."""
    ev = validate_evalues(values)
    opt = optimize_lambda(ev)
    cap = symmetric_averages(ev).log_max.log_magnitude
    assert opt.log_value.log_magnitude <= cap + 1e-10


@given(evalue_lists())
@settings(max_examples=100, deadline=None)
def test_interior_optimum_has_flat_derivative(values):
    ev = validate_evalues(values)
    opt = optimize_lambda(ev)
    if opt.boundary is not Boundary.INTERIOR:
        return
    # the sign must flip inside the final bracket
    lo = max(0.0, opt.lambda_star - 10 * DEFAULT_LAMBDA_TOL)
    hi = min(1.0 - 1e-12, opt.lambda_star + 10 * DEFAULT_LAMBDA_TOL)
    assert score_derivative(ev, lo) >= 0.0 or score_derivative(ev, hi) <= 0.0


def test_optimum_is_frozen_record():
    opt = optimize_lambda(validate_evalues([2.0, 3.0]))
    assert isinstance(opt, BettingOptimum)
    with pytest.raises(AttributeError):
        opt.lambda_star = 0.0
