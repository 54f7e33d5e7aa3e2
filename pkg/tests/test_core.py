import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evalcomb.core import (
    LOG_INF,
    LOG_ZERO,
    EValueVector,
    LogValue,
    Regime,
    GUARANTEED_REGIMES,
    log_add,
    log_from_value,
    log_mul,
    logsumexp_1d,
    validate_evalues,
)
from evalcomb.errors import ValidationError


class TestLogValue:
    def test_roundtrip(self):
        assert LogValue(math.log(3.0)).value == pytest.approx(3.0, rel=1e-15)

    def test_zero_and_inf_flags(self):
        zero = LogValue(LOG_ZERO)
        inf = LogValue(LOG_INF)
        assert zero.is_zero and not zero.is_infinite
        assert inf.is_infinite and not inf.is_zero
        assert zero.value == 0.0
        assert inf.value == math.inf

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            LogValue(float("nan"))

    def test_float_coercion(self):
        assert float(LogValue(0.0)) == 1.0

    def test_huge_log_saturates(self):
        # exp would overflow; the linear view saturates instead of raising
        assert LogValue(1e4).value == math.inf


def test_log_from_value_negative_rejected():
    with pytest.raises(ValidationError):
        log_from_value(-0.5)


def test_log_from_value_edge_cases():
    assert log_from_value(0.0).is_zero
    assert log_from_value(math.inf).is_infinite
    assert log_from_value(1.0).log_magnitude == 0.0
    with pytest.raises(ValidationError):
        log_from_value(float("nan"))


def test_log_add_oracle():
    a = log_from_value(2.0)
    b = log_from_value(6.0)
    assert log_add(a, b).value == pytest.approx(8.0, rel=1e-15)


def test_log_mul_oracle():
    assert log_mul(log_from_value(2.0), log_from_value(6.0)).value == pytest.approx(
        12.0, rel=1e-15
    )


def test_log_mul_zero_dominates_infinity():
    """The measure-theoretic convention 0 * inf = 0."""
    zero = LogValue(LOG_ZERO)
    inf = LogValue(LOG_INF)
    assert log_mul(zero, inf).is_zero
    assert log_mul(inf, zero).is_zero


finite_logs = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


@given(finite_logs, finite_logs)
def test_log_add_commutes(x, y):
    a, b = LogValue(x), LogValue(y)
    assert log_add(a, b).log_magnitude == log_add(b, a).log_magnitude


@given(finite_logs, finite_logs)
def test_log_add_dominates_both_terms(x, y):
    s = log_add(LogValue(x), LogValue(y)).log_magnitude
    assert s >= max(x, y)


@given(finite_logs)
def test_log_add_with_zero_is_identity(x):
    assert log_add(LogValue(x), LogValue(LOG_ZERO)).log_magnitude == x


class TestValidateEvalues:
    def test_basic(self):
        ev = validate_evalues([1.0, 2.0, 0.5])
        assert ev.n == 3
        np.testing.assert_allclose(ev.values, [1.0, 2.0, 0.5], rtol=1e-15)
        assert ev.regime is Regime.UNKNOWN

    def test_regime_is_kept(self):
        ev = validate_evalues([1.0], Regime.INDEPENDENT)
        assert ev.regime is Regime.INDEPENDENT

    def test_zero_and_inf_allowed(self):
        ev = validate_evalues([0.0, math.inf, 1.0])
        assert ev.entries[0].is_zero
        assert ev.entries[1].is_infinite

    def test_negative_rejected_with_position(self):
        with pytest.raises(ValidationError, match="2"):
            validate_evalues([1.0, 3.0, -0.1])

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            validate_evalues([1.0, float("nan")])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            validate_evalues([])


class TestEValueVector:
    def test_two_dimensional_rejected(self):
        with pytest.raises(ValidationError):
            EValueVector(np.zeros((2, 2)))

    def test_log_values_immutable(self):
        ev = validate_evalues([1.0, 2.0])
        with pytest.raises(ValueError):
            ev.log_values[0] = 7.0

    def test_defensive_copy(self):
        raw = np.array([0.0, 0.0])
        ev = EValueVector(raw)
        raw[0] = 99.0
        assert ev.log_values[0] == 0.0

    def test_entries_are_log_values(self):
        ev = validate_evalues([4.0])
        assert isinstance(ev.entries[0], LogValue)
        assert ev.entries[0].value == pytest.approx(4.0)


def test_logsumexp_empty_is_log_zero():
    assert logsumexp_1d(np.array([])) == LOG_ZERO


def test_logsumexp_matches_direct_sum():
    rng = np.random.default_rng(11)
    logs = rng.normal(size=40)
    expected = math.log(np.exp(logs).sum())
    assert logsumexp_1d(logs) == pytest.approx(expected, rel=1e-13)


def test_logsumexp_with_infinite_term():
    assert logsumexp_1d(np.array([0.0, LOG_INF])) == LOG_INF
    assert logsumexp_1d(np.array([LOG_ZERO, LOG_ZERO])) == LOG_ZERO


def test_guaranteed_regimes():
    assert Regime.INDEPENDENT in GUARANTEED_REGIMES
    assert Regime.SIMULTANEOUS in GUARANTEED_REGIMES
    assert Regime.SEQUENTIAL not in GUARANTEED_REGIMES
    assert Regime.UNKNOWN not in GUARANTEED_REGIMES
