"""Level-alpha tests built on the combined statistics, with uniform reports.

Three decision rules share one report shape:

* ``max_average``: reject when max_k A_k >= 1/alpha.  Valid for
  independent or simultaneous e-values.
* ``optimized_betting``: reject when sup_lam M_n(lam) >= 1/alpha.
  Valid under the same regimes and never more powerful than
  ``max_average``, because the betting product is a binomial mixture of
  the A_k (see :func:`evalcomb.sympoly.mixture_value`).
* ``ville_sequential``: reject when the running betting product under a
  predictable fraction sequence ever reaches 1/alpha.  Valid for
  sequential e-values, i.e. under the weakest of the three regimes.

All comparisons happen in log domain with a closed threshold: a
statistic exactly equal to 1/alpha rejects.  The log-domain comparison
is authoritative; the reported p-value bound is reconciled to it when
exp() rounding would disagree at an exact-equality boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .betting import BettingOptimum, optimize_lambda
from .core import (
    GUARANTEED_REGIMES,
    LOG_ZERO,
    EValueVector,
    LogValue,
    Regime,
)
from .errors import ConfigError, ValidationError
from .sympoly import SymmetricAverages, symmetric_averages

__all__ = [
    "StatKind",
    "VilleDetail",
    "TestReport",
    "test_max_average",
    "test_optimized_betting",
    "test_ville",
    "e_to_p",
]


class StatKind(enum.Enum):
    MAX_AVERAGE = "max_average"
    OPTIMIZED_BETTING = "optimized_betting"
    VILLE_SEQUENTIAL = "ville_sequential"


@dataclass(frozen=True)
class VilleDetail:
    """Trajectory record for the sequential betting test.

    ``hitting_index`` is the 1-based index of the first running product
    at or above the threshold, or None if it never gets there.
    ``attested`` echoes the caller's claim that a supplied fraction
    sequence is predictable (None for a constant fraction, where there
    is nothing to attest).
    """

    log_trajectory: tuple[LogValue, ...]
    hitting_index: int | None
    strategy: tuple[float, ...]
    attested: bool | None


Detail = Union[SymmetricAverages, BettingOptimum, VilleDetail]


@dataclass(frozen=True)
class TestReport:
    """Outcome of one level-alpha test.

    ``reject`` is exactly the event log_statistic >= log_threshold
    (= -log alpha).  ``p_bound`` is min(1, 1/statistic), the tail bound
    the statistic implies, kept consistent with ``reject`` at rounding
    boundaries.  ``warnings`` carries regime and attestation caveats;
    they never suppress the computation.
    """

    statistic_kind: StatKind
    log_statistic: LogValue
    alpha: float
    log_threshold: float
    reject: bool
    p_bound: float
    detail: Detail
    warnings: tuple[str, ...] = ()


def _checked_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must lie strictly inside (0, 1), got {alpha}")
    return alpha


def _reconciled_p_bound(
    log_statistic: float, alpha: float, reject: bool
) -> float:
    """min(1, 1/statistic), nudged to agree with the log-domain verdict.

    exp can round across alpha when the statistic sits exactly on the
    threshold; the decision is taken in log domain, so the bound is
    clamped by at most one ulp to keep reject <=> p_bound <= alpha true
    in every report.
    """
    if log_statistic <= 0.0:
        p = 1.0
    else:
        try:
            p = math.exp(-log_statistic)
        except OverflowError:
            p = 1.0
        p = min(1.0, p)
    if reject and p > alpha:
        p = alpha
    elif not reject and p <= alpha:
        p = math.nextafter(alpha, 1.0)
    return p


_BOUNDARY_SNAP = 5e-13
"""Absolute log-domain width within which a statistic is taken to sit
exactly on the rejection threshold.

The decision rule is closed (statistic == 1/alpha rejects), and the
interesting boundary cases are exact in real arithmetic: for (0, 8) at
alpha = 1/4 the best average is exactly 4.  The log-domain pipeline
reproduces such values only to a couple of ulps, which would otherwise
turn mathematical equality into a coin flip of rounding directions.
Snapping also keeps the published invariant (reject iff log_statistic
>= log_threshold) literally true in every report.  The width is far
below every documented tolerance and inflates the rejection region by
a relative 5e-13, which is invisible next to the 1/t guarantee."""


def _decide(log_statistic: float, alpha: float) -> tuple[float, float, bool, float]:
    log_threshold = -math.log(alpha)
    if abs(log_statistic - log_threshold) <= _BOUNDARY_SNAP:
        log_statistic = log_threshold
    reject = log_statistic >= log_threshold
    return (
        log_statistic,
        log_threshold,
        reject,
        _reconciled_p_bound(log_statistic, alpha, reject),
    )


def _batch_regime_warnings(E: EValueVector) -> tuple[str, ...]:
    if E.regime in GUARANTEED_REGIMES:
        return ()
    return (
        "the 1/t tail guarantee for this statistic holds for independent or "
        f"simultaneous e-values; this vector's regime is '{E.regime.value}'",
    )


def test_max_average(E: EValueVector, alpha: float) -> TestReport:
    """Reject when the largest symmetric average reaches 1/alpha."""
    alpha = _checked_alpha(alpha)
    averages = symmetric_averages(E)
    log_statistic = averages.log_max.log_magnitude
    log_statistic, log_threshold, reject, p_bound = _decide(log_statistic, alpha)
    return TestReport(
        statistic_kind=StatKind.MAX_AVERAGE,
        log_statistic=LogValue(log_statistic),
        alpha=alpha,
        log_threshold=log_threshold,
        reject=reject,
        p_bound=p_bound,
        detail=averages,
        warnings=_batch_regime_warnings(E),
    )


def test_optimized_betting(E: EValueVector, alpha: float) -> TestReport:
    """Reject when the best constant-fraction product reaches 1/alpha."""
    alpha = _checked_alpha(alpha)
    optimum = optimize_lambda(E)
    log_statistic = optimum.log_value.log_magnitude
    log_statistic, log_threshold, reject, p_bound = _decide(log_statistic, alpha)
    return TestReport(
        statistic_kind=StatKind.OPTIMIZED_BETTING,
        log_statistic=LogValue(log_statistic),
        alpha=alpha,
        log_threshold=log_threshold,
        reject=reject,
        p_bound=p_bound,
        detail=optimum,
        warnings=_batch_regime_warnings(E),
    )


def _resolve_strategy(
    E: EValueVector, strategy: float | Sequence[float]
) -> tuple[np.ndarray, bool]:
    """Return (per-step fractions, is_constant)."""
    if np.isscalar(strategy) or isinstance(strategy, (int, float)):
        lam = float(strategy)
        if math.isnan(lam) or not (0.0 <= lam <= 1.0):
            raise ValidationError(f"betting fraction must lie in [0, 1], got {lam}")
        return np.full(E.n, lam), True
    lams = np.asarray(list(strategy), dtype=float)
    if lams.ndim != 1 or lams.size != E.n:
        raise ValidationError(
            f"betting sequence must have one fraction per e-value "
            f"({E.n}), got {lams.size}"
        )
    if np.isnan(lams).any() or (lams < 0).any() or (lams > 1).any():
        bad = np.where(np.isnan(lams) | (lams < 0) | (lams > 1))[0][0]
        raise ValidationError(
            f"betting fraction at position {bad} is outside [0, 1]: {lams[bad]}"
        )
    return lams, False


def test_ville(
    E: EValueVector,
    strategy: float | Sequence[float],
    alpha: float,
    *,
    attested: bool = False,
) -> TestReport:
    """Sequential betting test: reject if the running product ever
    reaches 1/alpha.

    ``strategy`` is either one constant fraction or a sequence of
    per-step fractions.  A sequence is only a valid betting strategy
    when each fraction depends on nothing later than the preceding
    e-values; that property is invisible in the numbers, so the caller
    attests it via ``attested`` and the report echoes the attestation
    (with a warning when it is absent).
    """
    alpha = _checked_alpha(alpha)
    lams, is_constant = _resolve_strategy(E, strategy)
    n = E.n
    step_logs = np.empty(n)
    for i in range(n):
        lam = lams[i]
        if lam == 0.0:
            step_logs[i] = 0.0
        elif lam == 1.0:
            step_logs[i] = E.log_values[i]
        else:
            step_logs[i] = np.logaddexp(
                math.log1p(-lam), math.log(lam) + E.log_values[i]
            )
    with np.errstate(invalid="ignore"):
        trajectory = np.cumsum(step_logs)
    zero_steps = step_logs == LOG_ZERO
    if zero_steps.any():
        # A zero factor bankrupts the product for good; this also
        # overwrites any NaN that IEEE creates when an infinite factor
        # meets the ruin (0 * inf == 0).
        trajectory[int(np.argmax(zero_steps)) :] = LOG_ZERO
    log_statistic = float(np.max(trajectory))
    log_statistic, log_threshold, reject, p_bound = _decide(log_statistic, alpha)
    # the same snap as _decide, so reject always comes with an index
    crossed = trajectory >= log_threshold - _BOUNDARY_SNAP
    hitting_index = int(np.argmax(crossed)) + 1 if crossed.any() else None
    warnings: tuple[str, ...] = ()
    if E.regime is Regime.UNKNOWN:
        warnings += (
            "the sequential guarantee assumes sequential e-values; this "
            "vector's regime is 'unknown'",
        )
    if not is_constant and not attested:
        warnings += (
            "predictability of the supplied betting sequence was not "
            "attested by the caller",
        )
    detail = VilleDetail(
        log_trajectory=tuple(LogValue(v) for v in trajectory),
        hitting_index=hitting_index,
        strategy=tuple(float(v) for v in lams),
        attested=None if is_constant else attested,
    )
    return TestReport(
        statistic_kind=StatKind.VILLE_SEQUENTIAL,
        log_statistic=LogValue(log_statistic),
        alpha=alpha,
        log_threshold=log_threshold,
        reject=reject,
        p_bound=p_bound,
        detail=detail,
        warnings=warnings,
    )


def e_to_p(log_statistic: LogValue | float) -> float:
    """The p-value bound min(1, 1/statistic) implied by a statistic."""
    if isinstance(log_statistic, LogValue):
        ls = log_statistic.log_magnitude
    else:
        ls = float(log_statistic)
        if math.isnan(ls):
            raise ValidationError("log statistic must not be NaN")
    if ls <= 0.0:
        return 1.0
    try:
        return min(1.0, math.exp(-ls))
    except OverflowError:
        return 1.0


# The decision procedures are library entry points that happen to carry a
# test_ prefix; stop pytest from collecting them when a test module imports
# them by name.
test_max_average.__test__ = False
test_optimized_betting.__test__ = False
test_ville.__test__ = False
