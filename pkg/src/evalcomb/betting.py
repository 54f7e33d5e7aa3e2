"""Constant-fraction betting products and their exact maximization.

Betting a fixed fraction lam of current wealth on each e-value yields
the product M_n(lam) = prod_i ((1 - lam) + lam E_i).  As a function of
lam on [0, 1] its logarithm is concave (strictly, away from the all-ones
vector), so the supremum over lam is found by bisecting on the sign of
the derivative

    d/dlam log M_n(lam) = sum_i (E_i - 1) / ((1 - lam) + lam E_i),

which is monotone decreasing.  The boundary cases are decided in closed
form first: the derivative at 0 is sum(E_i - 1), so a sample mean <= 1
pins the maximum at lam = 0 (value 1), and when no entry is zero the
sign of sum(1 - 1/E_i) decides whether the maximum sits at lam = 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import LOG_INF, LOG_ZERO, EValueVector, LogValue
from .errors import ConfigError, ValidationError

__all__ = [
    "Boundary",
    "BettingOptimum",
    "product_value",
    "score_derivative",
    "optimize_lambda",
    "DEFAULT_LAMBDA_TOL",
]

DEFAULT_LAMBDA_TOL = 1e-10
_MAX_BISECTION_STEPS = 60


class Boundary(enum.Enum):
    """Where the maximizing betting fraction landed."""

    INTERIOR = "interior"
    AT_ZERO = "at_zero"
    AT_ONE = "at_one"


@dataclass(frozen=True)
class BettingOptimum:
    """Result of maximizing log M_n(lam) over lam in [0, 1].

    ``log_value`` is never below 0: betting nothing always achieves
    M_n(0) = 1, so the supremum is at least 1.  When the input contains
    an infinite e-value every interior fraction gives an infinite
    product; ``infinite_evidence`` marks that case and ``lambda_star``
    is then just a representative witness (1/2).
    """

    lambda_star: float
    log_value: LogValue
    boundary: Boundary
    iterations: int
    achieved_tol: float
    infinite_evidence: bool = False


def product_value(E: EValueVector, lam: float) -> LogValue:
    """log M_n(lam) for one fraction lam in [0, 1].

    Each factor is evaluated as logaddexp(log(1 - lam), log(lam) +
    log E_i), which is exact at both betting extremes: lam = 0 returns
    exactly 1 and lam = 1 returns exactly the plain product of the
    e-values.  A zero factor (lam = 1 with a zero entry) forces the
    whole product to zero even in the presence of infinite entries,
    per the package-wide 0 * inf == 0 rule.
    """
    lam = float(lam)
    if math.isnan(lam) or not (0.0 <= lam <= 1.0):
        raise ConfigError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0.0:
        return LogValue(0.0)
    log_lam = math.log(lam)
    log_complement = LOG_ZERO if lam == 1.0 else math.log1p(-lam)
    factors = np.logaddexp(log_complement, log_lam + E.log_values)
    if (factors == LOG_ZERO).any():
        return LogValue(LOG_ZERO)
    return LogValue(float(np.sum(factors)))


def _derivative(e: np.ndarray, lam: float) -> float:
    """sum (E_i - 1)/((1-lam) + lam E_i) with saturation handling.

    Entries whose linear magnitude saturates to inf make the term
    inf/inf; its limit is 1/lam, which is substituted directly.
    """
    with np.errstate(invalid="ignore"):
        terms = (e - 1.0) / ((1.0 - lam) + lam * e)
    if lam > 0.0:
        saturated = np.isnan(terms)
        if saturated.any():
            terms = np.where(saturated, 1.0 / lam, terms)
    return float(np.sum(terms))


def score_derivative(E: EValueVector, lam: float) -> float:
    """The derivative of log M_n at lam, an extended real.

    Defined for lam in [0, 1) and finite e-values (every factor is then
    at least 1 - lam > 0).
    """
    lam = float(lam)
    if math.isnan(lam) or not (0.0 <= lam < 1.0):
        raise ConfigError(f"lambda must lie in [0, 1) for the derivative, got {lam}")
    if np.isposinf(E.log_values).any():
        raise ValidationError("derivative requires finite e-values")
    return _derivative(E.values, lam)


def optimize_lambda(
    E: EValueVector, tol: float = DEFAULT_LAMBDA_TOL
) -> BettingOptimum:
    """Maximize log M_n(lam) over lam in [0, 1] to within tol in lam.

    Boundary cases are resolved exactly; interior maxima are located by
    bisection on the derivative sign, which the concavity of the
    objective makes unconditionally convergent.  At most 60 steps are
    taken (interval width 2^-60, far below any useful tolerance).

    With a zero entry present the objective falls to -inf at lam = 1,
    so the bisection stays on [0, 1); with an infinite entry present
    every interior lam already gives an infinite product and the result
    is flagged instead of searched for.
    """
    tol = float(tol)
    if not tol > 0.0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    if np.isposinf(E.log_values).any():
        return BettingOptimum(
            lambda_star=0.5,
            log_value=LogValue(LOG_INF),
            boundary=Boundary.INTERIOR,
            iterations=0,
            achieved_tol=0.0,
            infinite_evidence=True,
        )
    e = E.values
    slope_at_zero = float(np.sum(e - 1.0))
    if slope_at_zero <= 0.0:
        return BettingOptimum(0.0, LogValue(0.0), Boundary.AT_ZERO, 0, 0.0)
    if not (E.log_values == LOG_ZERO).any():
        with np.errstate(divide="ignore"):
            slope_at_one = float(np.sum(1.0 - 1.0 / e))
        if slope_at_one >= 0.0:
            value = float(np.sum(E.log_values))
            return BettingOptimum(1.0, LogValue(value), Boundary.AT_ONE, 0, 0.0)
    lo, hi = 0.0, 1.0
    iterations = 0
    while (hi - lo) > 2.0 * tol and iterations < _MAX_BISECTION_STEPS:
        mid = 0.5 * (lo + hi)
        if _derivative(e, mid) > 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    lam_hat = 0.5 * (lo + hi)
    log_value = product_value(E, lam_hat).log_magnitude
    return BettingOptimum(
        lambda_star=lam_hat,
        log_value=LogValue(max(0.0, log_value)),
        boundary=Boundary.INTERIOR,
        iterations=iterations,
        achieved_tol=0.5 * (hi - lo),
    )
