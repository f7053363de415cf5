"""
Intervals
=========

Confidence intervals for theta2 (standard, partial conditioning and regularized), their lengths,
and penalty weight tuning.

The partial conditioning interval is the upper alpha-cut of the marginal t1 contour, the
regularized interval that of the marginal t2 contour. Both share the centre of the regularized
ML estimate and have data-free lengths, so tuning only depends on (alpha, B).

Copyright (C) 2024 The holderim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Affero General Public License as
published by the Free Software Foundation, either version 3 of the
License, or (at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Affero General Public License for more details.

You should have received a copy of the GNU Affero General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""
import logging
import math
from functools import lru_cache

from core.constants import ALPHA_MAX, ALPHA_MIN
from core.inference import check_bound, check_penalty, noncentrality_g, regularized_center, scale_squared
from core.models import BracketConfig, FloatArray, Interval, Observation, TunedResult
from core.optimize import minimize_scalar
from core.specfun import DomainError, chisq1_quantile, chisq1_quantile_dgamma, norm_quantile

__all__ = (
    "check_alpha",
    "critical_value",
    "ci_standard",
    "ci_partial",
    "ci_regularized",
    "noncentrality_g",
    "len_L1",
    "len_L2",
    "len_L2_derivative",
    "lambda1_star",
    "optimal_length_L1",
    "lambda2_star",
    "optimal_length_L2",
)

log = logging.getLogger(__name__)


def check_alpha(alpha: float) -> float:
    """Validate a miscoverage rate."""
    if not (math.isfinite(alpha) and ALPHA_MIN < alpha < ALPHA_MAX):
        raise DomainError(f"alpha must lie in ({ALPHA_MIN:g}, {ALPHA_MAX}), got {alpha!r}.")
    return float(alpha)


def critical_value(alpha: float) -> float:
    """Two-sided standard normal critical value z_{1 - alpha/2}."""
    return -norm_quantile(check_alpha(alpha) / 2)


def _half_width_L1(lam: float, alpha: float, B: float) -> float:
    return (lam * B + critical_value(alpha) * math.sqrt(scale_squared(lam))) / (1 + 2 * lam)


def _half_width_L2(lam: float, alpha: float, B: float) -> float:
    quantile = chisq1_quantile(1 - check_alpha(alpha), noncentrality_g(lam, B))
    return math.sqrt(quantile * scale_squared(lam)) / (1 + 2 * lam)


def ci_standard(y2: FloatArray, alpha: float) -> Interval:
    """Textbook interval y2 -/+ z_{1 - alpha/2}, ignoring y1 and the constraint."""
    z = critical_value(alpha)
    return Interval(y2 - z, y2 + z)


def ci_partial(y: Observation, alpha: float, B: float, lam: float) -> Interval:
    """Partial conditioning interval: upper alpha-cut of the marginal t1 contour."""
    lam, B = check_penalty(lam), check_bound(B)
    center = regularized_center(y, lam)
    half_width = _half_width_L1(lam, alpha, B)
    return Interval(center - half_width, center + half_width)


def ci_regularized(y: Observation, alpha: float, B: float, lam: float) -> Interval:
    """Regularized interval: upper alpha-cut of the marginal t2 contour."""
    lam, B = check_penalty(lam), check_bound(B)
    center = regularized_center(y, lam)
    half_width = _half_width_L2(lam, alpha, B)
    return Interval(center - half_width, center + half_width)


def len_L1(lam: float, alpha: float, B: float) -> float:
    """Length of the partial conditioning interval (independent of the data)."""
    return 2 * _half_width_L1(check_penalty(lam), alpha, check_bound(B))


def len_L2(lam: float, alpha: float, B: float) -> float:
    """Length of the regularized interval (independent of the data)."""
    return 2 * _half_width_L2(check_penalty(lam), alpha, check_bound(B))


def len_L2_derivative(lam: float, alpha: float, B: float) -> float:
    """Derivative of `len_L2` with respect to the penalty weight.

    Chain rule through g(lambda, B), whose derivative is 2 lambda (1 + lambda) B^2 / s^2 with
    s = lambda^2 + (1 + lambda)^2, and through the derivative of the noncentral quantile.
    """
    lam, B = check_penalty(lam), check_bound(B)
    level = 1 - check_alpha(alpha)
    scale = scale_squared(lam)
    gamma = noncentrality_g(lam, B)
    quantile = chisq1_quantile(level, gamma)
    d_gamma = 2 * lam * (1 + lam) * B * B / (scale * scale)
    d_log_length = (
        chisq1_quantile_dgamma(level, gamma) * d_gamma / (2 * quantile) + (1 + 2 * lam) / scale - 2 / (1 + 2 * lam)
    )
    return len_L2(lam, alpha, B) * d_log_length


def lambda1_star(alpha: float, B: float) -> float:
    """Closed-form penalty weight minimising `len_L1`; zero once B exceeds z_{1 - alpha/2}."""
    B = check_bound(B)
    if B == 0:
        raise DomainError("B = 0 has no finite optimal penalty weight (the optimum is the limit lambda -> inf).")
    z = critical_value(alpha)
    if B > z:
        return 0.0
    return (-B + math.sqrt(2 * z * z - B * B)) / (2 * B)


def optimal_length_L1(alpha: float, B: float) -> float:
    """Minimum of `len_L1` over the penalty weight, including the B = 0 limit sqrt(2) z."""
    B = check_bound(B)
    z = critical_value(alpha)
    if B > z:
        return 2 * z
    return B + math.sqrt(2 * z * z - B * B)


@lru_cache(maxsize=256)
def _tune_L2(alpha: float, B: float, config: BracketConfig) -> TunedResult:
    result = minimize_scalar(lambda lam: len_L2(lam, alpha, B), config)
    log.info(
        "Tuned regularized interval for alpha = %g, B = %g: lambda = %.10g, length = %.12g (%d evaluations)",
        alpha,
        B,
        result.argmin,
        result.minimum,
        result.evaluations,
    )
    return TunedResult(result.argmin, result.minimum, result.evaluations)


def lambda2_star(alpha: float, B: float, config: BracketConfig | None = None) -> TunedResult:
    """Numerically tuned penalty weight minimising `len_L2`.

    Raises `BracketError` if the length does not turn upward within the configured doublings.
    """
    alpha, B = check_alpha(alpha), check_bound(B)
    if B == 0:
        raise DomainError("B = 0 has no finite optimal penalty weight (the optimum is the limit lambda -> inf).")
    return _tune_L2(alpha, B, config or BracketConfig())


def optimal_length_L2(alpha: float, B: float, config: BracketConfig | None = None) -> float:
    """Minimum of `len_L2` over the penalty weight, including the B = 0 limit sqrt(2) z."""
    if check_bound(B) == 0:
        return math.sqrt(2) * critical_value(alpha)
    return lambda2_star(alpha, B, config).length_star
