"""
Inference
=========

Regularized ML estimation, Wald-type statistics and possibility contours for two normal means
under the Hölder constraint |theta2 - theta1| <= B.

All functions broadcast over numpy arrays, so one call can evaluate a sweep over theta2 or a
whole Monte Carlo block of observations.

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
import math

import numpy as np

from core.models import FloatArray, MeanPair, Observation
from core.specfun import DomainError, chisq1_sf, norm_cdf


def check_penalty(lam: float) -> float:
    """Validate a penalty weight."""
    if not (math.isfinite(lam) and lam >= 0):
        raise DomainError(f"Penalty weight must be a finite nonnegative number, got {lam!r}.")
    return float(lam)


def check_bound(B: float) -> float:
    """Validate a Hölder bound."""
    if not (math.isfinite(B) and B >= 0):
        raise DomainError(f"Hölder bound must be a finite nonnegative number, got {B!r}.")
    return float(B)


def scale_squared(lam: float) -> float:
    """Variance lambda^2 + (1 + lambda)^2 of (1 + 2 lambda) times the regularized estimate of theta2."""
    return lam * lam + (1 + lam) * (1 + lam)


def regularized_center(y: Observation, lam: float) -> FloatArray:
    """Second coordinate of the regularized ML estimate: [lambda y1 + (1 + lambda) y2] / (1 + 2 lambda)."""
    return (lam * y.y1 + (1 + lam) * y.y2) / (1 + 2 * lam)


def noncentrality_g(lam: float, B: float) -> float:
    """Noncentrality lambda^2 B^2 / [lambda^2 + (1 + lambda)^2] of the marginal t2 contour."""
    lam, B = check_penalty(lam), check_bound(B)
    return lam * lam * B * B / scale_squared(lam)


def regularized_mle(y: Observation, lam: float) -> MeanPair:
    """Minimiser of the ridge-penalized negative log-likelihood `rnll`."""
    lam = check_penalty(lam)
    denominator = 1 + 2 * lam
    return MeanPair(
        ((1 + lam) * y.y1 + lam * y.y2) / denominator,
        (lam * y.y1 + (1 + lam) * y.y2) / denominator,
    )


def rnll(theta: MeanPair, lam: float, y: Observation) -> FloatArray:
    """Regularized negative log-likelihood, up to constants."""
    lam = check_penalty(lam)
    return (
        (y.y1 - theta.theta1) ** 2 / 2
        + (y.y2 - theta.theta2) ** 2 / 2
        + lam * (theta.theta1 - theta.theta2) ** 2 / 2
    )


def _uncentered(y: Observation, theta2: FloatArray, lam: float) -> FloatArray:
    return lam * (y.y1 - theta2) + (1 + lam) * (y.y2 - theta2)


def t1_statistic(y: Observation, theta: MeanPair, lam: float) -> FloatArray:
    """Centered Wald-type statistic, central chi-square(1) under the true theta."""
    lam = check_penalty(lam)
    numerator = _uncentered(y, theta.theta2, lam) - lam * (theta.theta1 - theta.theta2)
    return numerator * numerator / scale_squared(lam)


def t2_statistic(y: Observation, theta2: FloatArray, lam: float) -> FloatArray:
    """Uncentered Wald-type statistic; depends on theta only through theta2."""
    lam = check_penalty(lam)
    numerator = _uncentered(y, theta2, lam)
    return numerator * numerator / scale_squared(lam)


def contour_standard(y2: FloatArray, theta2: FloatArray) -> FloatArray:
    """Marginal contour for theta2 that ignores y1 and the constraint."""
    return chisq1_sf((np.asarray(y2) - theta2) ** 2, 0.0)


def contour_joint_t1(y: Observation, theta: MeanPair, lam: float) -> FloatArray:
    """Joint contour for (theta1, theta2) from the centered statistic."""
    return chisq1_sf(t1_statistic(y, theta, lam), 0.0)


def contour_marginal_t1(y: Observation, theta2: FloatArray, lam: float, B: float) -> FloatArray:
    """Supremum of `contour_joint_t1` over theta1 in [theta2 - B, theta2 + B].

    Equal to 1 on the plateau [(c - lambda B) / (1 + 2 lambda), (c + lambda B) / (1 + 2 lambda)] with
    c = lambda y1 + (1 + lambda) y2, and to the joint contour at theta1 = theta2 +/- B left/right of it.
    """
    lam, B = check_penalty(lam), check_bound(B)
    center = lam * y.y1 + (1 + lam) * y.y2
    denominator = 1 + 2 * lam
    shift = lam * B
    theta2 = np.asarray(theta2, dtype=np.float64)
    left = theta2 < (center - shift) / denominator
    right = theta2 > (center + shift) / denominator
    # left of the plateau the supremum sits at theta1 = theta2 + B, right of it at theta2 - B
    numerator = center - denominator * theta2 + np.where(left, -shift, shift)
    tail = chisq1_sf(numerator * numerator / scale_squared(lam), 0.0)
    value = np.where(left | right, tail, 1.0)
    return float(value) if np.ndim(value) == 0 else value


def contour_joint_t2(y: Observation, theta: MeanPair, lam: float) -> FloatArray:
    """Joint contour for (theta1, theta2) from the uncentered statistic with noncentral calibration."""
    lam = check_penalty(lam)
    r = np.sqrt(t2_statistic(y, theta.theta2, lam))
    # square root of the noncentrality, one per theta1
    mu = lam * np.abs(np.asarray(theta.theta1, dtype=np.float64) - theta.theta2) / math.sqrt(scale_squared(lam))
    # P{(Z + mu)^2 > r^2} = Phi(mu - r) + Phi(-mu - r)
    value = np.minimum(norm_cdf(mu - r) + norm_cdf(-mu - r), 1.0)
    return float(value) if np.ndim(value) == 0 else value


def contour_marginal_t2(y: Observation, theta2: FloatArray, lam: float, B: float) -> FloatArray:
    """Supremum of `contour_joint_t2` over theta1 in [theta2 - B, theta2 + B], attained at |theta1 - theta2| = B."""
    return chisq1_sf(t2_statistic(y, theta2, lam), noncentrality_g(lam, B))
