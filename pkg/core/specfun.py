"""
Specfun
=======

Standard normal and noncentral chi-square (one degree of freedom) special functions.

The noncentral CDF is evaluated as a Poisson(gamma/2)-weighted mixture of central chi-square
CDFs with 1 + 2j degrees of freedom, spanning outward from the Poisson mode until the remaining
tail mass on each side drops below `SERIES_TAIL_MASS`.

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
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import optimize, special

from core.constants import QUANTILE_XTOL, SERIES_TAIL_MASS

ArrayOrFloat = float | npt.NDArray[np.float64]

_BELOW_ONE = math.nextafter(1.0, 0.0)


class DomainError(ValueError):
    """Exception raised when an argument lies outside the domain of an operation."""


def _as_output(value: npt.NDArray[np.float64]) -> ArrayOrFloat:
    return float(value) if np.ndim(value) == 0 else value


def _clip_probability(value: npt.ArrayLike) -> ArrayOrFloat:
    return _as_output(np.clip(value, 0.0, 1.0))


def _check_finite(name: str, value: npt.ArrayLike) -> npt.NDArray[np.float64]:
    array = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} must be finite, got {value!r}.")
    return array


def _check_open_probability(p: float) -> float:
    if not (math.isfinite(p) and 0 < p < 1):
        raise DomainError(f"Probability must lie in (0, 1), got {p!r}.")
    return float(p)


def _check_noncentrality(gamma: float) -> float:
    if not (math.isfinite(gamma) and gamma >= 0):
        raise DomainError(f"Noncentrality must be a finite nonnegative number, got {gamma!r}.")
    return float(gamma)


def norm_cdf(x: ArrayOrFloat) -> ArrayOrFloat:
    """Standard normal CDF."""
    return _clip_probability(special.ndtr(_check_finite("x", x)))


def norm_pdf(x: ArrayOrFloat) -> ArrayOrFloat:
    """Standard normal density."""
    array = _check_finite("x", x)
    return _as_output(np.exp(-0.5 * array * array) / math.sqrt(2 * math.pi))


def norm_quantile(p: float) -> float:
    """Standard normal quantile function."""
    return float(special.ndtri(_check_open_probability(p)))


def _central_root(p: float) -> float:
    # sqrt of the central chi-square(1) p-quantile; upper-tail form keeps precision as p -> 1
    return float(-special.ndtri((1 - p) / 2))


@lru_cache(maxsize=1024)
def _poisson_terms(gamma: float) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Half degrees of freedom and Poisson(gamma/2) weights of the retained mixture terms."""
    mean = gamma / 2
    low = high = math.floor(mean)
    while low > 0 and special.pdtr(low - 1, mean) >= SERIES_TAIL_MASS:
        low -= 1
    while special.pdtrc(high, mean) >= SERIES_TAIL_MASS:
        high += 1
    j = np.arange(low, high + 1, dtype=np.float64)
    weights = np.exp(special.xlogy(j, mean) - mean - special.gammaln(j + 1))
    weights.flags.writeable = False
    half_df = j + 0.5
    half_df.flags.writeable = False
    return half_df, weights


def _mixture(regularized_gamma, x: npt.NDArray[np.float64], gamma: float) -> npt.NDArray[np.float64]:
    half_df, weights = _poisson_terms(gamma)
    terms = regularized_gamma(half_df, 0.5 * x[..., np.newaxis])
    return terms @ weights


def _check_chisq_args(x: ArrayOrFloat, gamma: float) -> tuple[npt.NDArray[np.float64], float]:
    array = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(array)) or np.any(array < 0):
        raise DomainError(f"x must be nonnegative, got {x!r}.")
    return array, _check_noncentrality(gamma)


def chisq1_cdf(x: ArrayOrFloat, gamma: float) -> ArrayOrFloat:
    """CDF of the chi-square distribution with 1 degree of freedom and noncentrality `gamma`."""
    array, gamma = _check_chisq_args(x, gamma)
    return _clip_probability(_mixture(special.gammainc, array, gamma))


def chisq1_sf(x: ArrayOrFloat, gamma: float) -> ArrayOrFloat:
    """Survival function 1 - chisq1_cdf(x, gamma), summed from upper incomplete gamma terms."""
    array, gamma = _check_chisq_args(x, gamma)
    return _clip_probability(_mixture(special.gammaincc, array, gamma))


def chisq1_quantile(p: float, gamma: float) -> float:
    """Quantile of the chi-square distribution with 1 degree of freedom and noncentrality `gamma`."""
    p, gamma = _check_open_probability(p), _check_noncentrality(gamma)
    if gamma == 0:
        return _central_root(p) ** 2

    upper = _central_root(p) ** 2 + gamma
    while chisq1_cdf(upper, gamma) <= p:
        upper *= 2

    # invert in sqrt(x), where the CDF has a bounded slope at the origin
    root = optimize.brentq(
        lambda h: chisq1_cdf(h * h, gamma) - p,
        0.0,
        math.sqrt(upper),
        xtol=QUANTILE_XTOL,
        rtol=4 * np.finfo(float).eps,
    )
    return root * root


def chisq1_quantile_dmu(p: float, mu: float) -> float:
    """Derivative in `mu` of sqrt(chisq1_quantile(p, mu**2)).

    Implicit differentiation of Phi(h - mu) - Phi(-h - mu) = p gives
    [phi(|h - mu|) - phi(|h + mu|)] / [phi(|h - mu|) + phi(|h + mu|)], which reduces to tanh(h * mu).
    The result is capped just below 1, since tanh rounds to 1.0 once h * mu is about 19.
    """
    if not (math.isfinite(mu) and mu >= 0):
        raise DomainError(f"mu must be a finite nonnegative number, got {mu!r}.")
    h = math.sqrt(chisq1_quantile(p, mu * mu))
    return min(math.tanh(h * mu), _BELOW_ONE)


def chisq1_quantile_dgamma(p: float, gamma: float) -> float:
    """Derivative of chisq1_quantile(p, gamma) with respect to `gamma`."""
    gamma = _check_noncentrality(gamma)
    quantile = chisq1_quantile(p, gamma)
    if gamma == 0:
        # tanh(h * mu) / mu -> h as mu -> 0
        return quantile
    mu = math.sqrt(gamma)
    return math.sqrt(quantile) * chisq1_quantile_dmu(p, mu) / mu
