"""
Validation
==========

Monte Carlo audits of interval coverage and contour validity.

Replications are grouped in fixed-size blocks; block `b` draws its normals from the substream
`SeedSequence(seed, spawn_key=(b,))`, so a report depends only on the configuration (seed and
block size included) and never on how many worker threads processed the blocks.
Substreams are keyed on the block rather than on the single replication, so changing
`block_size` changes the draws; every report echoes the block size it was produced with.

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
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
import numpy.typing as npt

from core.constants import VALIDITY_ALPHAS
from core.inference import (
    contour_joint_t1,
    contour_joint_t2,
    contour_marginal_t1,
    contour_marginal_t2,
    contour_standard,
)
from core.intervals import (
    check_alpha,
    ci_partial,
    ci_regularized,
    ci_standard,
    lambda1_star,
    lambda2_star,
    len_L1,
    len_L2,
)
from core.models import ConstraintError, CoverageReport, Interval, McConfig, Method, Observation

__all__ = ("ConstraintError", "resolve_lambda", "draw_block", "simulate_coverage", "simulate_contour_validity")

log = logging.getLogger(__name__)

# Counts hits for the replications of one block
BlockCounter = Callable[[Observation], npt.NDArray[np.bool_]]


def resolve_lambda(config: McConfig) -> float:
    """Penalty weight used by the audited method; tuned once per configuration since lengths are data-free."""
    if config.method is Method.STANDARD:
        return 0.0
    if not config.tune:
        return config.lam
    if config.method is Method.PARTIAL:
        return lambda1_star(config.alpha, config.B)
    return lambda2_star(config.alpha, config.B, config.bracket).lambda_star


def _interval_length(config: McConfig, lam: float) -> float:
    if config.method is Method.STANDARD:
        return len_L1(0.0, config.alpha, config.B)
    if config.method is Method.PARTIAL:
        return len_L1(lam, config.alpha, config.B)
    return len_L2(lam, config.alpha, config.B)


def _interval(config: McConfig, y: Observation, lam: float) -> Interval:
    if config.method is Method.STANDARD:
        return ci_standard(y.y2, config.alpha)
    if config.method is Method.PARTIAL:
        return ci_partial(y, config.alpha, config.B, lam)
    return ci_regularized(y, config.alpha, config.B, lam)


def draw_block(config: McConfig, block: int) -> Observation:
    """Draw the observations of replication block `block`."""
    start = block * config.block_size
    size = min(config.block_size, config.n_reps - start)
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(block,)))
    noise = rng.standard_normal((2, size))
    theta1, theta2 = config.theta_true
    return Observation(theta1 + noise[0], theta2 + noise[1])


def _count_blocks(config: McConfig, counter: BlockCounter, workers: int | None) -> npt.NDArray[np.int64]:
    """Sum per-block hit counts over all replications; exact integer sums make the order irrelevant."""
    n_blocks = math.ceil(config.n_reps / config.block_size)

    def run_block(block: int) -> npt.NDArray[np.int64]:
        return np.atleast_1d(np.count_nonzero(counter(draw_block(config, block)), axis=-1))

    with ThreadPoolExecutor(max_workers=workers) as executor:
        counts = sum(executor.map(run_block, range(n_blocks)))
    log.info("Simulated %d replications in %d blocks of %d", config.n_reps, n_blocks, config.block_size)
    return counts


def _report(config: McConfig, alpha: float, lam: float, covered: int, mean_length: float | None) -> CoverageReport:
    coverage = covered / config.n_reps
    std_error = math.sqrt(coverage * (1 - coverage) / config.n_reps)
    report = CoverageReport(
        method=config.method.value,
        alpha=alpha,
        B=config.B,
        lam=lam,
        theta1=float(config.theta_true.theta1),
        theta2=float(config.theta_true.theta2),
        n_reps=config.n_reps,
        seed=config.seed,
        block_size=config.block_size,
        covered=covered,
        empirical_coverage=coverage,
        empirical_alpha_exceedance=1 - coverage,
        std_error=std_error,
        mean_length=mean_length,
    )
    if not report.is_valid():
        log.warning(
            "Validity band violated for %s at alpha = %g: coverage %.6f < %.6f",
            report.method,
            alpha,
            coverage,
            report.lower_band,
        )
    return report


def simulate_coverage(config: McConfig, workers: int | None = None) -> CoverageReport:
    """Estimate the theta2 coverage of the configured method's interval."""
    check_alpha(config.alpha)
    lam = resolve_lambda(config)
    theta2 = config.theta_true.theta2
    log.info("Auditing %s interval coverage with lambda = %.10g", config.method.value, lam)
    covered = _count_blocks(config, lambda y: _interval(config, y, lam).contains(theta2), workers)
    return _report(config, config.alpha, lam, int(covered[0]), _interval_length(config, lam))


def _contour_at_truth(
    config: McConfig, lam: float, theta2_component_only: bool
) -> Callable[[Observation], npt.NDArray[np.float64]]:
    theta = config.theta_true
    if config.method is Method.STANDARD:
        return lambda y: contour_standard(y.y2, theta.theta2)
    if config.method is Method.PARTIAL:
        if theta2_component_only:
            return lambda y: contour_marginal_t1(y, theta.theta2, lam, config.B)
        return lambda y: contour_joint_t1(y, theta, lam)
    if theta2_component_only:
        return lambda y: contour_marginal_t2(y, theta.theta2, lam, config.B)
    return lambda y: contour_joint_t2(y, theta, lam)


def simulate_contour_validity(
    config: McConfig, theta2_component_only: bool, workers: int | None = None
) -> list[CoverageReport]:
    """Estimate P{contour(Y, true theta) <= alpha} for every alpha in `VALIDITY_ALPHAS`.

    One report per alpha; `empirical_alpha_exceedance` is the estimated probability and
    `empirical_coverage` its complement. `theta2_component_only` audits the marginal contour for
    theta2 instead of the joint contour at (theta1, theta2).
    """
    check_alpha(config.alpha)
    lam = resolve_lambda(config)
    contour = _contour_at_truth(config, lam, theta2_component_only)
    alphas = np.asarray(VALIDITY_ALPHAS)
    log.info(
        "Auditing %s %s contour validity with lambda = %.10g",
        config.method.value,
        "marginal" if theta2_component_only else "joint",
        lam,
    )
    # rows: alphas, columns: replications; a hit is a contour value above alpha
    covered = _count_blocks(config, lambda y: np.asarray(contour(y))[np.newaxis, :] > alphas[:, np.newaxis], workers)
    return [_report(config, float(alpha), lam, int(hits), None) for alpha, hits in zip(alphas, covered)]
