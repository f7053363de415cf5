"""
Optimize
========

Bracketed derivative-free minimisation of scalar functions on [0, inf).

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
from typing import Callable, NamedTuple

from core.models import BracketConfig

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

log = logging.getLogger(__name__)


class BracketError(RuntimeError):
    """Exception raised when no bracket around a minimum can be established."""


class ScalarMinimum(NamedTuple):
    """Result of `minimize_scalar`."""

    argmin: float
    minimum: float
    lower: float
    upper: float
    evaluations: int


class _CountingObjective:
    """Objective wrapper counting evaluations and rejecting non-finite values."""

    __slots__ = ("function", "evaluations")

    def __init__(self, function: Callable[[float], float]) -> None:
        self.function = function
        self.evaluations = 0

    def __call__(self, x: float) -> float:
        self.evaluations += 1
        value = float(self.function(x))
        if not math.isfinite(value):
            raise BracketError(f"Objective is not finite at x = {x!r} (value {value!r}).")
        return value


def expand_bracket(f: Callable[[float], float], config: BracketConfig) -> tuple[float, float]:
    """Find [lower, upper] containing a minimum of `f` on [0, inf) by doubling the upper end.

    Stops as soon as `f` increases over the last doubling; if `f` is already no lower at
    `config.initial_upper` than at 0, the minimum lies in [0, initial_upper].
    """
    f_zero = f(0.0)
    previous, current = 0.0, config.initial_upper
    f_current = f(current)
    if f_current >= f_zero:
        return 0.0, current
    for _ in range(config.max_doublings):
        candidate = 2 * current
        f_candidate = f(candidate)
        log.debug("Bracket expansion: f(%g) = %.15g, f(%g) = %.15g", current, f_current, candidate, f_candidate)
        if f_candidate > f_current:
            return previous, candidate
        previous, current, f_current = current, candidate, f_candidate
    raise BracketError(f"No increase found within {config.max_doublings} doublings (last upper end {current!r}).")


def golden_section(
    f: Callable[[float], float], lower: float, upper: float, tolerance: float
) -> tuple[float, float, float, float]:
    """Golden-section search.

    Given a function `f` with a single local minimum in [lower, upper], shrink the bracket by the
    factor 1/phi per step until its width is at most `tolerance`. Returns the final bracket and the
    better of the two interior points with its value.
    """
    width = upper - lower
    if width <= tolerance:
        middle = (lower + upper) / 2
        return lower, upper, middle, f(middle)

    # required steps to achieve tolerance
    steps = math.ceil(math.log(tolerance / width) / math.log(INV_PHI))

    c = lower + INV_PHI_SQUARE * width
    d = lower + INV_PHI * width
    yc, yd = f(c), f(d)
    for _ in range(steps - 1):
        if yc < yd:
            upper, d, yd = d, c, yc
            width *= INV_PHI
            c = lower + INV_PHI_SQUARE * width
            yc = f(c)
        else:
            lower, c, yc = c, d, yd
            width *= INV_PHI
            d = lower + INV_PHI * width
            yd = f(d)

    if yc < yd:
        return lower, d, c, yc
    return c, upper, d, yd


def minimize_scalar(f: Callable[[float], float], config: BracketConfig | None = None) -> ScalarMinimum:
    """Minimise `f` over [0, inf) by bracket doubling followed by golden-section refinement.

    The caller guarantees `f` is continuous, descends at 0 and eventually increases. The returned
    point is never worse than 0 or either end of the final bracket.
    """
    config = config or BracketConfig()
    objective = _CountingObjective(f)
    lower, upper = expand_bracket(objective, config)
    lower, upper, x_best, f_best = golden_section(objective, lower, upper, config.tolerance)

    for candidate in (0.0, lower, upper):
        if (value := objective(candidate)) < f_best:
            x_best, f_best = candidate, value

    log.debug(
        "Minimum %.15g at x = %.12g, bracket [%.12g, %.12g], %d evaluations",
        f_best,
        x_best,
        lower,
        upper,
        objective.evaluations,
    )
    return ScalarMinimum(x_best, f_best, lower, upper, objective.evaluations)
