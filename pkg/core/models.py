"""
Models
======

Common models for holderim.

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
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt

from core.constants import CONSTRAINT_SLACK, DEFAULT_BLOCK_SIZE, VALIDITY_SIGMAS
from core.specfun import DomainError

# Scalars for single observations, arrays for sweeps and Monte Carlo blocks
FloatArray = float | npt.NDArray[np.float64]


class ConstraintError(DomainError):
    """Exception raised when true means violate the Hölder constraint |theta1 - theta2| <= B."""


class Observation(NamedTuple):
    """Pair of unit-variance normal draws (y1, y2)."""

    y1: FloatArray
    y2: FloatArray


class MeanPair(NamedTuple):
    """Pair of normal means (theta1, theta2)."""

    theta1: FloatArray
    theta2: FloatArray


class Interval(NamedTuple):
    """Closed confidence interval [lower, upper]."""

    lower: FloatArray
    upper: FloatArray

    @property
    def length(self) -> FloatArray:
        return self.upper - self.lower

    def contains(self, value: FloatArray) -> bool | npt.NDArray[np.bool_]:
        """Check if `value` lies in the interval (endpoints included)."""
        return (self.lower <= value) & (value <= self.upper)


class TunedResult(NamedTuple):
    """Penalty weight minimising an interval length."""

    lambda_star: float
    length_star: float
    evaluations: int


@dataclass(frozen=True)
class BracketConfig:
    """Settings for bracket expansion and golden-section refinement."""

    initial_upper: float = 1.0
    max_doublings: int = 60
    tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if not (math.isfinite(self.initial_upper) and self.initial_upper > 0):
            raise DomainError(f"initial_upper must be positive, got {self.initial_upper!r}.")
        if self.max_doublings < 1:
            raise DomainError(f"max_doublings must be at least 1, got {self.max_doublings!r}.")
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance!r}.")


class SweepVariable(str, Enum):
    THETA2 = "theta2"
    LAMBDA = "lambda"
    B = "B"
    SQRT_GAMMA = "sqrt_gamma"


@dataclass(frozen=True)
class SweepSpec:
    """Evenly spaced grid over one variable, written `var:start:stop:steps` on the command line."""

    variable: SweepVariable
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise DomainError(f"Sweep start must be below stop, got {self.start!r}:{self.stop!r}.")
        if self.steps < 2:
            raise DomainError(f"Sweep needs at least 2 steps, got {self.steps!r}.")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """Parse `var:start:stop:steps`."""
        try:
            variable, start, stop, steps = text.split(":")
            return cls(SweepVariable(variable), float(start), float(stop), int(steps))
        except ValueError as error:
            if isinstance(error, DomainError):
                raise
            raise DomainError(f"Invalid sweep {text!r} (expected var:start:stop:steps).") from error

    def grid(self) -> npt.NDArray[np.float64]:
        return np.linspace(self.start, self.stop, self.steps)


class Method(str, Enum):
    """Interval construction audited by Monte Carlo runs."""

    STANDARD = "standard"
    PARTIAL = "partial"
    REGULARIZED = "regularized"


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo audit configuration.

    `tune` selects the length-optimal penalty weight for the method (closed form for the partial
    conditioning interval, numeric for the regularized one); otherwise `lam` is used as given.
    `bracket` holds the settings of the numeric tuning.
    """

    theta_true: MeanPair
    B: float
    alpha: float = 0.05
    method: Method = Method.STANDARD
    lam: float = 0.0
    tune: bool = False
    n_reps: int = 100_000
    seed: int = 0
    block_size: int = DEFAULT_BLOCK_SIZE
    bracket: BracketConfig = field(default_factory=BracketConfig)

    def __post_init__(self) -> None:
        theta1, theta2 = self.theta_true
        if not (math.isfinite(theta1) and math.isfinite(theta2)):
            raise DomainError(f"True means must be finite, got {tuple(self.theta_true)!r}.")
        if not (math.isfinite(self.B) and self.B >= 0):
            raise DomainError(f"B must be a nonnegative number, got {self.B!r}.")
        if abs(theta1 - theta2) > self.B + CONSTRAINT_SLACK:
            raise ConstraintError(f"|theta1 - theta2| = {abs(theta1 - theta2)!r} exceeds B = {self.B!r}.")
        if self.n_reps < 1:
            raise DomainError(f"n_reps must be at least 1, got {self.n_reps!r}.")
        if self.block_size < 1:
            raise DomainError(f"block_size must be at least 1, got {self.block_size!r}.")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}.")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError(f"lambda must be a nonnegative number, got {self.lam!r}.")


class CoverageReport(NamedTuple):
    """Monte Carlo summary of one audited configuration."""

    method: str
    alpha: float
    B: float
    lam: float
    theta1: float
    theta2: float
    n_reps: int
    seed: int
    block_size: int
    covered: int
    empirical_coverage: float
    empirical_alpha_exceedance: float
    std_error: float
    mean_length: float | None

    @property
    def lower_band(self) -> float:
        """Smallest coverage compatible with validity at the 3-sigma level."""
        return 1 - self.alpha - VALIDITY_SIGMAS * self.std_error

    def is_valid(self) -> bool:
        """Check the one-sided validity band: exceedance may not significantly exceed alpha."""
        return self.empirical_coverage >= self.lower_band

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dict with fixed field order."""
        return {
            ("lambda" if name == "lam" else name): value for name, value in self._asdict().items()
        } | {"valid": self.is_valid()}
