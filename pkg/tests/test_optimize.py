import math

import numpy as np
import pytest

from core.intervals import len_L2
from core.models import BracketConfig
from core.optimize import BracketError, expand_bracket, golden_section, minimize_scalar
from core.specfun import DomainError


def test_minimize_quadratic():
    result = minimize_scalar(lambda x: (x - 2) ** 2)
    assert result.argmin == pytest.approx(2, abs=1e-8)
    assert result.minimum == pytest.approx(0, abs=1e-15)
    assert result.lower <= result.argmin <= result.upper
    assert result.evaluations > 0


def test_minimize_kink():
    result = minimize_scalar(lambda x: abs(x - 1) + 0.1 * x)
    assert result.argmin == pytest.approx(1, abs=1e-6)


def test_minimize_far_minimum_needs_doublings():
    result = minimize_scalar(lambda x: (x - 300) ** 2)
    assert result.argmin == pytest.approx(300, abs=1e-6)


def test_minimize_len_L2_matches_grid_scan():
    coarse = np.linspace(0, 10, 1001)
    center = coarse[np.argmin([len_L2(lam, 0.05, 1.0) for lam in coarse])]
    grid = np.linspace(max(center - 0.01, 0.0), center + 0.01, 2001)
    lengths = np.array([len_L2(lam, 0.05, 1.0) for lam in grid])
    result = minimize_scalar(lambda lam: len_L2(lam, 0.05, 1.0))
    assert result.argmin == pytest.approx(grid[np.argmin(lengths)], abs=1e-4)
    assert result.minimum <= lengths.min() + 1e-12


def test_expand_bracket():
    assert expand_bracket(lambda x: (x - 0.5) ** 2, BracketConfig()) == (0.0, 1.0)
    lower, upper = expand_bracket(lambda x: (x - 5) ** 2, BracketConfig())
    assert lower < 5 < upper
    assert (lower, upper) == (2.0, 8.0)


def test_expand_bracket_gives_up():
    with pytest.raises(BracketError):
        expand_bracket(lambda x: -x, BracketConfig(max_doublings=5))


def test_non_finite_objective():
    with pytest.raises(BracketError):
        minimize_scalar(lambda x: math.nan)
    with pytest.raises(BracketError):
        minimize_scalar(lambda x: -math.inf if x > 3 else -x)


def test_golden_section_shrinks_to_tolerance():
    lower, upper, x_best, f_best = golden_section(lambda x: (x - math.pi) ** 2, 2.0, 4.0, 1e-9)
    assert upper - lower <= 1e-9
    assert x_best == pytest.approx(math.pi, abs=1e-8)
    assert f_best <= 1e-16
    # cos is flat to second order at its minimum, so only sqrt(eps) accuracy is attainable
    x_best = golden_section(math.cos, 2.0, 4.0, 1e-9)[2]
    assert x_best == pytest.approx(math.pi, abs=1e-7)


def test_golden_section_narrow_bracket():
    lower, upper, x_best, _ = golden_section(lambda x: x * x, -1e-10, 1e-10, 1e-8)
    assert (lower, upper, x_best) == (-1e-10, 1e-10, 0.0)


@pytest.mark.parametrize(
    "kwargs", [{"initial_upper": 0.0}, {"initial_upper": math.inf}, {"max_doublings": 0}, {"tolerance": 0.0}]
)
def test_bracket_config_validation(kwargs):
    with pytest.raises(DomainError):
        BracketConfig(**kwargs)
