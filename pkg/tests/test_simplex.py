"""Downhill-simplex minimizer: convergence, determinism, and settings."""

from __future__ import annotations

import numpy as np
import pytest

from humor_engine import ConfigError, SimplexSettings, nelder_mead


def quadratic(x):
    return float((x[0] - 1.0) ** 2 + (x[1] - 2.0) ** 2)


def test_reaches_quadratic_minimum():
    result = nelder_mead(quadratic, np.zeros(2), SimplexSettings())
    assert result.converged
    assert result.iterations <= 200
    assert result.x == pytest.approx([1.0, 2.0], abs=1e-4)
    assert result.fval == pytest.approx(0.0, abs=1e-7)


def test_one_dimensional():
    result = nelder_mead(lambda x: (x[0] + 3.0) ** 2, np.zeros(1), SimplexSettings())
    assert result.x == pytest.approx([-3.0], abs=1e-4)


def test_rosenbrock_moves_downhill():
    def rosenbrock(x):
        return float(100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2)

    settings = SimplexSettings(max_iterations=2000)
    result = nelder_mead(rosenbrock, np.array([-1.2, 1.0]), settings)
    assert result.fval < rosenbrock(np.array([-1.2, 1.0]))
    assert result.x == pytest.approx([1.0, 1.0], abs=1e-2)


def test_deterministic():
    a = nelder_mead(quadratic, np.zeros(2), SimplexSettings())
    b = nelder_mead(quadratic, np.zeros(2), SimplexSettings())
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations
    assert a.fval == b.fval


def test_iteration_cap_respected():
    settings = SimplexSettings(max_iterations=3)
    result = nelder_mead(quadratic, np.zeros(2), settings)
    assert result.iterations <= 3
    assert not result.converged


def test_handles_infinite_objective_regions():
    def guarded(x):
        if x[0] < 0:
            return float("inf")
        return float((x[0] - 2.0) ** 2 + x[1] ** 2)

    result = nelder_mead(guarded, np.array([1.0, 1.0]), SimplexSettings())
    assert result.x == pytest.approx([2.0, 0.0], abs=1e-3)


def test_start_at_optimum():
    result = nelder_mead(quadratic, np.array([1.0, 2.0]), SimplexSettings())
    assert result.x == pytest.approx([1.0, 2.0], abs=1e-4)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alpha": 0.0},
        {"gamma": 1.0},
        {"rho": 0.0},
        {"rho": 1.0},
        {"sigma": 1.5},
        {"initial_step": 0.0},
        {"max_iterations": 0},
        {"objective_tolerance": 0.0},
    ],
)
def test_settings_validation(kwargs):
    with pytest.raises(ConfigError):
        SimplexSettings(**kwargs)


def test_settings_to_dict_round_trips_defaults():
    settings = SimplexSettings()
    assert SimplexSettings(**settings.to_dict()) == settings
