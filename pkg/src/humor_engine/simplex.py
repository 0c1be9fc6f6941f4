"""Derivative-free minimization with the Nelder-Mead downhill simplex.

Standard variant: reflection, expansion, outside/inside contraction,
shrink. Fully deterministic: vertex ordering uses a stable sort, so tied
objective values keep insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

__all__ = ["SimplexSettings", "SimplexResult", "nelder_mead"]


@dataclass(frozen=True)
class SimplexSettings:
    alpha: float = 1.0  # reflection
    gamma: float = 2.0  # expansion
    rho: float = 0.5  # contraction
    sigma: float = 0.5  # shrink
    initial_step: float = 0.25  # per-axis offset of the initial simplex
    max_iterations: int = 500
    objective_tolerance: float = 1e-6  # spread of f over the simplex
    simplex_tolerance: float = 1e-6  # diameter of the simplex

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ConfigError(f"simplex: alpha must be > 0, got {self.alpha}")
        if not self.gamma > 1:
            raise ConfigError(f"simplex: gamma must be > 1, got {self.gamma}")
        if not 0 < self.rho < 1:
            raise ConfigError(f"simplex: rho must be in (0,1), got {self.rho}")
        if not 0 < self.sigma < 1:
            raise ConfigError(f"simplex: sigma must be in (0,1), got {self.sigma}")
        if self.initial_step == 0:
            raise ConfigError("simplex: initial_step must be nonzero")
        if self.max_iterations < 1:
            raise ConfigError("simplex: max_iterations must be >= 1")
        if self.objective_tolerance <= 0 or self.simplex_tolerance <= 0:
            raise ConfigError("simplex: tolerances must be positive")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "rho": self.rho,
            "sigma": self.sigma,
            "initial_step": self.initial_step,
            "max_iterations": self.max_iterations,
            "objective_tolerance": self.objective_tolerance,
            "simplex_tolerance": self.simplex_tolerance,
        }


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fval: float
    iterations: int
    converged: bool


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    x0: Sequence[float],
    settings: SimplexSettings = SimplexSettings(),
) -> SimplexResult:
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.ndim != 1 or x0.size == 0:
        raise ConfigError("nelder_mead needs a 1-D nonempty starting point")
    dim = x0.size
    vertices = [x0.copy()]
    for axis in range(dim):
        v = x0.copy()
        v[axis] += settings.initial_step
        vertices.append(v)
    points = np.asarray(vertices)
    fvals = np.asarray([float(objective(p)) for p in points])

    iterations = 0
    converged = False
    while iterations < settings.max_iterations:
        order = np.argsort(fvals, kind="stable")
        points = points[order]
        fvals = fvals[order]
        spread = fvals[-1] - fvals[0]
        diameter = float(
            np.max(np.linalg.norm(points[1:] - points[0], axis=1))
        )
        if spread < settings.objective_tolerance and diameter < settings.simplex_tolerance:
            converged = True
            break
        iterations += 1
        centroid = points[:-1].mean(axis=0)
        worst = points[-1]
        reflected = centroid + settings.alpha * (centroid - worst)
        f_reflected = float(objective(reflected))
        if fvals[0] <= f_reflected < fvals[-2]:
            points[-1] = reflected
            fvals[-1] = f_reflected
            continue
        if f_reflected < fvals[0]:
            expanded = centroid + settings.gamma * (reflected - centroid)
            f_expanded = float(objective(expanded))
            if f_expanded < f_reflected:
                points[-1] = expanded
                fvals[-1] = f_expanded
            else:
                points[-1] = reflected
                fvals[-1] = f_reflected
            continue
        # f_reflected >= second-worst: contract
        if f_reflected < fvals[-1]:
            contracted = centroid + settings.rho * (reflected - centroid)
            f_contracted = float(objective(contracted))
            if f_contracted <= f_reflected:
                points[-1] = contracted
                fvals[-1] = f_contracted
                continue
        else:
            contracted = centroid + settings.rho * (worst - centroid)
            f_contracted = float(objective(contracted))
            if f_contracted < fvals[-1]:
                points[-1] = contracted
                fvals[-1] = f_contracted
                continue
        # shrink toward the best vertex
        for i in range(1, points.shape[0]):
            points[i] = points[0] + settings.sigma * (points[i] - points[0])
            fvals[i] = float(objective(points[i]))

    order = np.argsort(fvals, kind="stable")
    points = points[order]
    fvals = fvals[order]
    return SimplexResult(
        x=points[0].copy(),
        fval=float(fvals[0]),
        iterations=iterations,
        converged=converged,
    )
