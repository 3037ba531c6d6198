"""Brute-force maximization of smooth functions over single-qubit unitaries.

A unitary is parametrized, up to an irrelevant global phase, by three angles

    U(a, b, g) = [[ e^{ia} cos b, e^{ig} sin b],
                  [-e^{-ig} sin b, e^{-ia} cos b]]

with ``a, g`` in [0, 2pi) and ``b`` in [0, pi/2]; the phases absorb the
sign of ``sin b`` so the half range of ``b`` covers all of SU(2). A coarse
grid is scanned in one vectorized pass and the best few cells are refined
with Nelder-Mead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class OptimizerOptions:
    grid_points: int = 24
    starts: int = 5
    max_iter: int = 200
    xatol: float = 1e-10
    fatol: float = 1e-14


def su2_batch(angles) -> np.ndarray:
    """Stack of unitaries for an ``(n, 3)`` array of ``(a, b, g)``."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    a, b, g = angles[:, 0], angles[:, 1], angles[:, 2]
    cb, sb = np.cos(b), np.sin(b)
    u = np.empty((angles.shape[0], 2, 2), dtype=complex)
    u[:, 0, 0] = np.exp(1j * a) * cb
    u[:, 0, 1] = np.exp(1j * g) * sb
    u[:, 1, 0] = -np.exp(-1j * g) * sb
    u[:, 1, 1] = np.exp(-1j * a) * cb
    return u


def su2(a: float, b: float, g: float) -> np.ndarray:
    return su2_batch([[a, b, g]])[0]


def angle_grid(n: int) -> np.ndarray:
    phases = 2 * np.pi * np.arange(n) / n
    betas = np.linspace(0.0, np.pi / 2, n)
    a, b, g = np.meshgrid(phases, betas, phases, indexing="ij")
    return np.column_stack([a.ravel(), b.ravel(), g.ravel()])


@dataclass(frozen=True)
class UnitaryMaximum:
    value: float
    unitary: np.ndarray
    angles: np.ndarray


def maximize_over_unitaries(objective: Callable[[np.ndarray], np.ndarray],
                            opts: OptimizerOptions = OptimizerOptions()) -> UnitaryMaximum:
    """Maximize ``objective`` over SU(2).

    ``objective`` maps an ``(n, 2, 2)`` stack of unitaries to ``n`` real
    values. Starts are enumerated in grid order, so the result is
    deterministic.
    """
    grid = angle_grid(opts.grid_points)
    values = np.asarray(objective(su2_batch(grid)), dtype=float)
    order = np.argsort(-values, kind="stable")[: opts.starts]

    best_val = float(values[order[0]])
    best_x = grid[order[0]]
    n = opts.grid_points
    step = 0.5 * np.array([2 * np.pi / n, (np.pi / 2) / max(n - 1, 1), 2 * np.pi / n])

    def neg(x):
        return -float(objective(su2_batch(x))[0])

    for idx in order:
        x0 = grid[idx]
        simplex = np.vstack([x0, x0 + np.diag(step)])
        res = minimize(
            neg, x0, method="Nelder-Mead",
            options={"maxiter": opts.max_iter, "xatol": opts.xatol, "fatol": opts.fatol,
                     "initial_simplex": simplex},
        )
        if -res.fun > best_val:
            best_val = -float(res.fun)
            best_x = np.asarray(res.x)
    return UnitaryMaximum(best_val, su2(*best_x), np.asarray(best_x))
