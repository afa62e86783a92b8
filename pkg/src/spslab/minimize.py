"""Projected gradient descent with Armijo line search, radial and 3D.

The descent direction is minus the residual (the energy gradient in the
lumped-L^2 metric), with a Barzilai-Borwein step after the first
iteration. Accepted steps satisfy the Armijo sufficient-decrease
condition, so the energy decreases monotonically. Dirichlet and ball
masks are re-applied after every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .energy import (
    EnergyBreakdown,
    Params,
    e_norm,
    energy_gradient,
    eval_I,
    lumped_weights_radial,
)
from .grid import BoxGrid, Field3D, RadialField, RadialGrid

Field = Union[RadialField, Field3D]


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 20000
    grad_tol: float = 1e-6
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    init_step: float = 1.0

    def __post_init__(self):
        if not (0 < self.armijo_c < 1):
            raise ValueError("armijo_c must be in (0,1)")
        if not (0 < self.backtrack < 1):
            raise ValueError("backtrack must be in (0,1)")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


@dataclass(frozen=True)
class MinimizerResult:
    field: Field
    breakdown: EnergyBreakdown
    residual_norm: float
    iters: int
    asymmetry: float
    converged: bool
    message: str = ""


DEFAULT_3D = SolverConfig(max_iters=3000)


def _weights(u: Field) -> np.ndarray | float:
    if isinstance(u, RadialField):
        return lumped_weights_radial(u.grid)
    return u.grid.h ** 3


def _project(u: Field, values: np.ndarray) -> Field:
    if isinstance(u, RadialField):
        if u.dirichlet:
            values = values.copy()
            values[-1] = 0.0
        return RadialField(u.grid, values, dirichlet=u.dirichlet)
    if u.mask_radius is not None:
        values = values.copy()
        values[u.grid.radius() > u.mask_radius] = 0.0
    return Field3D(u.grid, values, mask_radius=u.mask_radius)


def _constrained_gradient(u: Field, params: Params) -> np.ndarray:
    g = energy_gradient(u, params)
    if isinstance(u, RadialField):
        if u.dirichlet:
            g[-1] = 0.0
    elif u.mask_radius is not None:
        g[u.grid.radius() > u.mask_radius] = 0.0
    return g


def _descend(params: Params, init: Field, cfg: SolverConfig) -> MinimizerResult:
    u = _project(init, np.array(init.values))
    W = _weights(u)

    def inner(a: np.ndarray, b: np.ndarray) -> float:
        return float(np.sum(W * a * b))
    energy = eval_I(u, params)
    E = energy.total
    grad = _constrained_gradient(u, params)
    res = grad / W
    res_norm2 = float(np.sum(grad * res))  # = ||res||_W^2
    step = cfg.init_step
    prev_vals: Optional[np.ndarray] = None
    prev_res: Optional[np.ndarray] = None
    message = "iteration cap reached"
    converged = False

    it = 0
    for it in range(cfg.max_iters):
        res_norm = np.sqrt(max(res_norm2, 0.0))
        if res_norm <= cfg.grad_tol * max(1.0, e_norm(u)):
            converged = True
            message = "residual below tolerance"
            break

        # Barzilai-Borwein step from the previous accepted pair
        if prev_vals is not None:
            s = u.values - prev_vals
            y = res - prev_res
            sy = inner(s, y)
            step = inner(s, s) / sy if sy > 0 else cfg.init_step

        accepted = False
        alpha = step
        for _ in range(60):
            trial = _project(u, np.asarray(u.values) - alpha * res)
            trial_energy = eval_I(trial, params)
            if trial_energy.total <= E - cfg.armijo_c * alpha * res_norm2:
                accepted = True
                break
            alpha *= cfg.backtrack
        if not accepted:
            message = "line search failed to decrease the energy"
            break

        prev_vals, prev_res = np.asarray(u.values), res
        u, energy, E = trial, trial_energy, trial_energy.total
        grad = _constrained_gradient(u, params)
        res = grad / W
        res_norm2 = float(np.sum(grad * res))
        step = alpha
    else:
        it = cfg.max_iters

    res_norm = float(np.sqrt(max(res_norm2, 0.0)))
    asym = 0.0
    if isinstance(u, Field3D) and np.any(u.values != 0.0):
        asym = asymmetry(u)
    return MinimizerResult(
        field=u,
        breakdown=energy,
        residual_norm=res_norm,
        iters=it,
        asymmetry=asym,
        converged=converged,
        message=message,
    )


def minimize_radial(params: Params, init: RadialField, cfg: SolverConfig = SolverConfig()) -> MinimizerResult:
    if init.values[-1] != 0.0:
        raise ValueError("radial initial field must satisfy the Dirichlet condition at r_max")
    if not init.dirichlet:
        init = RadialField(init.grid, init.values, dirichlet=True)
    return _descend(params, init, cfg)


def minimize_3d(params: Params, init: Field3D, cfg: SolverConfig = DEFAULT_3D) -> MinimizerResult:
    if init.mask_radius is None:
        raise ValueError("3D minimization requires a ball mask")
    return _descend(params, init, cfg)


# ------------------------------------------------------- symmetry diagnostics


def _shell_classes(grid: BoxGrid) -> tuple[np.ndarray, np.ndarray]:
    """Exact squared-radius classes: nodes with identical |x| share a class.

    Coordinates are (2k - (n-1)) * h/2, so 4 |x|^2 / h^2 is an exact integer.
    """
    n = grid.n
    m = 2 * np.arange(n) - (n - 1)
    m2 = m.astype(np.int64) ** 2
    key = m2[:, None, None] + m2[None, :, None] + m2[None, None, :]
    uniq, inverse = np.unique(key.ravel(), return_inverse=True)
    return uniq, inverse


def spherical_symmetrize(u: Field3D) -> np.ndarray:
    """Replace every node value by the mean over its exact-|x| shell."""
    uniq, inverse = _shell_classes(u.grid)
    flat = u.values.ravel()
    sums = np.bincount(inverse, weights=flat, minlength=len(uniq))
    counts = np.bincount(inverse, minlength=len(uniq))
    return (sums / counts)[inverse].reshape(u.values.shape)


def asymmetry(u: Field3D) -> float:
    """Relative L^2 distance of u from its spherical symmetrization, in [0,1]."""
    norm = float(np.sqrt(np.sum(u.values**2)))
    if norm == 0.0:
        raise ValueError("asymmetry is undefined for the zero field")
    dev = u.values - spherical_symmetrize(u)
    return float(np.sqrt(np.sum(dev**2)) / norm)


def spherical_average(u: Field3D) -> RadialField:
    """Average over shells of width h; empty shells interpolated from neighbors."""
    h = u.grid.h
    r = u.grid.radius().ravel()
    idx = np.rint(r / h).astype(np.int64)
    m = int(np.floor(u.grid.L / h)) + 1
    keep = idx < m
    sums = np.bincount(idx[keep], weights=u.values.ravel()[keep], minlength=m)
    counts = np.bincount(idx[keep], minlength=m)
    prof = np.zeros(m)
    filled = counts > 0
    prof[filled] = sums[filled] / counts[filled]
    if not np.all(filled):
        nodes = h * np.arange(m)
        prof[~filled] = np.interp(nodes[~filled], nodes[filled], prof[filled])
    grid = RadialGrid(m, h * (m - 1))
    return RadialField(grid, prof)


# ---------------------------------------------------------- initial fields


def gaussian_init(grid: RadialGrid, amplitude: float = 1.0, width: float = 1.0) -> RadialField:
    r = grid.nodes
    v = amplitude * np.exp(-(r / width) ** 2 / 2.0)
    v[-1] = 0.0
    return RadialField(grid, v, dirichlet=True)


def gaussian_init_3d(
    grid: BoxGrid,
    mask_radius: float,
    center: tuple[float, float, float] = (0.0, 0.0, 0.0),
    amplitude: float = 1.0,
    width: float = 1.0,
) -> Field3D:
    ax = grid.axis
    X, Y, Z = np.meshgrid(ax, ax, ax, indexing="ij", sparse=True)
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2 + (Z - center[2]) ** 2
    v = amplitude * np.exp(-r2 / (2.0 * width**2))
    return Field3D(grid, v, mask_radius=mask_radius)


def random_smooth_init(
    grid: RadialGrid, rng: np.random.Generator, n_modes: int = 4, amplitude: float = 1.0
) -> RadialField:
    """Random mixture of Gaussian bumps, Dirichlet at r_max."""
    r = grid.nodes
    v = np.zeros_like(r)
    for _ in range(n_modes):
        c = rng.uniform(0.0, 0.6 * grid.r_max)
        w = rng.uniform(0.3, 0.2 * grid.r_max)
        a = amplitude * rng.uniform(-1.0, 1.0)
        v += a * np.exp(-((r - c) ** 2) / (2.0 * w**2))
    v *= np.clip((grid.r_max - r) / (0.2 * grid.r_max), 0.0, 1.0)
    v[-1] = 0.0
    return RadialField(grid, v, dirichlet=True)


def lift_radial_to_3d(
    u: RadialField,
    grid: BoxGrid,
    mask_radius: float,
    centers: list[tuple[float, float, float]] | None = None,
) -> Field3D:
    """Sum of translated copies of a radial profile sampled on the box grid."""
    if centers is None:
        centers = [(0.0, 0.0, 0.0)]
    ax = grid.axis
    X, Y, Z = np.meshgrid(ax, ax, ax, indexing="ij", sparse=True)
    vals = np.zeros((grid.n, grid.n, grid.n))
    for c in centers:
        r = np.sqrt((X - c[0]) ** 2 + (Y - c[1]) ** 2 + (Z - c[2]) ** 2)
        vals += np.interp(r, u.grid.nodes, u.values, right=0.0)
    return Field3D(grid, vals, mask_radius=mask_radius)
