"""Grids, field containers, sampling and quadrature.

Two discretizations are supported: a uniform radial grid on [0, r_max]
(composite trapezoid quadrature, node r=0 included) and a uniform
Cartesian box grid on [-L, L]^3 with an optional spherical Dirichlet
mask. All containers are immutable after construction; every operation
is a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

MIN_NODES = 16


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class RadialGrid:
    """Uniform nodes r_0=0 < r_1 < ... < r_{n-1}=r_max."""

    n: int
    r_max: float
    nodes: NDArray[np.float64] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.n < MIN_NODES:
            raise ValueError(f"n too small: {self.n} < {MIN_NODES}")
        if not (self.r_max > 0):
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        nodes = np.linspace(0.0, self.r_max, self.n)
        object.__setattr__(self, "nodes", _freeze(nodes))

    @property
    def h(self) -> float:
        return self.r_max / (self.n - 1)

    @property
    def trapezoid_weights(self) -> NDArray[np.float64]:
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        w.flags.writeable = False
        return w


@dataclass(frozen=True)
class RadialField:
    """Samples of a radial function on a RadialGrid.

    ``dirichlet`` marks fields constrained to vanish at r_max.
    """

    grid: RadialGrid
    values: NDArray[np.float64]
    dirichlet: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n,):
            raise ValueError(
                f"values length {v.shape} does not match grid size {self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise ValueError(f"non-finite value at node {bad} (r={self.grid.nodes[bad]:g})")
        if self.dirichlet and v[-1] != 0.0:
            raise ValueError("Dirichlet field must vanish at r_max")
        object.__setattr__(self, "values", _freeze(v))

    def with_values(self, values: np.ndarray) -> "RadialField":
        return RadialField(self.grid, values, dirichlet=self.dirichlet)


@dataclass(frozen=True)
class BoxGrid:
    """Uniform Cartesian grid on the box [-L, L]^3, n nodes per axis."""

    n: int
    L: float

    def __post_init__(self):
        if self.n < MIN_NODES:
            raise ValueError(f"n too small: {self.n} < {MIN_NODES}")
        if not (self.L > 0):
            raise ValueError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def axis(self) -> NDArray[np.float64]:
        ax = np.linspace(-self.L, self.L, self.n)
        ax.flags.writeable = False
        return ax

    def radius(self) -> NDArray[np.float64]:
        """|x| at every node, shape (n, n, n)."""
        ax = self.axis
        return np.sqrt(
            ax[:, None, None] ** 2 + ax[None, :, None] ** 2 + ax[None, None, :] ** 2
        )


@dataclass(frozen=True)
class Field3D:
    """Samples on a BoxGrid; optional ball mask of radius ``mask_radius``."""

    grid: BoxGrid
    values: NDArray[np.float64]
    mask_radius: Optional[float] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        n = self.grid.n
        if v.shape != (n, n, n):
            raise ValueError(f"values shape {v.shape} does not match grid ({n},{n},{n})")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite values in Field3D")
        if self.mask_radius is not None:
            outside = self.grid.radius() > self.mask_radius
            if np.any(v[outside] != 0.0):
                v = v.copy()
                v[outside] = 0.0
        object.__setattr__(self, "values", _freeze(v))

    def with_values(self, values: np.ndarray) -> "Field3D":
        return Field3D(self.grid, values, mask_radius=self.mask_radius)


def make_radial_grid(n: int, r_max: float) -> RadialGrid:
    """Uniform radial grid with n nodes on [0, r_max]."""
    return RadialGrid(n=n, r_max=r_max)


def sample_radial(
    profile: Callable[[np.ndarray], np.ndarray],
    grid: RadialGrid,
    dirichlet: bool = False,
) -> RadialField:
    """Evaluate ``profile`` at every node. Accepts vectorized or scalar callables."""
    r = grid.nodes
    try:
        vals = np.asarray(profile(r), dtype=np.float64)
        if vals.shape != r.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(profile(ri)) for ri in r])
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(f"profile is not finite at node {bad} (r={r[bad]:g})")
    return RadialField(grid, vals, dirichlet=dirichlet)


def integrate_radial(f: RadialField, k: int) -> float:
    """Composite trapezoid of  integral_0^{r_max} f(r) r^k dr  for k in {0,1,2,3}."""
    if k not in (0, 1, 2, 3):
        raise ValueError(f"weight exponent k must be in {{0,1,2,3}}, got {k}")
    r = f.grid.nodes
    return float(np.trapezoid(f.values * r**k, dx=f.grid.h))


def save_radial_csv(f: RadialField, path: str | Path) -> None:
    """Two-column CSV (r, value)."""
    data = np.column_stack([f.grid.nodes, f.values])
    np.savetxt(path, data, delimiter=",", header="r,value", comments="")


def load_radial_csv(path: str | Path, dirichlet: bool = False) -> RadialField:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    r, v = data[:, 0], data[:, 1]
    grid = make_radial_grid(len(r), float(r[-1]))
    if not np.allclose(grid.nodes, r, atol=1e-12 * max(1.0, r[-1])):
        raise ValueError("CSV nodes are not a uniform grid starting at 0")
    return RadialField(grid, v, dirichlet=dirichlet)


def save_field3d(f: Field3D, path: str | Path) -> None:
    """Flat binary of float64 in row-major order plus a JSON header ``<path>.json``."""
    path = Path(path)
    f.values.astype("<f8").tofile(path)
    header = {"n": f.grid.n, "L": f.grid.L, "mask_radius": f.mask_radius}
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(header))


def load_field3d(path: str | Path) -> Field3D:
    path = Path(path)
    header = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    n = int(header["n"])
    vals = np.fromfile(path, dtype="<f8").reshape(n, n, n)
    return Field3D(BoxGrid(n, float(header["L"])), vals, mask_radius=header["mask_radius"])
