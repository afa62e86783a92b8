"""Energy functionals, first variations, norms and scalings.

The functional evaluated here is

    I(u) = 1/2 int |grad u|^2 + omega/2 int u^2
           + lambda/4 D(u^2, u^2) - 1/p int |u|^p,

with D the bare Coulomb bilinear form (see coulomb module). The static
functional J is I with omega=0, lambda=1; the rescaled J_eps is I with
omega=eps^2, lambda=1.

Discretization notes (radial): the Dirichlet integral uses staggered
(midpoint-centered) differences, int |grad u|^2 = 4 pi sum_i h d_i^2
r_{i+1/2}^2 with d_i = (u_{i+1}-u_i)/h; all other integrals use the
composite trapezoid. ``energy_gradient`` returns the exact partial
derivatives of this discrete energy with respect to the nodal values,
and ``residual`` is that gradient divided by the lumped L^2 node
weights, so finite differences of the energy reproduce the residual to
roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .coulomb import (
    FOUR_PI,
    coulomb_energy_3d,
    coulomb_energy_radial,
    potential_3d,
    radial_potential,
)
from .grid import Field3D, RadialField, RadialGrid, integrate_radial

Field = Union[RadialField, Field3D]


@dataclass(frozen=True)
class Params:
    """Exponent p in (2,6], coupling lambda >= 0, mass coefficient omega >= 0.

    omega encodes either the original mass term (omega=1), the rescaled
    eps^2, or the static case omega=0. R is the ball radius (None = R^3).
    """

    p: float
    lam: float = 1.0
    omega: float = 0.0
    R: Optional[float] = None

    def __post_init__(self):
        if not (2.0 < self.p <= 6.0):
            raise ValueError(f"p must lie in (2, 6], got {self.p}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.omega < 0:
            raise ValueError("omega must be >= 0")


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    mass: float
    coulomb: float
    power: float

    @property
    def total(self) -> float:
        return self.kinetic + self.mass + self.coulomb + self.power

    def csv_row(self, params: Params) -> str:
        R = params.R if params.R is not None else float("inf")
        return (
            f"{self.kinetic!r},{self.mass!r},{self.coulomb!r},{self.power!r},"
            f"{self.total!r},{params.p!r},{params.lam!r},{params.omega!r},{R!r}"
        )

    CSV_HEADER = "kinetic,mass,coulomb,power,total,p,lambda,omega,R"


# ---------------------------------------------------------------- radial


def _midpoint_r2(grid: RadialGrid) -> np.ndarray:
    r = grid.nodes
    return (0.5 * (r[:-1] + r[1:])) ** 2


def dirichlet_integral_radial(u: RadialField) -> float:
    """int |grad u|^2 dx = 4 pi int u'(r)^2 r^2 dr, staggered differences."""
    h = u.grid.h
    d = np.diff(u.values) / h
    return float(FOUR_PI * h * np.sum(d * d * _midpoint_r2(u.grid)))


def lumped_weights_radial(grid: RadialGrid) -> np.ndarray:
    """Node weights of the discrete L^2 pairing <f,g> = sum W_i f_i g_i.

    Trapezoid weights times 4 pi r^2; the r=0 node gets the volume of its
    half cell so that residuals stay finite there.
    """
    w = grid.trapezoid_weights * FOUR_PI * grid.nodes**2
    w = np.array(w)
    w[0] = FOUR_PI / 3.0 * (grid.h / 2.0) ** 3
    return w


def dirichlet_integral_3d(u: Field3D) -> float:
    """int |grad u|^2 dx by forward differences along each axis."""
    h = u.grid.h
    v = u.values
    acc = 0.0
    for ax in range(3):
        d = np.diff(v, axis=ax) / h
        acc += float(np.sum(d * d))
    return acc * h**3


def eval_I(u: Field, params: Params) -> EnergyBreakdown:
    """The four terms of the energy at the field u."""
    p, lam, om = params.p, params.lam, params.omega
    if isinstance(u, RadialField):
        grad2 = dirichlet_integral_radial(u)
        mass2 = FOUR_PI * integrate_radial(u.with_values(u.values**2), 2)
        powr = FOUR_PI * integrate_radial(u.with_values(np.abs(u.values) ** p), 2)
        coul = coulomb_energy_radial(u).energy
    else:
        h3 = u.grid.h ** 3
        grad2 = dirichlet_integral_3d(u)
        mass2 = float(np.sum(u.values**2)) * h3
        powr = float(np.sum(np.abs(u.values) ** p)) * h3
        coul = coulomb_energy_3d(u).energy
    return EnergyBreakdown(
        kinetic=0.5 * grad2,
        mass=0.5 * om * mass2,
        coulomb=0.25 * lam * coul,
        power=-powr / p,
    )


def eval_J(v: RadialField, p: float) -> EnergyBreakdown:
    """Static functional: I with omega=0, lambda=1."""
    return eval_I(v, Params(p=p, lam=1.0, omega=0.0))


def energy_gradient(u: Field, params: Params) -> np.ndarray:
    """Exact partial derivatives of the discrete energy wrt nodal values."""
    p, lam, om = params.p, params.lam, params.omega
    v = u.values
    pw = np.abs(v) ** (p - 2.0) * v
    if isinstance(u, RadialField):
        h = u.grid.h
        flux = FOUR_PI * _midpoint_r2(u.grid) * np.diff(v) / h
        grad = np.zeros_like(v)
        grad[:-1] -= flux
        grad[1:] += flux
        W = u.grid.trapezoid_weights * FOUR_PI * u.grid.nodes**2
        phi = radial_potential(u).values
        grad += W * (om * v + lam * phi * v - pw)
        return grad
    h = u.grid.h
    lap = np.zeros_like(v)
    for ax in range(3):
        d = np.diff(v, axis=ax)
        sl = [slice(None)] * 3
        sl[ax] = slice(0, -1)
        lap[tuple(sl)] -= d
        sl[ax] = slice(1, None)
        lap[tuple(sl)] += d
    phi = potential_3d(u).values
    return h * lap + h**3 * (om * v + lam * phi * v - pw)


def residual(u: Field, params: Params) -> Field:
    """Pointwise first variation -Lap u + omega u + lambda phi_u u - |u|^{p-2} u.

    Computed as the exact discrete energy gradient divided by the lumped
    node weights; Dirichlet/masked nodes are zeroed.
    """
    grad = energy_gradient(u, params)
    if isinstance(u, RadialField):
        res = grad / lumped_weights_radial(u.grid)
        if u.dirichlet:
            res[-1] = 0.0
        return RadialField(u.grid, res)
    res = grad / u.grid.h ** 3
    if u.mask_radius is not None:
        res[u.grid.radius() > u.mask_radius] = 0.0
    return Field3D(u.grid, res, mask_radius=u.mask_radius)


def field_l2_norm(u: Field) -> float:
    """L^2 norm with the same lumped weights used by ``residual``."""
    if isinstance(u, RadialField):
        W = lumped_weights_radial(u.grid)
        return float(np.sqrt(np.sum(W * u.values**2)))
    return float(np.sqrt(np.sum(u.values**2) * u.grid.h ** 3))


def coulomb_of(u: Field) -> float:
    if isinstance(u, RadialField):
        return coulomb_energy_radial(u).energy
    return coulomb_energy_3d(u).energy


def m_functional(u: Field) -> float:
    """M(u) = int |grad u|^2 + D(u^2, u^2)."""
    grad2 = (
        dirichlet_integral_radial(u)
        if isinstance(u, RadialField)
        else dirichlet_integral_3d(u)
    )
    return grad2 + coulomb_of(u)


def e_norm(u: Field) -> float:
    """||u||_E = (int |grad u|^2 + D(u^2,u^2)^{1/2})^{1/2}."""
    grad2 = (
        dirichlet_integral_radial(u)
        if isinstance(u, RadialField)
        else dirichlet_integral_3d(u)
    )
    return float(np.sqrt(grad2 + np.sqrt(coulomb_of(u))))


def dilate(u: RadialField, lam: float) -> RadialField:
    """v(x) = lam^2 u(lam x), realized exactly by rescaling grid and values.

    Node i of the new grid sits at r_i / lam, where v equals lam^2 u_i.
    """
    if not (lam > 0):
        raise ValueError("dilation parameter must be positive")
    grid = RadialGrid(u.grid.n, u.grid.r_max / lam)
    return RadialField(grid, lam**2 * u.values, dirichlet=u.dirichlet)


def scale_to_limit(u: RadialField, lam: float, p: float) -> tuple[RadialField, float]:
    """Blow-up change of variables v(x) = eps^{2/(p-2)} u(eps x).

    eps = lam^{(p-2)/(4(3-p))}; the returned field lives on the grid
    rescaled by 1/eps and satisfies J_eps(v) = eps^{(6-p)/(p-2)} I_lam(u)
    exactly at the discrete level.
    """
    if not (2.0 < p < 3.0):
        raise ValueError(f"change of variables requires p in (2,3), got {p}")
    if not (lam > 0):
        raise ValueError("lambda must be positive")
    eps = lam ** ((p - 2.0) / (4.0 * (3.0 - p)))
    grid = RadialGrid(u.grid.n, u.grid.r_max / eps)
    v = RadialField(grid, eps ** (2.0 / (p - 2.0)) * u.values, dirichlet=u.dirichlet)
    return v, float(eps)


def params_after_rescale(params: Params) -> tuple[Params, float]:
    """Parameters of the rescaled functional J_eps matching I_lam."""
    eps = params.lam ** ((params.p - 2.0) / (4.0 * (3.0 - params.p)))
    return replace(params, lam=1.0, omega=params.omega * eps**2), float(eps)
