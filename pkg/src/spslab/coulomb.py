"""Coulomb potentials and energies.

Normalization used everywhere in this package: the potential of the
density u^2 is the bare convolution

    phi_u = u^2 * (1/|x|)        (no 1/4pi factor),

so for radial fields

    phi_u(r) = (4 pi / r) * integral_0^inf u^2(s) s min(r, s) ds,

and the Coulomb energy is the bare double integral

    D(u^2, u^2) = iint u^2(x) u^2(y) / |x-y| dx dy
                = 16 pi^2 iint u^2(r) u^2(s) r s min(r, s) dr ds.

Conversion to the 1/4pi-normalized potential psi = phi/(4 pi):
int |grad psi|^2 = D(u^2, u^2) / (4 pi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, dblquad

from .grid import Field3D, RadialField

FOUR_PI = 4.0 * np.pi


def _cell_average_inverse_radius() -> float:
    """Mean of 1/|x| over the unit cell [-1/2,1/2]^3, times the cell side (=1).

    Reduced by a Duffy-type split to the smooth integral
    3 * int_0^1 int_0^1 du dv / sqrt(1 + u^2 + v^2).
    """
    val, _ = dblquad(
        lambda v, u: 1.0 / np.sqrt(1.0 + u * u + v * v), 0.0, 1.0, 0.0, 1.0,
        epsabs=1e-12, epsrel=1e-12,
    )
    return 3.0 * val


#: int_{[-1/2,1/2]^3} dx/|x|, used as the regularized kernel value at the origin.
CELL_AVG_INV_R = _cell_average_inverse_radius()


@dataclass(frozen=True)
class CoulombValue:
    """Value of the Coulomb double integral; nonnegative."""

    energy: float

    def __post_init__(self):
        if not np.isfinite(self.energy) or self.energy < -1e-12:
            raise ValueError(f"Coulomb energy must be finite and >= 0, got {self.energy}")


def _charge_moments(u: RadialField) -> tuple[np.ndarray, np.ndarray]:
    """Prefix integral P(r)=int_0^r u^2 s^2 ds and suffix Q(r)=int_r^rmax u^2 s ds."""
    r = u.grid.nodes
    q = u.values**2
    P = cumulative_trapezoid(q * r * r, r, initial=0.0)
    Qc = cumulative_trapezoid(q * r, r, initial=0.0)
    Q = Qc[-1] - Qc
    return P, Q


def radial_potential(u: RadialField) -> RadialField:
    """phi_u(r) = (4 pi / r) int u^2(s) s min(r,s) ds via prefix/suffix sums, O(n).

    phi(0) is the limit 4 pi int u^2(s) s ds.
    """
    r = u.grid.nodes
    P, Q = _charge_moments(u)
    phi = np.empty_like(r)
    phi[0] = FOUR_PI * Q[0]
    phi[1:] = FOUR_PI * (P[1:] / r[1:] + Q[1:])
    return RadialField(u.grid, phi)


def coulomb_energy_radial(u: RadialField) -> CoulombValue:
    """D(u^2, u^2) for a radial field, O(n) via the prefix-sum potential."""
    r = u.grid.nodes
    phi = radial_potential(u).values
    e = FOUR_PI * np.trapezoid(u.values**2 * phi * r * r, dx=u.grid.h)
    return CoulombValue(max(e, 0.0))


def coulomb_energy_radial_direct(u: RadialField) -> float:
    """O(n^2) double-loop oracle: 16 pi^2 iint u^2 u^2 r s min(r,s) by 2D trapezoid."""
    r = u.grid.nodes
    w = u.grid.trapezoid_weights
    g = u.values**2 * r * w
    m = np.minimum.outer(r, r)
    return float(16.0 * np.pi**2 * g @ m @ g)


def coulomb_bilinear_radial(f: RadialField, g: RadialField) -> float:
    """D(f, g) = 16 pi^2 iint f(r) g(s) r s min(r,s) dr ds for nonnegative densities."""
    if np.any(f.values < 0) or np.any(g.values < 0):
        raise ValueError("densities must be nonnegative")
    if f.grid != g.grid:
        raise ValueError("densities must share one grid")
    r = f.grid.nodes
    w = f.grid.trapezoid_weights
    # inner integral int g(s) s min(r,s) ds by prefix/suffix sums
    P = cumulative_trapezoid(g.values * r * r, r, initial=0.0)
    Qc = cumulative_trapezoid(g.values * r, r, initial=0.0)
    Q = Qc[-1] - Qc
    inner = P + r * Q
    return float(16.0 * np.pi**2 * np.sum(w * f.values * r * inner))


def _padded_kernel_fft(n: int, h: float) -> np.ndarray:
    """rfftn of the sampled free-space kernel 1/|x| on the zero-padded 2n grid."""
    idx = np.fft.fftfreq(2 * n, d=1.0 / (2 * n))  # wrapped integer offsets
    d2 = idx[:, None, None] ** 2 + idx[None, :, None] ** 2 + idx[None, None, :] ** 2
    with np.errstate(divide="ignore"):
        G = 1.0 / (h * np.sqrt(d2))
    G[0, 0, 0] = CELL_AVG_INV_R / h
    return np.fft.rfftn(G)


def potential_3d(u: Field3D) -> Field3D:
    """phi = u^2 * 1/|x| by zero-padded fast cyclic convolution.

    The kernel is sampled pointwise except at the origin, where the
    cell-averaged value CELL_AVG_INV_R / h is used.
    """
    n = u.grid.n
    if n < 16:
        raise ValueError("grid too small to zero-pad")
    h = u.grid.h
    rho = u.values**2
    Ghat = _padded_kernel_fft(n, h)
    axes = (0, 1, 2)
    rho_hat = np.fft.rfftn(rho, s=(2 * n, 2 * n, 2 * n), axes=axes)
    conv = np.fft.irfftn(rho_hat * Ghat, s=(2 * n, 2 * n, 2 * n), axes=axes)[:n, :n, :n]
    return Field3D(u.grid, conv * h**3)


def coulomb_energy_3d(u: Field3D) -> CoulombValue:
    """D(u^2, u^2) = int u^2 phi_u dx on the box grid (h^3 node sum)."""
    phi = potential_3d(u).values
    e = float(np.sum(u.values**2 * phi) * u.grid.h**3)
    return CoulombValue(max(e, 0.0))
