"""Explicit witness families with closed-form energy accounting.

Four families live here: ring-shaped tent profiles concentrating at
large radius, sums of N translated copies of a compact bump spaced N^2
apart, dilations of those sums, and a power-log profile probing the
weighted Coulomb lower bound. All integrals come in closed form
(piecewise polynomial or elementary antiderivatives); sampled fields
and quadrature values are kept alongside as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .coulomb import FOUR_PI, coulomb_energy_radial
from .energy import EnergyBreakdown, Params, dirichlet_integral_radial
from .grid import RadialField, RadialGrid, integrate_radial, make_radial_grid

SIXTEEN_PI2 = 16.0 * np.pi**2

#: Critical exponent of the radial embedding probed by the tent family.
TENT_CRITICAL_P = 18.0 / 7.0


# ------------------------------------------------------------------- tents


@dataclass(frozen=True)
class TentReport:
    """Raw integrals of one tent profile, closed form and quadrature.

    The tent of parameter eps sits at radius R = eps^{-8/7} with
    half-width S = eps^{-2/7} and height eps. Raw values carry no 4pi
    factors: kin_raw = int u'(r)^2 r^2 dr, coul_raw = iint u^2 u^2
    r s min(r,s) dr ds, lp_raw(p) = int u(r)^p r^2 dr.
    """

    eps: float
    R: float
    S: float
    kin_raw: float
    coul_raw: float
    kin_raw_quad: float
    coul_raw_quad: float

    def lp_raw(self, p: float) -> float:
        """Closed form: eps^p (2 S R^2/(p+1) + 4 S^3/((p+1)(p+2)(p+3)))."""
        c = (p + 1.0) * (p + 2.0) * (p + 3.0)
        return self.eps**p * (
            2.0 * self.S * self.R**2 / (p + 1.0) + 4.0 * self.S**3 / c
        )


def _tent_pieces(eps: float, R: float, S: float) -> list[tuple[float, float, Polynomial]]:
    """The density u^2 as polynomials in t = r - R on [-S, 0] and [0, S]."""
    t = Polynomial([0.0, 1.0])
    up = eps * (1.0 + t / S)  # rising edge, t in [-S, 0]
    dn = eps * (1.0 - t / S)  # falling edge, t in [0, S]
    return [(-S, 0.0, up * up), (0.0, S, dn * dn)]


def _tent_coulomb_exact(eps: float, R: float, S: float) -> float:
    """iint q(r) q(s) r s min(r,s) dr ds by exact piecewise integration.

    Written as 2 int q(s) s A(s) ds with A(s) = int_{r<s} q(r) r^2 dr;
    everything is polynomial in the shifted variable t = r - R.
    """
    t = Polynomial([0.0, 1.0])
    pieces = _tent_pieces(eps, R, S)
    total = 0.0
    acc = 0.0  # A at the left end of the current piece
    for a, b, q in pieces:
        inner = q * (R + t) ** 2
        A = inner.integ()
        # A(s) = acc + (antiderivative from a to s)
        outer = q * (R + t) * (Polynomial([acc - A(a)]) + A)
        F = outer.integ()
        total += F(b) - F(a)
        acc += A(b) - A(a)
    return 2.0 * total


def tent_profile(
    eps: float, grid: Optional[RadialGrid] = None
) -> tuple[RadialField, TentReport]:
    """Tent at radius R = eps^{-8/7}, half-width S = eps^{-2/7}, height eps.

    u(r) = eps (S - |r - R|)/S on |r - R| < S and 0 elsewhere. The
    default grid puts 256 cells across the support; an override must
    resolve the support with at least 64 nodes.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0,1), got {eps}")
    R = eps ** (-8.0 / 7.0)
    S = eps ** (-2.0 / 7.0)
    if grid is None:
        h = 2.0 * S / 512.0
        n = int(np.ceil((R + 2.0 * S) / h)) + 1
        grid = make_radial_grid(n, (n - 1) * h)
    if 2.0 * S / grid.h < 64.0:
        raise ValueError(
            f"grid spacing {grid.h:g} leaves fewer than 64 nodes across the tent "
            f"support of width {2 * S:g}; refine the grid"
        )
    if grid.r_max < R + S:
        raise ValueError("grid does not cover the tent support; enlarge r_max")
    r = grid.nodes
    vals = eps * np.clip((S - np.abs(r - R)) / S, 0.0, None)
    field = RadialField(grid, vals, dirichlet=bool(vals[-1] == 0.0))

    kin = 2.0 * eps**2 * (3.0 * R**2 + S**2) / (3.0 * S)
    coul = _tent_coulomb_exact(eps, R, S)
    report = TentReport(
        eps=eps,
        R=R,
        S=S,
        kin_raw=kin,
        coul_raw=coul,
        kin_raw_quad=dirichlet_integral_radial(field) / FOUR_PI,
        coul_raw_quad=coulomb_energy_radial(field).energy / SIXTEEN_PI2,
    )
    return field, report


def tent_lp_quad(field: RadialField, p: float) -> float:
    """Quadrature counterpart of TentReport.lp_raw."""
    return integrate_radial(field.with_values(np.abs(field.values) ** p), 2)


# ------------------------------------------------------------------- bumps


@dataclass(frozen=True)
class BumpStats:
    """Integrals of one compact radial bump, all over R^3.

    charge = int u^2, kinetic = int |grad u|^2, self_coulomb =
    D(u^2,u^2), lp_mass = int |u|^p at the recorded exponent p;
    support_radius bounds the support.
    """

    charge: float
    kinetic: float
    self_coulomb: float
    lp_mass: float
    support_radius: float
    p: float

    def __post_init__(self):
        for name in ("charge", "kinetic", "self_coulomb", "lp_mass"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not np.isfinite(self.support_radius):
            raise ValueError("support radius must be finite")


def standard_bump(
    amplitude: float = 1.0, support: float = 1.0, n: int = 8193
) -> RadialField:
    """C^1 compact bump a cos^2(pi r / (2 M)) on [0, M], zero beyond."""
    grid = make_radial_grid(n, support)
    r = grid.nodes
    vals = amplitude * np.cos(np.pi * r / (2.0 * support)) ** 2
    vals[-1] = 0.0
    return RadialField(grid, vals, dirichlet=True)


def bump_stats(u: RadialField, p: float) -> BumpStats:
    """Integrals of a compactly supported radial bump by fine quadrature."""
    nz = np.flatnonzero(u.values != 0.0)
    support = float(u.grid.nodes[nz[-1] + 1]) if len(nz) else 0.0
    return BumpStats(
        charge=FOUR_PI * integrate_radial(u.with_values(u.values**2), 2),
        kinetic=dirichlet_integral_radial(u),
        self_coulomb=coulomb_energy_radial(u).energy,
        lp_mass=FOUR_PI * integrate_radial(u.with_values(np.abs(u.values) ** p), 2),
        support_radius=min(support, u.grid.r_max),
        p=p,
    )


def rescale_bump_stats(b: BumpStats, amplitude: float) -> BumpStats:
    """Stats of amplitude * u from the stats of u (pure power scaling)."""
    a = float(amplitude)
    return BumpStats(
        charge=a**2 * b.charge,
        kinetic=a**2 * b.kinetic,
        self_coulomb=a**4 * b.self_coulomb,
        lp_mass=abs(a) ** b.p * b.lp_mass,
        support_radius=b.support_radius,
        p=b.p,
    )


def coulomb_cross_term(charge: float, N: int) -> float:
    """Sum over ordered pairs of Q^2 / (|i-j| N^2) for N bumps spaced N^2 apart.

    Exact for disjoint radial charges: each bump sees every other as a
    point charge at its center.
    """
    if N < 1:
        raise ValueError("N must be positive")
    k = np.arange(1, N)
    return float(2.0 * charge**2 / N**2 * np.sum((N - k) / k))


def bump_sum_energy(b: BumpStats, N: int, params: Params) -> EnergyBreakdown:
    """Energy of N translates of the bump placed at spacing N^2 on one axis.

    Supports are disjoint (requires N^2 > 2 support_radius), so the
    local terms scale linearly in N and the Coulomb term is the N
    self-energies plus the exact point-charge cross term.
    """
    if params.p != b.p:
        raise ValueError(f"bump stats were built at p={b.p}, params have p={params.p}")
    if N >= 2 and N * N <= 2.0 * b.support_radius:
        raise ValueError(
            f"supports overlap: need N^2 > 2 M, got N^2={N * N} and M={b.support_radius}"
        )
    cross = coulomb_cross_term(b.charge, N)
    return EnergyBreakdown(
        kinetic=0.5 * N * b.kinetic,
        mass=0.5 * params.omega * N * b.charge,
        coulomb=0.25 * params.lam * (N * b.self_coulomb + cross),
        power=-N * b.lp_mass / params.p,
    )


@dataclass(frozen=True)
class DilatedBumpStats:
    """E-norm parts and L^p mass of v_N(x) = lam_N^2 u_N(lam_N x), lam_N = N^{-1/3}."""

    N: int
    kinetic_part: float
    coulomb_part: float
    lp_mass: float


def dilated_bump_sum_stats(b: BumpStats, N: int, p: float) -> DilatedBumpStats:
    """Dilate the N-bump sum by lam_N = N^{-1/3}.

    kinetic_part = lam_N^3 N kinetic is constant in N; coulomb_part =
    lam_N^3 (N self + cross) stays bounded; lp_mass = lam_N^{2p-3} N lp
    grows like N^{(6-2p)/3}.
    """
    if p != b.p:
        raise ValueError(f"bump stats were built at p={b.p}, got p={p}")
    if N >= 2 and N * N <= 2.0 * b.support_radius:
        raise ValueError("supports overlap: need N^2 > 2 M")
    lam = float(N) ** (-1.0 / 3.0)
    cross = coulomb_cross_term(b.charge, N)
    return DilatedBumpStats(
        N=N,
        kinetic_part=lam**3 * N * b.kinetic,
        coulomb_part=lam**3 * (N * b.self_coulomb + cross),
        lp_mass=lam ** (2.0 * p - 3.0) * N * b.lp_mass,
    )


def negative_energy_amplitude(b: BumpStats, params: Params) -> Optional[float]:
    """Amplitude a minimizing the energy of a*bump; None if no a gives < 0.

    The energy is the scalar function g(a) = a^2 (kinetic + omega
    charge)/2 + lam a^4 self/4 - a^p lp/p, scanned over a log-spaced
    range and refined around the best point.
    """
    if params.p != b.p:
        raise ValueError(f"bump stats were built at p={b.p}, params have p={params.p}")

    def g(a: np.ndarray) -> np.ndarray:
        return (
            0.5 * a**2 * (b.kinetic + params.omega * b.charge)
            + 0.25 * params.lam * a**4 * b.self_coulomb
            - a**params.p * b.lp_mass / params.p
        )

    a = np.logspace(-3.0, 6.0, 4001)
    i = int(np.argmin(g(a)))
    lo, hi = a[max(i - 1, 0)], a[min(i + 1, len(a) - 1)]
    for _ in range(80):
        m1, m2 = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if g(np.array(m1)) < g(np.array(m2)):
            hi = m2
        else:
            lo = m1
    best = 0.5 * (lo + hi)
    if g(np.array(best)) < 0.0:
        return float(best)
    return None


# ----------------------------------------------------- log-weight probe


@dataclass(frozen=True)
class LogProbeValue:
    """Truncated integrals of the profile r^{-5/4} (1 + |log r|)^{-beta}.

    lhs_trunc is the L^{12/5} mass over r_lo < |x| < r_hi (stays finite
    as the cutoffs widen); rhs_trunc is the weighted L^2 integral with
    weight |x|^{-1/2} (1 + |log|x||)^{-alpha} over the same shell
    (diverges when 2 beta + alpha <= 1).
    """

    r_lo: float
    r_hi: float
    lhs_trunc: float
    rhs_trunc: float


def _log_kernel_integral(gamma: float, t1: float, t2: float) -> float:
    """int_{t1}^{t2} (1 + |t|)^{-gamma} dt in closed form."""

    def G(t: float) -> float:
        if gamma == 1.0:
            return float(np.sign(t) * np.log1p(abs(t)))
        return float(np.sign(t) * ((1.0 + abs(t)) ** (1.0 - gamma) - 1.0) / (1.0 - gamma))

    return G(t2) - G(t1)


def log_counterexample_profile(
    beta: float, alpha: float, cutoffs: tuple[float, float]
) -> LogProbeValue:
    """Truncated two-sided integrals of f(x) = |x|^{-5/4} (1+|log|x||)^{-beta}.

    Requires 5/12 < beta <= (1-alpha)/2 (nonempty only for alpha < 1/6)
    and cutoffs r_lo < 1 < r_hi. Both integrals reduce to elementary
    antiderivatives in t = log r:
        lhs = 4 pi int (1+|t|)^{-12 beta/5} dt,
        rhs = 4 pi int (1+|t|)^{-(2 beta + alpha)} dt.
    """
    if not (5.0 / 12.0 < beta <= (1.0 - alpha) / 2.0):
        raise ValueError(
            f"beta must lie in (5/12, (1-alpha)/2]; for alpha={alpha} this range is "
            + ("empty" if (1.0 - alpha) / 2.0 <= 5.0 / 12.0 else f"violated by beta={beta}")
        )
    r_lo, r_hi = cutoffs
    if not (0.0 < r_lo < 1.0 < r_hi):
        raise ValueError("cutoffs must satisfy 0 < r_lo < 1 < r_hi")
    t1, t2 = float(np.log(r_lo)), float(np.log(r_hi))
    return LogProbeValue(
        r_lo=r_lo,
        r_hi=r_hi,
        lhs_trunc=FOUR_PI * _log_kernel_integral(12.0 * beta / 5.0, t1, t2),
        rhs_trunc=FOUR_PI * _log_kernel_integral(2.0 * beta + alpha, t1, t2),
    )
