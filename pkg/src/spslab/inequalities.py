"""Empirical checks of Coulomb-energy inequalities.

The central object is the weighted norm int u^2 |x|^{-1/2}
(1+|log|x||)^{-alpha} dx and its ratio against the Coulomb energy,
together with the supporting machinery: a dyadic band integral for
piecewise-constant densities with log weights, a discrete weighted
Cauchy-Schwarz check, and the two classical upper-bound ratios
(L^{12/5} and plain |x|^{-1/2} weight).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coulomb import FOUR_PI, coulomb_energy_radial
from .grid import RadialField, make_radial_grid, sample_radial
from .constructions import tent_profile


@lru_cache(maxsize=4)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _gl_integral(f, a: float, b: float, order: int = 40) -> float:
    """Gauss-Legendre quadrature of f on [a, b]."""
    if b <= a:
        return 0.0
    x, w = _gauss_legendre(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return float(half * np.sum(w * f(mid + half * x)))


def log_weight(r: np.ndarray, alpha: float) -> np.ndarray:
    """(1 + |log r|)^alpha, the weight attached to dyadic distance from r=1."""
    return (1.0 + np.abs(np.log(r))) ** alpha


# ------------------------------------------------------- weighted norm


@dataclass(frozen=True)
class WeightedNormValue:
    """Value of int u^2 |x|^{-1/2} (1+|log|x||)^{-alpha} dx."""

    alpha: float
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < 0.0:
            raise ValueError(f"weighted norm must be finite and >= 0, got {self.value}")


def weighted_norm(u: RadialField, alpha: float) -> WeightedNormValue:
    """4 pi int u(r)^2 r^{3/2} (1+|log r|)^{-alpha} dr.

    The first cell [0, h] is integrated by Gauss-Legendre with u
    interpolated linearly (the r^{3/2} factor vanishes at 0, so the
    log weight causes no harm); the remainder uses the composite
    trapezoid on the grid nodes.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    r = u.grid.nodes
    h = u.grid.h
    u0, u1 = u.values[0], u.values[1]

    def first_cell(x: np.ndarray) -> np.ndarray:
        ulin = u0 + (u1 - u0) * x / h
        return ulin**2 * x**1.5 / log_weight(x, alpha)

    head = _gl_integral(first_cell, 0.0, h)
    integrand = u.values[1:] ** 2 * r[1:] ** 1.5 / log_weight(r[1:], alpha)
    tail = float(np.trapezoid(integrand, dx=h))
    return WeightedNormValue(alpha=alpha, value=FOUR_PI * (head + tail))


def lower_bound_ratio(u: RadialField, alpha: float) -> float:
    """Coulomb energy over the squared weighted norm; positive for u != 0."""
    if not np.any(u.values != 0.0):
        raise ValueError("ratio is undefined for the zero field")
    wn = weighted_norm(u, alpha).value
    return coulomb_energy_radial(u).energy / wn**2


# --------------------------------------------------------- dyadic band


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative piecewise-constant density on (0, infinity).

    values[i] holds on [breakpoints[i], breakpoints[i+1]); zero outside.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if bp.ndim != 1 or len(bp) != len(v) + 1:
            raise ValueError("need one more breakpoint than values")
        if bp[0] <= 0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be positive and strictly increasing")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("values must be finite and >= 0")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(np.sum(self.values * np.diff(self.breakpoints)))


@dataclass(frozen=True)
class DyadicBandValue:
    lhs: float
    rhs: float
    ratio: float


def _weighted_piece_integral(a: float, b: float, alpha: float) -> float:
    """int_a^b (1+|log r|)^alpha dr, split at the kink r=1."""
    f = lambda r: log_weight(r, alpha)
    if a < 1.0 < b:
        return _gl_integral(f, a, 1.0) + _gl_integral(f, 1.0, b)
    return _gl_integral(f, a, b)


def dyadic_lemma_check(h: StepFunction, alpha: float) -> DyadicBandValue:
    """Band integral against the squared plain mass.

    lhs = iint_{s/2 < r < 2s} h(r) w(r) h(s) w(s) dr ds with
    w(r) = (1+|log r|)^alpha; rhs = (int h)^2. The s-axis is split at
    every point where the integrand or the band edges cross a
    breakpoint or the weight kink, so each sub-integral is smooth.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    bp, vals = h.breakpoints, h.values
    lo, hi = bp[0], bp[-1]

    def inner(s: float) -> float:
        r_lo, r_hi = s / 2.0, 2.0 * s
        acc = 0.0
        for i, v in enumerate(vals):
            if v == 0.0:
                continue
            a = max(bp[i], r_lo)
            b = min(bp[i + 1], r_hi)
            if b > a:
                acc += v * _weighted_piece_integral(a, b, alpha)
        return acc

    cuts = np.concatenate([bp, bp / 2.0, 2.0 * bp, [0.5, 1.0, 2.0]])
    cuts = np.unique(cuts[(cuts > lo) & (cuts < hi)])
    edges = np.concatenate([[lo], cuts, [hi]])

    lhs = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        i = int(np.searchsorted(bp, 0.5 * (a + b), side="right") - 1)
        v = vals[i]
        if v == 0.0:
            continue
        f = lambda s: v * log_weight(s, alpha) * np.array([inner(si) for si in np.atleast_1d(s)])
        lhs += _gl_integral(f, a, b)

    rhs = h.integral() ** 2
    return DyadicBandValue(lhs=lhs, rhs=rhs, ratio=lhs / rhs if rhs > 0 else np.inf)


def spreading_family(K: int) -> StepFunction:
    """Density with unit mass on each dyadic block [2^n, 2^{n+1}], n = 0..K.

    The block values 2^{-n} give every block the same plain mass, so
    the squared total mass grows like K^2 while the band integral only
    collects adjacent blocks; the ratio then decays for small weight
    exponents and stays bounded below for large ones.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    n = np.arange(K + 1)
    return StepFunction(breakpoints=2.0 ** np.arange(K + 2), values=2.0 ** (-n.astype(float)))


# ------------------------------------------------- discrete inequality


@dataclass(frozen=True)
class SequenceInequalityValue:
    lhs: float
    rhs: float


def sequence_inequality_check(a: np.ndarray, b: np.ndarray) -> SequenceInequalityValue:
    """(sum a_n)^2 against (sum 1/b_n)(sum b_n a_n^2), a >= 0, b > 0."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("sequences must have the same length")
    if np.any(a < 0):
        raise ValueError("a must be nonnegative")
    if np.any(b <= 0):
        raise ValueError("b must be positive")
    return SequenceInequalityValue(
        lhs=float(np.sum(a)) ** 2,
        rhs=float(np.sum(1.0 / b) * np.sum(b * a * a)),
    )


# ------------------------------------------------------- upper bounds


def hls_ratio(u: RadialField) -> float:
    """Coulomb energy over the fourth power of the L^{12/5} norm.

    Both sides scale like sigma^5 under dilation, so the ratio is a
    dilation invariant of the profile shape.
    """
    if not np.any(u.values != 0.0):
        raise ValueError("ratio is undefined for the zero field")
    r = u.grid.nodes
    mass = FOUR_PI * float(np.trapezoid(np.abs(u.values) ** 2.4 * r * r, dx=u.grid.h))
    return coulomb_energy_radial(u).energy / mass ** (5.0 / 3.0)


def radial_weighted_ratio(u: RadialField) -> float:
    """Coulomb energy over the squared plain |x|^{-1/2}-weighted mass."""
    return lower_bound_ratio(u, 0.0)


# ------------------------------------------------------- probe family


def probe_family(n: int = 1025) -> list[tuple[str, RadialField]]:
    """The documented profiles used in ratio sweeps.

    Gaussians and ball indicators over dilation scales 1e-3..1e3 (each
    sampled analytically on its own fitted grid) plus three tents.
    """
    probes: list[tuple[str, RadialField]] = []
    for sigma in np.logspace(-3.0, 3.0, 7):
        grid = make_radial_grid(n, 10.0 * sigma)
        probes.append(
            (f"gaussian_s{sigma:g}", sample_radial(lambda r: np.exp(-((r / sigma) ** 2) / 2.0), grid))
        )
        grid2 = make_radial_grid(n, 2.0 * sigma)
        probes.append(
            (f"ball_s{sigma:g}", sample_radial(lambda r: np.where(r <= sigma, 1.0, 0.0), grid2))
        )
    for eps in (0.2, 0.1, 0.05):
        field, _ = tent_profile(eps)
        probes.append((f"tent_e{eps:g}", field))
    return probes
