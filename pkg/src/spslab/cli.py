"""Experiment orchestrator.

Each named scenario runs one family of experiments (energy tables,
minimizations, witness-family sweeps, inequality sweeps), writes
``rows.csv`` plus ``report.json`` into the output directory and
returns a ScenarioReport with pass/fail/inconclusive verdicts.

Command shape:

    spslab <scenario> --config cfg.json [--out dir] [--seed k] [--workers w]

Exit codes: 0 all verdicts pass, 2 some verdict fails, 3 some verdict
is inconclusive (none fail), 1 error. ``SPSLAB_WORKERS`` overrides
``--workers``. Reports are bit-for-bit reproducible from config and
seed at worker count 1; runtimes are kept out of rows.csv for that
reason and live in report.json only.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import scipy

from . import constructions as cons
from . import inequalities as ineq
from .energy import Params, eval_I
from .grid import RadialField, make_radial_grid, sample_radial, save_radial_csv
from .minimize import (
    SolverConfig,
    gaussian_init,
    lift_radial_to_3d,
    minimize_3d,
    minimize_radial,
    random_smooth_init,
)
from .grid import BoxGrid

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

RADIAL_CRITICAL_LOW = 18.0 / 7.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one scenario run; unknown scenarios are rejected in run()."""

    scenario: str
    p: list[float] = field(default_factory=lambda: [2.8])
    lam: list[float] = field(default_factory=lambda: [1.0])
    eps: list[float] = field(default_factory=lambda: [0.1])
    R: list[float] = field(default_factory=lambda: [8.0])
    N: list[int] = field(default_factory=lambda: [2, 4, 8, 16])
    alpha: list[float] = field(default_factory=lambda: [0.6])
    K: list[int] = field(default_factory=lambda: [5, 10, 20, 40])
    omega: float = 1.0
    n: int = 1025
    r_max: float = 40.0
    n3d: int = 48
    L: float = 8.0
    offset: float = 0.0
    restarts: int = 8
    init_amplitude: float = 1.0
    init_width: float = 1.0
    max_iters: int = 20000
    max_iters_3d: int = 400
    grad_tol: float = 1e-6
    grad_tol_3d: float = 1e-6
    dyadic_floor: float = 1.0
    hls_cap: float = 10.0
    out_dir: str = "spslab-out"
    seed: int = 0
    workers: int = 1

    def solver(self, max_iters: int | None = None) -> SolverConfig:
        return SolverConfig(
            max_iters=self.max_iters if max_iters is None else max_iters,
            grad_tol=self.grad_tol,
        )

    def solver_3d(self) -> SolverConfig:
        return SolverConfig(max_iters=self.max_iters_3d, grad_tol=self.grad_tol_3d)


def config_from_dict(d: dict) -> ScenarioConfig:
    known = ScenarioConfig.__dataclass_fields__
    unknown = set(d) - set(known)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ScenarioConfig(**d)


@dataclass
class ScenarioReport:
    scenario: str
    config: dict
    rows: list[dict]
    verdicts: dict[str, str]
    runtimes: dict[str, float]
    environment: dict

    @property
    def exit_code(self) -> int:
        if any(v == FAIL for v in self.verdicts.values()):
            return 2
        if any(v == INCONCLUSIVE for v in self.verdicts.values()):
            return 3
        return 0

    def write(self, out_dir: str) -> None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "rows.csv"), "w", newline="") as fh:
            if self.rows:
                cols: list[str] = []
                for row in self.rows:
                    cols.extend(k for k in row if k not in cols)
                w = csv.DictWriter(fh, fieldnames=cols, restval="")
                w.writeheader()
                for row in self.rows:
                    w.writerow(
                        {k: repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for k, v in row.items()}
                    )
        payload = {
            "scenario": self.scenario,
            "config": self.config,
            "verdicts": self.verdicts,
            "runtimes_s": self.runtimes,
            "environment": self.environment,
        }
        with open(os.path.join(out_dir, "report.json"), "w") as fh:
            json.dump(payload, fh, indent=2, default=float)


def _environment() -> dict:
    return {
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
    }


def _require(cfg: ScenarioConfig, *names: str) -> None:
    for name in names:
        if len(getattr(cfg, name)) == 0:
            raise ValueError(f"empty parameter grid: {name}")


def _map(fn, args: list, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args))


# --------------------------------------------------------------- scenarios


def _scenario_energy(cfg: ScenarioConfig):
    _require(cfg, "p", "lam", "eps")
    grid = make_radial_grid(cfg.n, cfg.r_max)
    u = gaussian_init(grid, cfg.init_amplitude, cfg.init_width)
    rows, ok = [], True
    for p in cfg.p:
        for lam in cfg.lam:
            for eps in cfg.eps:
                params = Params(p=p, lam=lam, omega=eps**2)
                b = eval_I(u, params)
                rows.append(
                    {"p": p, "lam": lam, "eps": eps, "kinetic": b.kinetic, "mass": b.mass,
                     "coulomb": b.coulomb, "power": b.power, "total": b.total}
                )
                ok &= b.kinetic >= 0 and b.mass >= 0 and b.coulomb >= 0 and b.power <= 0
    return rows, {"term_signs": PASS if ok else FAIL}


def _scenario_minimize_radial(cfg: ScenarioConfig):
    _require(cfg, "p", "lam", "eps")
    grid = make_radial_grid(cfg.n, cfg.r_max)
    rows, all_conv = [], True
    for p in cfg.p:
        for lam in cfg.lam:
            for eps in cfg.eps:
                params = Params(p=p, lam=lam, omega=eps**2)
                init = gaussian_init(grid, cfg.init_amplitude, cfg.init_width)
                res = minimize_radial(params, init, cfg.solver())
                rows.append(
                    {"p": p, "lam": lam, "eps": eps, "total": res.breakdown.total,
                     "residual": res.residual_norm, "iters": res.iters,
                     "converged": res.converged}
                )
                all_conv &= res.converged
                save_radial_csv(
                    res.field,
                    os.path.join(cfg.out_dir, f"minimizer_p{p}_lam{lam}_eps{eps}.csv"),
                )
    return rows, {"all_converged": PASS if all_conv else FAIL}


def _scenario_minimize_3d(cfg: ScenarioConfig):
    _require(cfg, "p", "lam", "R")
    p, lam, R = cfg.p[0], cfg.lam[0], cfg.R[0]
    params = Params(p=p, lam=lam, omega=cfg.eps[0] ** 2 if cfg.eps else 0.0, R=R)
    grid = BoxGrid(cfg.n3d, cfg.L)
    rng = np.random.default_rng(cfg.seed)
    rows, any_conv = [], False
    from .minimize import gaussian_init_3d

    inits = [("center", gaussian_init_3d(grid, R, amplitude=cfg.init_amplitude, width=cfg.init_width))]
    for k in range(max(cfg.restarts - 1, 0)):
        c = tuple(rng.uniform(-0.4 * R, 0.4 * R, size=3))
        inits.append(
            (f"offcenter_{k}", gaussian_init_3d(grid, R, center=c,
                                                amplitude=cfg.init_amplitude, width=cfg.init_width))
        )
    for name, init in inits:
        res = minimize_3d(params, init, cfg.solver_3d())
        rows.append({"init": name, "total": res.breakdown.total, "residual": res.residual_norm,
                     "iters": res.iters, "asymmetry": res.asymmetry, "converged": res.converged})
        any_conv |= res.converged
    return rows, {"any_converged": PASS if any_conv else FAIL}


def _scenario_tent_sweep(cfg: ScenarioConfig):
    _require(cfg, "eps", "p")
    rows, bounds_ok = [], True
    for eps in cfg.eps:
        f, rep = cons.tent_profile(eps)
        row = {"eps": eps, "R": rep.R, "S": rep.S, "kin_raw": rep.kin_raw,
               "coul_raw": rep.coul_raw, "kin_raw_quad": rep.kin_raw_quad,
               "coul_raw_quad": rep.coul_raw_quad}
        bounds_ok &= rep.kin_raw <= 8.0 and rep.coul_raw <= 32.0
        for p in cfg.p:
            lp = rep.lp_raw(p)
            row[f"lp_raw_p{p:g}"] = lp
            bounds_ok &= lp >= eps ** (p - cons.TENT_CRITICAL_P) / 2.0 ** (p + 2.0)
        rows.append(row)
    verdicts = {"tent_bounds": PASS if bounds_ok else FAIL}
    if len(cfg.eps) >= 3:
        slope_ok = True
        for p in cfg.p:
            lp = np.array([cons.tent_profile(e)[1].lp_raw(p) for e in cfg.eps])
            slope = np.polyfit(np.log(cfg.eps), np.log(lp), 1)[0]
            target = p - cons.TENT_CRITICAL_P
            slope_ok &= abs(slope - target) <= 0.03 * abs(target)
        verdicts["lp_slope"] = PASS if slope_ok else FAIL
    return rows, verdicts


def _tuned_bump(cfg: ScenarioConfig, p: float, lam: float) -> cons.BumpStats:
    base = cons.bump_stats(cons.standard_bump(1.0), p)
    params = Params(p=p, lam=lam, omega=cfg.omega)
    a = cons.negative_energy_amplitude(base, params)
    if a is None:
        raise ValueError(f"no bump amplitude gives negative energy at lam={lam}")
    return cons.rescale_bump_stats(base, a)


def _scenario_bump_sweep(cfg: ScenarioConfig):
    _require(cfg, "p", "lam", "N")
    p, lam = cfg.p[0], cfg.lam[0]
    params = Params(p=p, lam=lam, omega=cfg.omega)
    b = _tuned_bump(cfg, p, lam)
    e1 = cons.bump_sum_energy(b, 1, params).total
    rows, ok = [], e1 < 0
    c_bound = 0.25 * lam * b.charge**2
    for N in cfg.N:
        eN = cons.bump_sum_energy(b, N, params)
        cross = cons.coulomb_cross_term(b.charge, N)
        bound = (N * N - N) / (N * N - 2.0 * b.support_radius) * b.charge**2
        rows.append({"N": N, "total": eN.total, "per_bump": eN.total / N,
                     "cross": cross, "cross_bound": bound, "C": eN.total - N * e1})
        ok &= cross <= bound * (1.0 + 1e-12)
        ok &= eN.total - N * e1 <= c_bound * (1.0 + 1e-12)
    return rows, {"bump_sums": PASS if ok else FAIL}


def _scenario_dilated_bump_sweep(cfg: ScenarioConfig):
    _require(cfg, "p", "N")
    rows, ok = [], True
    for p in cfg.p:
        base = cons.bump_stats(cons.standard_bump(1.0), p)
        stats = [cons.dilated_bump_sum_stats(base, N, p) for N in cfg.N]
        kin = np.array([s.kinetic_part for s in stats])
        ok &= np.all(np.abs(kin - kin[0]) <= 1e-12 * abs(kin[0]))
        if len(cfg.N) >= 2:
            lp = np.array([s.lp_mass for s in stats])
            slope = np.polyfit(np.log(cfg.N), np.log(lp), 1)[0]
            ok &= abs(slope - (6.0 - 2.0 * p) / 3.0) <= 1e-12
        for s in stats:
            rows.append({"p": p, "N": s.N, "kinetic_part": s.kinetic_part,
                         "coulomb_part": s.coulomb_part, "lp_mass": s.lp_mass})
    return rows, {"dilated_bumps": PASS if ok else FAIL}


def _scenario_lower_bound_sweep(cfg: ScenarioConfig):
    _require(cfg, "alpha")
    probes = ineq.probe_family()
    rows = []
    verdicts = {}
    for alpha in cfg.alpha:
        ratios = []
        for name, f in probes:
            ratio = ineq.lower_bound_ratio(f, alpha)
            rows.append({"profile": name, "alpha": alpha, "ratio": ratio})
            ratios.append(ratio)
        if alpha > 0.5:
            verdicts[f"positive_infimum_alpha_{alpha:g}"] = PASS if min(ratios) > 0 else FAIL
    # truncated counterexample at the smallest listed alpha below 1/6, if any
    small = [a for a in cfg.alpha if a < 1.0 / 6.0]
    if small:
        alpha = small[0]
        beta = 0.44 if alpha <= 0.12 else (1.0 - alpha) / 2.0
        vals = [cons.log_counterexample_profile(beta, alpha, (1.0 / c, c)) for c in (1e2, 1e4, 1e6)]
        for v in vals:
            rows.append({"profile": f"log_probe_b{beta:g}", "alpha": alpha,
                         "r_hi": v.r_hi, "lhs_trunc": v.lhs_trunc, "rhs_trunc": v.rhs_trunc})
        growth = vals[-1].rhs_trunc / vals[0].rhs_trunc
        lhs_stable = abs(vals[-1].lhs_trunc - vals[-2].lhs_trunc) <= 0.01 * vals[-1].lhs_trunc
        verdicts["counterexample_divergence"] = PASS if (growth > 10.0 and lhs_stable) else FAIL
    return rows, verdicts


def _scenario_dyadic_lemma(cfg: ScenarioConfig):
    _require(cfg, "alpha", "K")
    rows, verdicts = [], {}
    for alpha in cfg.alpha:
        ratios = []
        for K in cfg.K:
            v = ineq.dyadic_lemma_check(ineq.spreading_family(K), alpha)
            rows.append({"alpha": alpha, "K": K, "lhs": v.lhs, "rhs": v.rhs, "ratio": v.ratio})
            ratios.append(v.ratio)
        if alpha > 0.5:
            verdicts[f"floor_alpha_{alpha:g}"] = (
                PASS if min(ratios) >= cfg.dyadic_floor else FAIL
            )
    return rows, verdicts


def _scenario_hls_check(cfg: ScenarioConfig):
    probes = ineq.probe_family()
    rows, ok = [], True
    gauss = {}
    for name, f in probes:
        r_hls = ineq.hls_ratio(f)
        r_w = ineq.radial_weighted_ratio(f)
        rows.append({"profile": name, "hls_ratio": r_hls, "weighted_ratio": r_w})
        ok &= r_hls <= cfg.hls_cap
        if name.startswith("gaussian"):
            gauss[name] = r_hls
    vals = list(gauss.values())
    dilation_ok = all(abs(v - vals[0]) <= 1e-6 * vals[0] for v in vals)
    return rows, {"bounded": PASS if ok else FAIL,
                  "dilation_invariant": PASS if dilation_ok else FAIL}


def _l2_distance(a: RadialField, b: RadialField) -> float:
    d = (a.values - b.values) ** 2
    r = a.grid.nodes
    return float(np.sqrt(4.0 * np.pi * np.trapezoid(d * r * r, dx=a.grid.h)))


def _scenario_sweep_lambda(cfg: ScenarioConfig):
    _require(cfg, "p", "lam")
    p = cfg.p[0]
    if not (RADIAL_CRITICAL_LOW < p < 3.0):
        raise ValueError(f"p must lie in (18/7, 3) for this sweep, got {p}")
    grid = make_radial_grid(cfg.n, cfg.r_max)
    init = gaussian_init(grid, cfg.init_amplitude, cfg.init_width)
    limit = minimize_radial(Params(p=p, lam=1.0, omega=0.0), init, cfg.solver())
    if not limit.converged:
        raise ValueError("the static-limit minimization did not converge")
    save_radial_csv(limit.field, os.path.join(cfg.out_dir, "limit_minimizer.csv"))
    rows, dists = [], []
    lams = sorted(cfg.lam, reverse=True)
    for lam in lams:
        eps = lam ** ((p - 2.0) / (4.0 * (3.0 - p)))
        res = minimize_radial(Params(p=p, lam=1.0, omega=eps**2), limit.field, cfg.solver())
        dist = _l2_distance(res.field, limit.field)
        rows.append({"lam": lam, "eps": eps, "total": res.breakdown.total,
                     "converged": res.converged, "iters": res.iters, "dist_to_limit": dist})
        if res.converged:
            dists.append(dist)
            save_radial_csv(res.field, os.path.join(cfg.out_dir, f"rescaled_lam{lam:g}.csv"))
    if len(dists) >= 2:
        monotone = all(d2 < d1 for d1, d2 in zip(dists, dists[1:]))
        verdict = PASS if monotone else FAIL
    else:
        verdict = INCONCLUSIVE
    return rows, {"distances_decrease": verdict}


def _scenario_threshold_lambda0(cfg: ScenarioConfig):
    _require(cfg, "p")
    p = cfg.p[0]
    if not (2.0 < p < 3.0):
        raise ValueError(f"p must lie in (2, 3), got {p}")
    base = cons.bump_stats(cons.standard_bump(1.0), p)

    def predicate(lam: float) -> bool:
        a = cons.negative_energy_amplitude(base, Params(p=p, lam=lam, omega=cfg.omega))
        return a is not None

    lam_hi = 1.0 / (2.0 * np.pi)
    rows = [{"lam": lam_hi, "negative_state_found": predicate(lam_hi)}]
    if rows[0]["negative_state_found"]:
        return rows, {"bracket": FAIL}
    lam_lo = lam_hi / 2.0
    for _ in range(60):
        if predicate(lam_lo):
            break
        rows.append({"lam": lam_lo, "negative_state_found": False})
        lam_lo /= 2.0
    else:
        return rows, {"bracket": INCONCLUSIVE}
    rows.append({"lam": lam_lo, "negative_state_found": True})
    hi = lam_lo * 2.0
    for _ in range(40):
        if hi - lam_lo <= 1e-3:
            break
        mid = 0.5 * (lam_lo + hi)
        found = predicate(mid)
        rows.append({"lam": mid, "negative_state_found": found})
        if found:
            lam_lo = mid
        else:
            hi = mid
    ok = 0.0 < lam_lo < hi <= 1.0 / (2.0 * np.pi) + 1e-3 and hi - lam_lo <= 1e-3
    rows.append({"lam_lo": lam_lo, "lam_hi": hi})
    return rows, {"bracket": PASS if ok else FAIL}


def _scenario_ball_symmetry(cfg: ScenarioConfig):
    _require(cfg, "p", "eps", "R")
    p, eps, R = cfg.p[0], cfg.eps[0], cfg.R[0]
    if not (RADIAL_CRITICAL_LOW < p < 3.0):
        raise ValueError(f"p must lie in (18/7, 3), got {p}")
    params = Params(p=p, lam=1.0, omega=eps**2, R=R)
    rows = []

    grid = make_radial_grid(cfg.n, R)
    init = gaussian_init(grid, cfg.init_amplitude, cfg.init_width)
    rad = minimize_radial(params, init, cfg.solver())
    m_bar = rad.breakdown.total
    rows.append({"run": "radial", "n": cfg.n, "total": m_bar,
                 "converged": rad.converged, "iters": rad.iters, "asymmetry": 0.0})
    fine_grid = make_radial_grid(2 * cfg.n - 1, R)
    fine_init = RadialField(
        fine_grid, np.interp(fine_grid.nodes, grid.nodes, rad.field.values), dirichlet=True
    )
    rad_fine = minimize_radial(params, fine_init, cfg.solver())
    rows.append({"run": "radial_refined", "n": 2 * cfg.n - 1, "total": rad_fine.breakdown.total,
                 "converged": rad_fine.converged, "iters": rad_fine.iters, "asymmetry": 0.0})
    radial_margin = abs(rad_fine.breakdown.total - m_bar)

    offset = cfg.offset if cfg.offset > 0 else 0.57 * R
    best = {}
    for n3 in (max(cfg.n3d - 16, 32), cfg.n3d):
        box = BoxGrid(n3, R)
        inits = [
            ("radial_lift", lift_radial_to_3d(rad.field, box, R)),
            ("two_bump", lift_radial_to_3d(rad.field, box, R,
                                           centers=[(-offset, 0.0, 0.0), (offset, 0.0, 0.0)])),
        ]
        energies = []
        for name, u0 in inits:
            res = minimize_3d(params, u0, cfg.solver_3d())
            rows.append({"run": name, "n": n3, "total": res.breakdown.total,
                         "converged": res.converged, "iters": res.iters,
                         "asymmetry": res.asymmetry})
            if res.converged:
                energies.append((res.breakdown.total, res.asymmetry))
        if energies:
            best[n3] = min(energies)

    if len(best) < 2:
        return rows, {"symmetry": INCONCLUSIVE}
    (m_coarse, _), (m_fine, asym) = (best[k] for k in sorted(best))
    margin = abs(m_fine - m_coarse) + radial_margin
    rows.append({"run": "summary", "m_bar": m_bar, "m": m_fine, "margin": margin,
                 "asymmetry": asym})
    broken = m_fine < m_bar - margin and asym > 0.1
    return rows, {"symmetry": PASS if broken else INCONCLUSIVE}


def _positivity_run(args: tuple) -> dict:
    (p, lam, omega, n, r_max, seed, max_iters, grad_tol, k) = args
    grid = make_radial_grid(n, r_max)
    rng = np.random.default_rng(seed + k)
    init = random_smooth_init(grid, rng)
    res = minimize_radial(
        Params(p=p, lam=lam, omega=omega), init, SolverConfig(max_iters=max_iters, grad_tol=grad_tol)
    )
    return {"run": k, "total": res.breakdown.total, "converged": res.converged,
            "iters": res.iters}


def _scenario_lambda_positivity(cfg: ScenarioConfig):
    _require(cfg, "p", "lam")
    p, lam = cfg.p[0], cfg.lam[0]
    args = [(p, lam, cfg.omega, cfg.n, cfg.r_max, cfg.seed, cfg.max_iters, cfg.grad_tol, k)
            for k in range(cfg.restarts)]
    rows = _map(_positivity_run, args, cfg.workers)
    ok = all(row["total"] >= -1e-8 for row in rows)
    return rows, {"nonnegative": PASS if ok else FAIL}


_SCENARIOS = {
    "energy": _scenario_energy,
    "minimize-radial": _scenario_minimize_radial,
    "minimize-3d": _scenario_minimize_3d,
    "tent-sweep": _scenario_tent_sweep,
    "bump-sweep": _scenario_bump_sweep,
    "dilated-bump-sweep": _scenario_dilated_bump_sweep,
    "lower-bound-sweep": _scenario_lower_bound_sweep,
    "dyadic-lemma": _scenario_dyadic_lemma,
    "hls-check": _scenario_hls_check,
    "sweep-lambda": _scenario_sweep_lambda,
    "threshold-lambda0": _scenario_threshold_lambda0,
    "ball-symmetry": _scenario_ball_symmetry,
    "lambda-positivity": _scenario_lambda_positivity,
}

#: Per-scenario defaults that make a bare invocation meaningful.
SCENARIO_DEFAULTS: dict[str, dict] = {
    "energy": {"p": [2.6, 2.8], "lam": [0.1, 1.0], "eps": [0.0, 0.1]},
    "minimize-radial": {"p": [2.8], "lam": [1e-3], "eps": [1.0], "n": 513, "r_max": 30.0},
    "minimize-3d": {"p": [2.8], "lam": [1e-3], "eps": [1.0], "R": [8.0], "n3d": 32,
                    "L": 8.0, "restarts": 2, "max_iters_3d": 150},
    "tent-sweep": {"eps": [0.2, 0.1, 0.05, 0.01], "p": [2.5]},
    "bump-sweep": {"p": [2.8], "lam": [1e-3], "N": [2, 4, 8, 16]},
    "dilated-bump-sweep": {"p": [2.5, 2.9], "N": [1, 8, 64]},
    "lower-bound-sweep": {"alpha": [0.6, 0.1]},
    "dyadic-lemma": {"alpha": [0.6, 0.3], "K": [5, 10, 20, 40]},
    "hls-check": {},
    "sweep-lambda": {"p": [2.8], "lam": [1e-2, 1e-3, 1e-4], "n": 2049, "r_max": 3000.0,
                     "init_amplitude": 1e-5, "init_width": 300.0, "grad_tol": 1e-8,
                     "max_iters": 40000},
    "threshold-lambda0": {"p": [2.8]},
    "ball-symmetry": {"p": [2.6], "eps": [0.01], "R": [180.0], "n": 2049, "n3d": 64,
                      "init_amplitude": 2.5e-3, "init_width": 22.0, "grad_tol": 1e-7,
                      "max_iters": 40000, "max_iters_3d": 800},
    "lambda-positivity": {"p": [2.7], "lam": [0.2], "n": 257, "r_max": 30.0,
                          "restarts": 50, "max_iters": 5000},
}


def run(config: ScenarioConfig) -> ScenarioReport:
    if config.scenario not in _SCENARIOS:
        raise ValueError(
            f"unknown scenario {config.scenario!r}; choose from {sorted(_SCENARIOS)}"
        )
    os.makedirs(config.out_dir, exist_ok=True)
    t0 = time.perf_counter()
    rows, verdicts = _SCENARIOS[config.scenario](config)
    runtimes = {"total": time.perf_counter() - t0}
    report = ScenarioReport(
        scenario=config.scenario,
        config=asdict(config),
        rows=rows,
        verdicts=verdicts,
        runtimes=runtimes,
        environment=_environment(),
    )
    report.write(config.out_dir)
    return report


def default_config(scenario: str, **overrides) -> ScenarioConfig:
    base = dict(SCENARIO_DEFAULTS.get(scenario, {}))
    base.update(overrides)
    base["scenario"] = scenario
    return config_from_dict(base)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="spslab", description=__doc__)
    parser.add_argument("scenario", help="scenario name, e.g. tent-sweep")
    parser.add_argument("--config", help="JSON file with ScenarioConfig fields")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--workers", type=int, help="worker pool size")
    args = parser.parse_args(argv)
    try:
        overrides: dict = {}
        if args.config:
            with open(args.config) as fh:
                overrides.update(json.load(fh))
        overrides.pop("scenario", None)  # the positional argument wins
        if args.out is not None:
            overrides["out_dir"] = args.out
        if args.seed is not None:
            overrides["seed"] = args.seed
        workers = os.environ.get("SPSLAB_WORKERS")
        if args.workers is not None:
            overrides["workers"] = args.workers
        if workers is not None:
            overrides["workers"] = int(workers)
        config = default_config(args.scenario, **overrides)
        report = run(config)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name, verdict in report.verdicts.items():
        print(f"{name}: {verdict}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
