"""End-to-end acceptance suite.

Each test exercises one advertised guarantee of the package at its
stated tolerance: quadrature oracles, exact discrete scalings, the
closed-form witness families, the minimizers, and the CLI scenarios.
The counterexample-divergence test at the end encodes a claimed growth
rate that the implemented profile does not reach; it documents the
shortfall and is expected to fail.
"""

import time

import numpy as np
import pytest

from spslab import cli
from spslab import constructions as cons
from spslab import inequalities as ineq
from spslab.coulomb import (
    coulomb_bilinear_radial,
    coulomb_energy_3d,
    coulomb_energy_radial,
    coulomb_energy_radial_direct,
)
from spslab.energy import (
    Params,
    dilate,
    dirichlet_integral_radial,
    eval_I,
    lumped_weights_radial,
    m_functional,
    residual,
    scale_to_limit,
)
from spslab.grid import (
    BoxGrid,
    Field3D,
    RadialField,
    integrate_radial,
    make_radial_grid,
    sample_radial,
)
from spslab.minimize import (
    SolverConfig,
    gaussian_init,
    gaussian_init_3d,
    minimize_radial,
    random_smooth_init,
)

FOUR_PI = 4.0 * np.pi
BALL_ENERGY = 32.0 * np.pi**2 / 15.0


# 1. Coulomb quadrature against the closed form for the unit ball.


def test_coulomb_oracle_ball_indicator_radial_and_3d():
    t0 = time.perf_counter()
    grid = make_radial_grid(2049, 8.0)
    u = sample_radial(lambda r: np.where(r <= 1.0, 1.0, 0.0), grid)
    e_radial = coulomb_energy_radial(u).energy
    t_radial = time.perf_counter() - t0
    assert e_radial == pytest.approx(BALL_ENERGY, rel=0.01)
    assert t_radial < 1.0

    t0 = time.perf_counter()
    box = BoxGrid(96, 2.0)
    f = Field3D(box, np.where(box.radius() <= 1.0, 1.0, 0.0))
    e_3d = coulomb_energy_3d(f).energy
    t_3d = time.perf_counter() - t0
    assert e_3d == pytest.approx(BALL_ENERGY, rel=0.03)
    assert t_3d < 60.0


# 2. Fast radial Coulomb against the brute-force double loop.


def test_prefix_sum_coulomb_matches_double_loop_oracle():
    rng = np.random.default_rng(0)
    grid = make_radial_grid(513, 10.0)
    for _ in range(20):
        u = random_smooth_init(grid, rng)
        fast = coulomb_energy_radial(u).energy
        slow = coulomb_energy_radial_direct(u)
        assert abs(fast - slow) <= 1e-10 * max(abs(slow), 1e-300)


# 3. Exact scaling identities of the dilation and blow-up changes of variables.


def test_scaling_identities_dilation_and_blow_up():
    grid = make_radial_grid(513, 10.0)
    u = sample_radial(lambda r: np.exp(-(r**2) / 2.0) * (1.0 + 0.2 * r), grid)
    u = RadialField(grid, np.where(grid.nodes < grid.r_max, u.values, 0.0), dirichlet=True)
    for p in (2.6, 2.8):
        lp_u = FOUR_PI * integrate_radial(u.with_values(np.abs(u.values) ** p), 2)
        for lam in (0.1, 10.0):
            v = dilate(u, lam)
            assert m_functional(v) == pytest.approx(lam**3 * m_functional(u), rel=1e-6)
            lp_v = FOUR_PI * integrate_radial(v.with_values(np.abs(v.values) ** p), 2)
            assert lp_v == pytest.approx(lam ** (2.0 * p - 3.0) * lp_u, rel=1e-6)
            w, eps = scale_to_limit(u, lam, p)
            lhs = eval_I(w, Params(p=p, lam=1.0, omega=eps**2)).total
            rhs = eps ** ((6.0 - p) / (p - 2.0)) * eval_I(
                u, Params(p=p, lam=lam, omega=1.0)
            ).total
            assert lhs == pytest.approx(rhs, rel=1e-6)


# 4. Residual against central finite differences of the energy.


def test_gradient_check_radial_and_3d():
    params = Params(p=2.7, lam=0.5, omega=0.3)
    rng = np.random.default_rng(1)

    grid = make_radial_grid(65, 5.0)
    u = random_smooth_init(grid, rng)
    W = lumped_weights_radial(grid)
    res = residual(u, params).values
    for _ in range(20):
        d = rng.standard_normal(grid.n)
        d[-1] = 0.0
        t = 1e-6
        ep = eval_I(u.with_values(u.values + t * d), params).total
        em = eval_I(u.with_values(u.values - t * d), params).total
        fd = (ep - em) / (2.0 * t)
        an = float(np.sum(W * res * d))
        assert abs(fd - an) <= 1e-5 * max(abs(an), 1e-12)

    box = BoxGrid(16, 2.0)
    u3 = gaussian_init_3d(box, 2.0, amplitude=1.3, width=0.7)
    res3 = residual(u3, params).values
    mask = box.radius() <= 2.0
    for _ in range(20):
        d = rng.standard_normal(u3.values.shape) * mask
        t = 1e-6
        ep = eval_I(u3.with_values(u3.values + t * d), params).total
        em = eval_I(u3.with_values(u3.values - t * d), params).total
        fd = (ep - em) / (2.0 * t)
        an = float(np.sum(box.h**3 * res3 * d))
        assert abs(fd - an) <= 1e-5 * max(abs(an), 1e-12)


# 5. Tent family bounds and the critical growth exponent.


def test_tent_sweep_bounds_and_slope():
    eps_list = (0.2, 0.1, 0.05, 0.01)
    p = 2.5
    lps = []
    for eps in eps_list:
        _, rep = cons.tent_profile(eps)
        assert rep.kin_raw <= 8.0
        assert rep.coul_raw <= 32.0
        lp = rep.lp_raw(p)
        assert lp >= eps ** (p - cons.TENT_CRITICAL_P) / 2.0 ** (p + 2.0)
        lps.append(lp)
    slope = np.polyfit(np.log(eps_list), np.log(lps), 1)[0]
    target = p - cons.TENT_CRITICAL_P
    assert abs(slope - target) <= 0.03 * abs(target)


# 6. Bump sums: linear local terms, cross-term bound, bounded excess.


def test_bump_sums_linear_terms_and_bounded_cross_term():
    p, lam = 2.8, 1e-3
    params = Params(p=p, lam=lam, omega=1.0)
    base = cons.bump_stats(cons.standard_bump(1.0), p)
    a = cons.negative_energy_amplitude(base, params)
    assert a is not None
    b = cons.rescale_bump_stats(base, a)
    e1 = cons.bump_sum_energy(b, 1, params)
    assert e1.total < 0.0
    # one constant bounds the excess over N copies for every N
    C = 0.25 * lam * b.charge**2
    for N in (2, 4, 8, 16):
        eN = cons.bump_sum_energy(b, N, params)
        assert eN.kinetic == pytest.approx(N * e1.kinetic, rel=1e-13)
        assert eN.mass == pytest.approx(N * e1.mass, rel=1e-13)
        assert eN.power == pytest.approx(N * e1.power, rel=1e-13)
        cross = cons.coulomb_cross_term(b.charge, N)
        bound = (N * N - N) / (N * N - 2.0 * b.support_radius) * b.charge**2
        assert cross <= bound * (1.0 + 1e-12)
        assert eN.total <= N * e1.total + C


# 7. Dilated bump sums: constant kinetic part, exact mass growth exponent.


def test_dilated_bump_sums_exact_exponents():
    for p in (2.5, 2.9):
        base = cons.bump_stats(cons.standard_bump(1.0), p)
        stats = [cons.dilated_bump_sum_stats(base, N, p) for N in (1, 4, 16, 64)]
        kin = np.array([s.kinetic_part for s in stats])
        assert np.all(np.abs(kin - kin[0]) <= 1e-12 * abs(kin[0]))
        lp = np.array([s.lp_mass for s in stats])
        slope = np.polyfit(np.log([1, 4, 16, 64]), np.log(lp), 1)[0]
        assert slope == pytest.approx((6.0 - 2.0 * p) / 3.0, abs=1e-12)


# 8. Positivity above the coupling threshold: multi-start never goes negative.


def test_positivity_multistart_never_negative(tmp_path):
    report = cli.run(cli.default_config("lambda-positivity", out_dir=str(tmp_path)))
    assert report.verdicts == {"nonnegative": "pass"}
    assert len(report.rows) == 50
    assert all(row["total"] >= -1e-8 for row in report.rows)


# 9. Threshold bracketing of the coupling below which states go negative.


def test_threshold_bracket(tmp_path):
    t0 = time.perf_counter()
    report = cli.run(cli.default_config("threshold-lambda0", out_dir=str(tmp_path)))
    assert time.perf_counter() - t0 < 300.0
    assert report.verdicts == {"bracket": "pass"}
    summary = report.rows[-1]
    lam_lo, lam_hi = summary["lam_lo"], summary["lam_hi"]
    assert 0.0 < lam_lo < lam_hi <= 1.0 / (2.0 * np.pi) + 1e-3
    assert lam_hi - lam_lo <= 1e-3


# 10. Static-limit minimization: negative energy, tight residual, grid stability.


def test_static_limit_minimization_stable_under_refinement():
    params = Params(p=2.8, lam=1.0, omega=0.0)
    cfg = SolverConfig(max_iters=40000, grad_tol=1e-8)
    grid = make_radial_grid(2049, 3000.0)
    base = minimize_radial(params, gaussian_init(grid, 9.8e-6, 325.7), cfg)
    assert base.converged
    assert base.breakdown.total < 0.0
    assert base.residual_norm <= 1e-6

    def refined(n, r_max):
        g = make_radial_grid(n, r_max)
        v = np.interp(g.nodes, grid.nodes, base.field.values, right=0.0)
        v[-1] = 0.0
        res = minimize_radial(params, RadialField(g, v, dirichlet=True), cfg)
        assert res.converged
        return res.breakdown.total

    E = base.breakdown.total
    assert refined(4097, 3000.0) == pytest.approx(E, rel=0.01)
    assert refined(2049, 6000.0) == pytest.approx(E, rel=0.01)


# 11. Rescaled minimizers approach the static limit monotonically.


def test_rescaled_minimizers_converge_to_static_limit(tmp_path):
    report = cli.run(cli.default_config("sweep-lambda", out_dir=str(tmp_path)))
    assert report.verdicts == {"distances_decrease": "pass"}
    dists = [row["dist_to_limit"] for row in report.rows if row["converged"]]
    lams = [row["lam"] for row in report.rows if row["converged"]]
    assert len(dists) >= 2
    assert lams == sorted(lams, reverse=True)
    assert all(d2 < d1 for d1, d2 in zip(dists, dists[1:]))


# 12. Symmetry breaking on the ball: the 3D minimum beats every radial state.


def test_symmetry_breaking_on_ball(tmp_path):
    t0 = time.perf_counter()
    report = cli.run(cli.default_config("ball-symmetry", out_dir=str(tmp_path)))
    assert time.perf_counter() - t0 < 1800.0
    assert report.verdicts == {"symmetry": "pass"}
    summary = report.rows[-1]
    assert summary["m"] < summary["m_bar"] - summary["margin"]
    assert summary["asymmetry"] > 0.1


# 13. Inequality suite on randomized instances plus the dyadic floor.


def test_inequality_suite_randomized():
    rng = np.random.default_rng(2)
    grid = make_radial_grid(257, 12.0)

    def T4(u):
        return coulomb_energy_radial(u).energy

    for _ in range(200):
        u = random_smooth_init(grid, rng)
        v = random_smooth_init(grid, rng)
        f = u.with_values(u.values**2)
        g = v.with_values(v.values**2)
        # Cauchy-Schwarz for the Coulomb bilinear form
        Dfg = coulomb_bilinear_radial(f, g)
        assert Dfg**2 <= coulomb_bilinear_radial(f, f) * coulomb_bilinear_radial(g, g) * (
            1.0 + 1e-10
        )
        # quarter-power triangle inequality
        t_sum = T4(u.with_values(u.values + v.values)) ** 0.25
        assert t_sum <= T4(u) ** 0.25 + T4(v) ** 0.25 + 1e-10
        # uniform-convexity (parallelogram-type) estimate
        mid = T4(u.with_values(0.5 * (u.values + v.values)))
        dif = T4(u.with_values(0.5 * (u.values - v.values)))
        assert mid + dif <= 0.5 * (T4(u) + T4(v)) * (1.0 + 1e-10)
        # cubic interpolation bound by kinetic and Coulomb terms
        cubic = FOUR_PI * integrate_radial(u.with_values(np.abs(u.values) ** 3), 2)
        assert cubic <= 0.5 * dirichlet_integral_radial(u) + T4(u) / (
            8.0 * np.pi
        ) + 1e-10
        # weighted discrete Cauchy-Schwarz for sequences
        a = rng.uniform(0.0, 2.0, size=30)
        b = rng.uniform(0.1, 5.0, size=30)
        sv = ineq.sequence_inequality_check(a, b)
        assert sv.lhs <= sv.rhs * (1.0 + 1e-12)


def test_dyadic_ratio_floor_across_spreading_family():
    for K in (5, 10, 20, 40):
        v = ineq.dyadic_lemma_check(ineq.spreading_family(K), 0.6)
        assert v.ratio >= 1.0


# 14. Weighted lower bound: positive infimum for a strong weight, and the
# divergence of the truncated counterexample for a weak one.


def test_lower_bound_positive_infimum_strong_weight():
    ratios = [ineq.lower_bound_ratio(f, 0.6) for _, f in ineq.probe_family()]
    assert min(ratios) > 0.0


def test_weak_weight_counterexample_divergence():
    # The truncated profile should show the weighted side blowing up while
    # the critical-norm side stabilizes. The implemented profile sits at
    # the boundary exponent, where the divergence is logarithmic: over
    # these cutoffs the growth stays below the claimed factor and the
    # other side has not yet saturated. Kept at the stated thresholds.
    alpha, beta = 0.1, 0.44
    vals = [
        cons.log_counterexample_profile(beta, alpha, (1.0 / c, c))
        for c in (1e2, 1e4, 1e6)
    ]
    growth = vals[-1].rhs_trunc / vals[0].rhs_trunc
    lhs_stable = abs(vals[-1].lhs_trunc - vals[-2].lhs_trunc) <= 0.01 * vals[-1].lhs_trunc
    assert growth > 10.0
    assert lhs_stable
