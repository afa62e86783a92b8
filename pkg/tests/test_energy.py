"""Tests for the energy functional, its gradient and the exact scalings."""

import numpy as np
import pytest

from spslab.energy import (
    EnergyBreakdown,
    Params,
    dilate,
    dirichlet_integral_radial,
    e_norm,
    energy_gradient,
    eval_I,
    eval_J,
    lumped_weights_radial,
    m_functional,
    params_after_rescale,
    residual,
    scale_to_limit,
)
from spslab.grid import BoxGrid, Field3D, integrate_radial, make_radial_grid, sample_radial
from spslab.minimize import gaussian_init_3d, random_smooth_init

FOUR_PI = 4.0 * np.pi


def test_params_validation():
    with pytest.raises(ValueError):
        Params(p=2.0)
    with pytest.raises(ValueError):
        Params(p=6.5)
    with pytest.raises(ValueError):
        Params(p=2.5, lam=-1.0)
    with pytest.raises(ValueError):
        Params(p=2.5, omega=-0.1)


def test_breakdown_total_and_signs():
    grid = make_radial_grid(513, 10.0)
    u = sample_radial(lambda r: np.exp(-(r**2)), grid)
    b = eval_I(u, Params(p=2.7, lam=0.4, omega=1.0))
    assert b.total == pytest.approx(b.kinetic + b.mass + b.coulomb + b.power)
    assert b.kinetic > 0 and b.mass > 0 and b.coulomb > 0 and b.power < 0


def test_eval_J_is_static_case():
    grid = make_radial_grid(257, 8.0)
    u = sample_radial(lambda r: np.exp(-r), grid)
    a = eval_J(u, 2.8)
    b = eval_I(u, Params(p=2.8, lam=1.0, omega=0.0))
    assert a == b
    assert a.mass == 0.0


def test_dirichlet_integral_gaussian():
    # int |grad u|^2 = 3 pi^{3/2} sigma / 2 for u = exp(-r^2/(2 sigma^2)), sigma=1
    grid = make_radial_grid(4097, 12.0)
    u = sample_radial(lambda r: np.exp(-(r**2) / 2.0), grid)
    exact = 1.5 * np.pi**1.5
    assert dirichlet_integral_radial(u) == pytest.approx(exact, rel=1e-6)


def test_radial_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    grid = make_radial_grid(65, 5.0)
    u = random_smooth_init(grid, rng)
    params = Params(p=2.7, lam=0.5, omega=0.3)
    grad = energy_gradient(u, params)
    for _ in range(5):
        d = rng.standard_normal(grid.n)
        d[-1] = 0.0  # keep the Dirichlet boundary value
        t = 1e-6
        ep = eval_I(u.with_values(u.values + t * d), params).total
        em = eval_I(u.with_values(u.values - t * d), params).total
        assert float(grad @ d) == pytest.approx((ep - em) / (2.0 * t), rel=1e-6, abs=1e-12)


def test_residual_is_gradient_in_lumped_metric():
    grid = make_radial_grid(129, 6.0)
    u = sample_radial(lambda r: np.exp(-r) * (1.0 + r), grid)
    params = Params(p=2.6, lam=1.0, omega=0.5)
    W = lumped_weights_radial(grid)
    res = residual(u, params).values
    assert np.allclose(res * W, energy_gradient(u, params), rtol=1e-12)


def test_3d_gradient_matches_finite_differences():
    rng = np.random.default_rng(2)
    grid = BoxGrid(16, 2.0)
    u = gaussian_init_3d(grid, 2.0, amplitude=1.3, width=0.7)
    params = Params(p=2.7, lam=0.5, omega=0.3)
    grad = energy_gradient(u, params)
    mask = grid.radius() <= 2.0
    for _ in range(3):
        d = rng.standard_normal(u.values.shape) * mask
        t = 1e-6
        ep = eval_I(u.with_values(u.values + t * d), params).total
        em = eval_I(u.with_values(u.values - t * d), params).total
        assert float(np.sum(grad * d)) == pytest.approx((ep - em) / (2.0 * t), rel=1e-5)


def test_dilation_scalings_are_exact():
    grid = make_radial_grid(513, 10.0)
    u = sample_radial(lambda r: np.exp(-(r**2) / 2.0) * (1.0 + 0.3 * r), grid)
    p = 2.8
    lp = FOUR_PI * integrate_radial(u.with_values(np.abs(u.values) ** p), 2)
    for lam in (0.1, 0.7, 10.0):
        v = dilate(u, lam)
        assert m_functional(v) == pytest.approx(lam**3 * m_functional(u), rel=1e-13)
        lp_v = FOUR_PI * integrate_radial(v.with_values(np.abs(v.values) ** p), 2)
        assert lp_v == pytest.approx(lam ** (2.0 * p - 3.0) * lp, rel=1e-13)


def test_blow_up_change_of_variables_energy_identity():
    grid = make_radial_grid(257, 8.0)
    u = sample_radial(lambda r: np.exp(-r), grid)
    p, lam = 2.8, 0.02
    v, eps = scale_to_limit(u, lam, p)
    assert eps == pytest.approx(lam ** ((p - 2.0) / (4.0 * (3.0 - p))))
    lhs = eval_I(v, Params(p=p, lam=1.0, omega=eps**2)).total
    rhs = eps ** ((6.0 - p) / (p - 2.0)) * eval_I(u, Params(p=p, lam=lam, omega=1.0)).total
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_scale_to_limit_rejects_bad_exponent():
    grid = make_radial_grid(64, 2.0)
    u = sample_radial(lambda r: np.exp(-r), grid)
    with pytest.raises(ValueError):
        scale_to_limit(u, 0.5, 3.0)
    with pytest.raises(ValueError):
        scale_to_limit(u, 0.0, 2.8)


def test_params_after_rescale():
    params = Params(p=2.8, lam=0.01, omega=1.0)
    rescaled, eps = params_after_rescale(params)
    assert rescaled.lam == 1.0
    assert rescaled.omega == pytest.approx(eps**2)
    assert rescaled.p == params.p


def test_e_norm_and_m_functional_positive():
    grid = make_radial_grid(257, 6.0)
    u = sample_radial(lambda r: np.exp(-r), grid)
    assert e_norm(u) > 0.0
    assert m_functional(u) > 0.0


def test_csv_row_format():
    b = EnergyBreakdown(kinetic=1.0, mass=0.5, coulomb=0.25, power=-2.0)
    row = b.csv_row(Params(p=2.8, lam=0.1, omega=0.0))
    assert len(row.split(",")) == len(EnergyBreakdown.CSV_HEADER.split(","))
    assert "inf" in row  # R defaults to the whole space
