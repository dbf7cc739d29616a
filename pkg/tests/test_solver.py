import math
import warnings

import numpy as np
import pytest

from skewns.coeffs import build_B
from skewns.sbp import Grid2D
from skewns.solver import (CaseConfig, b_form_rhs, full_rhs, inviscid_rhs, rk4_step, run_case,
                           viscous_rhs)
from skewns.state import DomainError, GasParams, PrimitiveState, primitive_to_skew

G = GasParams(gamma=1.4)
GV = GasParams(gamma=1.4, mu=0.05, lambda_visc=-0.02, kappa=0.07)


def uniform(grid, rho=1.2, u=0.3, v=-0.1, p=0.9):
    s = grid.shape
    return primitive_to_skew(PrimitiveState(np.full(s, rho), np.full(s, u), np.full(s, v), np.full(s, p))).phi


@pytest.mark.parametrize("kind", ["bounded", "periodic"])
def test_constant_field_zero_tendency(kind):
    grid = Grid2D.build(12, 10, kind=kind, order=4)
    phi = uniform(grid)
    assert np.abs(inviscid_rhs(phi, grid, G)).max() <= 1e-13
    assert np.abs(viscous_rhs(phi, grid, GV)).max() <= 1e-13


def test_inviscid_gas_has_no_viscous_tendency():
    grid = Grid2D.build(9, 9, order=4)
    phi = np.random.default_rng(0).uniform(0.5, 1.5, size=(4, 9, 9))
    assert np.all(viscous_rhs(phi, grid, G) == 0.0)


def test_linear_velocity_viscous():
    grid = Grid2D.build(11, 9, order=4)
    X, _ = grid.mesh()
    a, rho, p = 0.7, 1.3, 0.8
    phi = primitive_to_skew(PrimitiveState(np.full(grid.shape, rho), a * X, 0 * X, np.full(grid.shape, p))).phi
    t = viscous_rhs(phi, grid, GV)
    assert np.abs(t[:3]).max() <= 1e-12
    expected = 0.4 * (2 * GV.mu + GV.lambda_visc) * a ** 2 / (2 * np.sqrt(p))
    np.testing.assert_allclose(t[3], expected, rtol=1e-12)


def smooth_field(grid):
    X, Y = grid.mesh()
    k = 2 * np.pi / grid.x.extent
    m = 2 * np.pi / grid.y.extent
    return primitive_to_skew(PrimitiveState(1 + 0.2 * np.sin(k * X) * np.cos(m * Y),
                                            0.4 + 0.1 * np.cos(k * X), 0.1 * np.sin(m * Y),
                                            1 + 0.1 * np.cos(k * X + m * Y))).phi


def exact_tendency(grid):
    X, Y = grid.mesh()
    k = 2 * np.pi / grid.x.extent
    m = 2 * np.pi / grid.y.extent
    rho = 1 + 0.2 * np.sin(k * X) * np.cos(m * Y)
    u = 0.4 + 0.1 * np.cos(k * X)
    v = 0.1 * np.sin(m * Y)
    p = 1 + 0.1 * np.cos(k * X + m * Y)
    drho = (0.2 * k * np.cos(k * X) * np.cos(m * Y), -0.2 * m * np.sin(k * X) * np.sin(m * Y))
    du = (-0.1 * k * np.sin(k * X), 0 * X)
    dv = (0 * X, 0.1 * m * np.cos(m * Y))
    dp = (-0.1 * k * np.sin(k * X + m * Y), -0.1 * m * np.sin(k * X + m * Y))
    sr = np.sqrt(rho)
    # d phi / dx_j by the chain rule
    dphi = [np.stack([drho[j] / (2 * sr), drho[j] * u / (2 * sr) + sr * du[j],
                      drho[j] * v / (2 * sr) + sr * dv[j], dp[j] / (2 * np.sqrt(p))]) for j in range(2)]
    phi = np.stack([sr, sr * u, sr * v, np.sqrt(p)])
    B1, B2 = build_B(phi, G, 1), build_B(phi, G, 2)
    return -(np.einsum("ij...,j...->i...", B1, dphi[0]) + np.einsum("ij...,j...->i...", B2, dphi[1]))


@pytest.mark.parametrize("order", [2, 4])
def test_tendency_converges_to_exact(order):
    errs = []
    for n in (16, 32, 64):
        grid = Grid2D.build(n, n, 1.0, 1.0, "periodic", order)
        err = inviscid_rhs(smooth_field(grid), grid, G) - exact_tendency(grid)
        errs.append(np.abs(err).max())
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert rates.min() >= order - 0.3


def test_split_and_b_forms_agree_under_refinement():
    diffs = []
    for n in (16, 32, 64):
        grid = Grid2D.build(n, n, 1.0, 1.0, "periodic", 4)
        phi = smooth_field(grid)
        diffs.append(np.abs(inviscid_rhs(phi, grid, G) - b_form_rhs(phi, grid, G)).max())
    assert diffs[2] < diffs[1] < diffs[0]
    assert math.log2(diffs[1] / diffs[2]) >= 3.5


def test_rk4_scalar_step():
    y = rk4_step(np.array(1.0), 0.1, lambda y: -y)
    assert y == pytest.approx(sum((-0.1) ** k / math.factorial(k) for k in range(5)), rel=1e-15)
    assert y == pytest.approx(0.9048375, abs=1e-7)


def test_rk4_zero_rhs_bitwise():
    phi = np.random.default_rng(2).uniform(0.5, 1.5, size=(4, 5, 5))
    assert np.array_equal(rk4_step(phi, 0.3, np.zeros_like), phi)


def test_rk4_rejects_bad_dt_and_bad_stage():
    phi = np.ones((4, 3, 3))
    with pytest.raises(ValueError):
        rk4_step(phi, 0.0, np.zeros_like)
    with pytest.raises(DomainError, match="stage"):
        rk4_step(phi, 1.0, lambda s: -10 * np.ones_like(s))


def test_rk4_temporal_order():
    grid = Grid2D.build(16, 5, 1.0, 1.0, "periodic", 4)
    phi0 = smooth_field(grid)

    def solve(dt, T=0.4):
        phi = phi0
        for _ in range(round(T / dt)):
            phi = rk4_step(phi, dt, lambda s: inviscid_rhs(s, grid, G))
        return phi

    ref = solve(0.0025)
    errs = [np.abs(solve(dt) - ref).max() for dt in (0.04, 0.02, 0.01)]
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(rates - 4.0) <= 0.3), rates


def test_run_case_quiescent_isothermal_steady():
    cfg = CaseConfig(nx=17, ny=17, kind="periodic", mu=0.1, kappa=0.1, initial_condition="uniform",
                     u0=0.0, v0=0.0, steps=20, dt=0.01)
    hist = run_case(cfg)
    assert np.abs(hist.final - hist.snapshots[0]).max() <= 1e-13
    assert len(hist.times) == 21 and np.all(np.diff(hist.times) > 0)


@pytest.mark.parametrize("gas", [G, GV])
def test_run_case_periodic_energy_constant(gas):
    cfg = CaseConfig(nx=17, ny=17, kind="periodic", mu=gas.mu, lambda_visc=gas.lambda_visc,
                     kappa=gas.kappa, steps=40, amplitude=0.05)
    hist = run_case(cfg)
    e = np.array([r.energy for r in hist.reports])
    # Coarse grid: only the RK4 error remains in the drift.
    assert abs(e[-1] - e[0]) / e[0] <= 1e-7
    assert max(abs(r.rate_measured) for r in hist.reports) <= 1e-12 * e[0]


def test_run_case_final_time_and_snapshots():
    cfg = CaseConfig(nx=9, ny=9, kind="periodic", final_time=0.05, snapshot_every=2, record_energy=False)
    hist = run_case(cfg)
    assert hist.times[-1] == pytest.approx(0.05, rel=1e-14)
    assert hist.snapshot_times[-1] == hist.times[-1]
    assert not hist.reports


def test_run_case_cfl_warning():
    cfg = CaseConfig(nx=9, ny=9, kind="periodic", steps=1, dt=1.0, record_energy=False,
                     amplitude=0.0)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        try:
            run_case(cfg)
        except DomainError:
            pass
    assert any("CFL" in str(x.message) for x in w)


@pytest.mark.parametrize("kwargs", [dict(extent_x=0.0), dict(dt=-1.0), dict(initial_condition="nope"),
                                    dict(steps=None)])
def test_case_config_invalid(kwargs):
    base = dict(steps=1)
    base.update(kwargs)
    with pytest.raises(ValueError):
        CaseConfig(**base)


def test_full_rhs_is_sum():
    grid = Grid2D.build(9, 9, order=4)
    phi = smooth_field(grid)
    np.testing.assert_allclose(full_rhs(phi, grid, GV),
                               inviscid_rhs(phi, grid, GV) + viscous_rhs(phi, grid, GV), atol=1e-15)
