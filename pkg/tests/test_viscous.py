import numpy as np
import pytest

from skewns.state import GasParams, PrimitiveState, primitive_to_skew
from skewns.viscous import (dissipation, scaled_rhs, scaled_rhs_closed_form, stress_tensor,
                            temperature_field, temperature_from_skew, viscous_source)

G = GasParams(gamma=1.4, mu=1.0, lambda_visc=0.0)


def test_stress_examples():
    np.testing.assert_array_equal(stress_tensor(np.zeros((2, 2)), G), np.zeros((2, 2)))
    np.testing.assert_array_equal(stress_tensor([[1.0, 0.0], [0.0, 0.0]], G), [[2.0, 0.0], [0.0, 0.0]])
    np.testing.assert_array_equal(stress_tensor([[0.0, 1.0], [0.0, 0.0]], G), [[0.0, 1.0], [1.0, 0.0]])


def test_stress_symmetric_and_trace():
    g = GasParams(mu=0.7, lambda_visc=0.3)
    grad = np.random.default_rng(1).normal(size=(2, 2))
    tau = stress_tensor(grad, g)
    assert tau[0, 1] == tau[1, 0]
    assert np.trace(tau) == pytest.approx((2 * 0.7 + 2 * 0.3) * np.trace(grad), rel=1e-14)


def test_dissipation_examples():
    assert dissipation(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0
    grad = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert dissipation(grad, stress_tensor(grad, G)) == 2.0


def test_dissipation_semidefinite_sampling():
    g = GasParams(mu=1.0, lambda_visc=-2.0 / 3.0)
    grads = np.random.default_rng(7).normal(size=(2, 2, 10_000))
    psi = dissipation(grads, stress_tensor(grads, g))
    assert psi.min() >= -1e-14


def test_viscous_source_examples():
    prim = PrimitiveState(4.0, 0.0, 0.0, 1.0)
    np.testing.assert_array_equal(viscous_source([0.0, 0.0], 0.0, 0.0, prim, G), np.zeros(4))
    np.testing.assert_allclose(viscous_source([1.0, 0.0], 0.0, 0.0, prim, G), [0, 0.25, 0, 0])
    s = viscous_source([0.0, 0.0], 1.0, 1.0, prim, G)
    assert s[0] == 0.0 and s[3] == pytest.approx(0.8, rel=1e-15)


def test_scaled_rhs_zero_and_alpha():
    phi = np.array([1.3, 0.1, 0.2, 0.8])
    assert np.all(scaled_rhs(phi, np.zeros(4), G) == 0.0)
    S = np.array([0.0, 0.3, -0.2, 1.1])
    a, b = scaled_rhs(phi, S, G, 1.0), scaled_rhs(phi, S, G, 5.0)
    np.testing.assert_array_equal(a, b)
    assert a[0] == 0.0


def test_scaled_rhs_two_forms():
    rng = np.random.default_rng(4)
    for _ in range(100):
        phi = np.array([rng.uniform(0.5, 2), *rng.normal(size=2), rng.uniform(0.5, 2)])
        tau_div = rng.normal(size=2)
        heat, psi = rng.normal(), abs(rng.normal())
        prim = PrimitiveState(phi[0] ** 2, phi[1] / phi[0], phi[2] / phi[0], phi[3] ** 2)
        S = viscous_source(tau_div, heat, psi, prim, G)
        np.testing.assert_allclose(scaled_rhs(phi, S, G),
                                   scaled_rhs_closed_form(phi, tau_div, heat, psi, G),
                                   rtol=1e-14, atol=1e-15)


def test_temperature():
    assert temperature_field(PrimitiveState(1.0, 0, 0, 1.0), GasParams(gas_constant=1.0)) == 1.0
    g2 = GasParams(gas_constant=2.0)
    assert temperature_field(PrimitiveState(4.0, 0, 0, 9.0), g2) == 1.125
    v = PrimitiveState(1.7, 0.3, 0.1, 2.9)
    assert temperature_from_skew(primitive_to_skew(v).phi, g2) == pytest.approx(
        temperature_field(v, g2), rel=1e-14)
