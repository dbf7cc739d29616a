import numpy as np
import pytest

from skewns.manufactured import (PolynomialField, dense_quadratic_oracle, finite_difference_gradient,
                                 periodic_smooth_ic, random_nodal_field, random_polynomial_field)
from skewns.sbp import Grid2D
from skewns.state import DomainError


def test_constant_polynomials_zero_derivative():
    c = np.zeros((4, 1, 1))
    c[:, 0, 0] = [1.0, 0.5, 0.2, 2.0]
    phi, grad = PolynomialField(c).evaluate((0.3, -0.2))
    np.testing.assert_array_equal(phi, [1.0, 0.5, 0.2, 2.0])
    assert np.all(grad == 0.0)


def test_linear_value_and_slope():
    c = np.zeros((4, 2, 1))
    c[:, 0, 0] = [2.0, 0.0, 0.0, 1.0]
    c[0, 1, 0] = 0.1
    phi, grad = PolynomialField(c, ((0.0, 2.0), (-1.0, 1.0))).evaluate((1.0, 0.0))
    assert phi[0] == pytest.approx(2.1, rel=1e-15)
    assert grad[0, 0] == pytest.approx(0.1, rel=1e-15)


def test_quotient_rule_vs_finite_difference():
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = random_polynomial_field(rng)
        pt = rng.uniform(-0.4, 0.4, 2)
        phi, grad = f.evaluate(pt)
        exact = (grad[1] * phi[0] - phi[1] * grad[0]) / phi[0] ** 2
        fd = finite_difference_gradient(f, pt, 1e-6)
        approx = (fd[1] * phi[0] - phi[1] * fd[0]) / phi[0] ** 2
        np.testing.assert_allclose(approx, exact, atol=1e-8)


def test_finite_difference_second_order():
    f = random_polynomial_field(np.random.default_rng(1))
    pt = (0.1, -0.2)
    exact = f.evaluate(pt)[1]
    e1 = np.abs(finite_difference_gradient(f, pt, 1e-2) - exact).max()
    e2 = np.abs(finite_difference_gradient(f, pt, 5e-3) - exact).max()
    assert e1 / e2 == pytest.approx(4.0, rel=0.05)


def test_positivity_certificate():
    c = np.zeros((4, 2, 1))
    c[:, 0, 0] = [1.0, 0.0, 0.0, 1.0]
    c[0, 1, 0] = 2.0
    with pytest.raises(DomainError):
        PolynomialField(c, ((-1.0, 1.0), (-1.0, 1.0)))
    f = PolynomialField(c, ((0.0, 1.0), (-1.0, 1.0)))
    assert f.lower_bound(0) >= 0.0


def test_random_fields_positive_on_window():
    rng = np.random.default_rng(2)
    for _ in range(50):
        f = random_polynomial_field(rng)
        x, y = np.meshgrid(np.linspace(-0.5, 0.5, 21), np.linspace(-0.5, 0.5, 21))
        v = f.values(x, y)
        assert v[0].min() > 0 and v[3].min() > 0


def test_outside_window():
    f = random_polynomial_field(np.random.default_rng(3))
    with pytest.raises(DomainError):
        f.evaluate((1.0, 0.0))


def test_degree_cap():
    with pytest.raises(ValueError):
        PolynomialField(np.ones((4, 5, 1)))


def test_periodic_ic():
    grid = Grid2D.build(16, 12, 2.0, 1.0, "periodic", 4)
    phi = periodic_smooth_ic(grid, 0.0)
    assert np.ptp(phi, axis=(1, 2)).max() == 0.0
    phi = periodic_smooth_ic(grid, 0.1)
    assert (phi[0] ** 2).min() >= 0.9 - 1e-14
    with pytest.raises(DomainError):
        periodic_smooth_ic(grid, 1.5)


def test_periodic_ic_wraps():
    # A bounded grid with one extra node reaches x = L and y = L exactly.
    per = Grid2D.build(16, 12, 2.0, 1.0, "periodic", 4)
    closed = Grid2D.build(17, 13, 2.0, 1.0, "bounded", 4)
    a = periodic_smooth_ic(per, 0.1)
    b = periodic_smooth_ic(closed, 0.1)
    np.testing.assert_allclose(b[:, :-1, :-1], a, atol=1e-14)
    np.testing.assert_allclose(b[:, -1], b[:, 0], atol=1e-14)
    np.testing.assert_allclose(b[:, :, -1], b[:, :, 0], atol=1e-14)


def test_random_nodal_field_admissible():
    phi = random_nodal_field(np.random.default_rng(0), (5, 6))
    assert phi.shape == (4, 5, 6)
    assert phi[0].min() > 0 and phi[3].min() > 0


def test_dense_quadratic_oracle():
    v = np.array([1.0, -2.0, 3.0])
    assert dense_quadratic_oracle(v, np.eye(3)) == 14.0
    assert dense_quadratic_oracle(np.zeros(3), np.ones((3, 3))) == 0.0
    rng = np.random.default_rng(4)
    M = rng.normal(size=(7, 7))
    M = M + M.T
    w = rng.normal(size=7)
    assert dense_quadratic_oracle(w, M) == pytest.approx(np.sum(np.outer(w, w) * M), rel=1e-14)
    with pytest.raises(ValueError):
        dense_quadratic_oracle(w, M[:6])
