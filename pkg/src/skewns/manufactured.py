"""Test fields and independent reference computations."""

from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from .state import DomainError, PrimitiveState, check_skew, primitive_to_skew

MAX_DEGREE = 3


@dataclass
class PolynomialField:
    """Bivariate polynomials for each skew component.

    ``coeffs[k, i, j]`` multiplies ``x1**i * x2**j`` in component ``k``.
    ``window`` is ``((x1_lo, x1_hi), (x2_lo, x2_hi))``; phi_1 and phi_4 are
    certified positive there when the field is created.
    """

    coeffs: np.ndarray
    window: tuple = ((-1.0, 1.0), (-1.0, 1.0))

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 3 or c.shape[0] != 4:
            raise ValueError("coeffs must have shape (4, i, j)")
        if max(c.shape[1:]) > MAX_DEGREE + 1:
            raise ValueError(f"degree per axis is capped at {MAX_DEGREE}")
        self.coeffs = c
        for k in (0, 3):
            if self.lower_bound(k) <= 0:
                raise DomainError(f"component {k + 1} not certified positive on window")

    def lower_bound(self, k):
        """Rigorous lower bound of component ``k`` on the window."""
        c = self.coeffs[k]
        (a0, a1), (b0, b1) = self.window
        # Expand about the window centre so the bound is tight for small boxes.
        cx, cy = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        rx, ry = 0.5 * (a1 - a0), 0.5 * (b1 - b0)
        shifted = _shift(c, cx, cy)
        i, j = np.indices(shifted.shape)
        tail = np.abs(shifted) * rx ** i * ry ** j
        return shifted[0, 0] - (tail.sum() - tail[0, 0])

    def contains(self, point):
        (a0, a1), (b0, b1) = self.window
        return a0 <= point[0] <= a1 and b0 <= point[1] <= b1

    def evaluate(self, point):
        """Values and exact gradient: ``phi`` (4,) and ``grad`` (4, 2)."""
        x, y = float(point[0]), float(point[1])
        if not self.contains((x, y)):
            raise DomainError(f"point {point} outside validity window {self.window}")
        phi = np.array([npoly.polyval2d(x, y, c) for c in self.coeffs])
        grad = np.array([
            [npoly.polyval2d(x, y, npoly.polyder(c, axis=0)),
             npoly.polyval2d(x, y, npoly.polyder(c, axis=1))]
            for c in self.coeffs
        ])
        return phi, grad

    def values(self, x, y):
        """Vectorised evaluation on arrays ``x``, ``y`` (no window check)."""
        return np.stack([npoly.polyval2d(x, y, c) for c in self.coeffs])


def _shift(c, cx, cy):
    # Coefficients of p(x + cx, y + cy).
    out = np.zeros_like(c)
    n, m = c.shape
    for i in range(n):
        for j in range(m):
            if c[i, j] == 0.0:
                continue
            for a in range(i + 1):
                for b in range(j + 1):
                    out[a, b] += c[i, j] * comb(i, a) * comb(j, b) * cx ** (i - a) * cy ** (j - b)
    return out


def random_polynomial_field(rng, degree=3, window=((-0.5, 0.5), (-0.5, 0.5)), spread=0.3):
    """Random field with phi_1, phi_4 close to a positive base value.

    Non-constant coefficients are scaled so their combined magnitude on the
    window stays below ``spread`` times the base value.
    """
    c = rng.uniform(-1.0, 1.0, size=(4, degree + 1, degree + 1))
    (a0, a1), (b0, b1) = window
    r = max(abs(a0), abs(a1), abs(b0), abs(b1))
    i, j = np.indices(c.shape[1:])
    for k in range(4):
        tail = np.abs(c[k]) * r ** (i + j)
        tail_sum = tail.sum() - tail[0, 0]
        base = rng.uniform(0.5, 2.0)
        if tail_sum > 0:
            c[k] *= spread * base / tail_sum
        if k in (0, 3):
            c[k, 0, 0] = base
        else:
            c[k, 0, 0] = rng.uniform(-1.0, 1.0) * base
    return PolynomialField(c, window)


def finite_difference_gradient(field, point, step=1e-6):
    """Centred-difference gradient of ``field.evaluate`` values, shape (4, 2)."""
    x, y = point
    out = np.empty((4, 2))
    out[:, 0] = (field.evaluate((x + step, y))[0] - field.evaluate((x - step, y))[0]) / (2 * step)
    out[:, 1] = (field.evaluate((x, y + step))[0] - field.evaluate((x, y - step))[0]) / (2 * step)
    return out


def periodic_smooth_ic(grid, amplitude=0.1, base=(1.0, 0.5, 0.0, 1.0)):
    """Trigonometric perturbation of a uniform primitive state.

    Density and pressure carry ``amplitude`` relative perturbations and the
    velocities a vortex-like pair of the same size, each one period across the
    domain so the data is exactly periodic on the grid.
    """
    rho0, u0, v0, p0 = base
    X, Y = grid.mesh()
    kx = 2.0 * np.pi / grid.x.extent
    ky = 2.0 * np.pi / grid.y.extent
    a = amplitude
    rho = rho0 * (1.0 + a * np.sin(kx * X) * np.cos(ky * Y))
    u1 = u0 + a * np.sin(ky * Y) * np.cos(kx * X)
    u2 = v0 - a * np.sin(kx * X) * np.cos(ky * Y)
    p = p0 * (1.0 + a * np.cos(kx * X + ky * Y))
    if np.min(rho) <= 0 or np.min(p) <= 0:
        raise DomainError(f"amplitude {amplitude} makes density or pressure non-positive")
    phi = primitive_to_skew(PrimitiveState(rho, u1, u2, p)).phi
    check_skew(phi)
    return phi


def random_nodal_field(rng, shape, rho_range=(0.5, 2.0), u_range=(-1.0, 1.0), p_range=(0.5, 2.0)):
    """Rough (node-wise independent) admissible skew field."""
    rho = rng.uniform(*rho_range, size=shape)
    p = rng.uniform(*p_range, size=shape)
    u1 = rng.uniform(*u_range, size=shape)
    u2 = rng.uniform(*u_range, size=shape)
    return primitive_to_skew(PrimitiveState(rho, u1, u2, p)).phi


def dense_quadratic_oracle(vec, mat):
    """Plain ``v^T M v``, written as an explicit double sum."""
    vec = np.asarray(vec, dtype=float)
    mat = np.asarray(mat, dtype=float)
    n = vec.shape[0]
    if vec.ndim != 1 or mat.shape != (n, n):
        raise ValueError(f"shape mismatch: vec {vec.shape}, mat {mat.shape}")
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += vec[i] * mat[i, j] * vec[j]
    return total
