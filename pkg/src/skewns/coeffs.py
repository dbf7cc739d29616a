"""Coefficient matrices of the skew-symmetric formulation.

Matrices are returned with shape ``(4, 4, *s)`` where ``s`` is the shape of the
state, so a single call builds them at every grid node. Axis arguments follow
the usual 1-based convention of the equations (1 for x1, 2 for x2).
"""

import numpy as np

from .state import DomainError, GasParams, SkewState, check_skew


def _phi(phi):
    if isinstance(phi, SkewState):
        phi = phi.phi
    phi = np.asarray(phi, dtype=float)
    check_skew(phi, floor=np.finfo(float).tiny)
    return phi


def _axis(direction):
    if direction not in (1, 2):
        raise ValueError(f"direction must be 1 or 2, got {direction!r}")
    return direction


def build_P(g: GasParams, alpha_sq=1.0):
    """Diagonal of the energy norm: ``(alpha^2, (gamma-1)/2, (gamma-1)/2, 1)``."""
    if not alpha_sq > 0:
        raise DomainError(f"alpha_sq must be positive, got {alpha_sq}")
    half = 0.5 * (g.gamma - 1.0)
    return np.array([alpha_sq, half, half, 1.0])


def build_Atilde(phi, g: GasParams, direction, alpha_sq=1.0):
    phi = _phi(phi)
    d = _axis(direction)
    gam = g.gamma
    u = phi[d] / phi[0]
    A = np.zeros((4, 4) + phi.shape[1:])
    A[0, 0] = alpha_sq * u
    A[1, 1] = 0.5 * (gam - 1.0) * u
    A[2, 2] = 0.5 * (gam - 1.0) * u
    A[3, d] = 2.0 * (gam - 1.0) * phi[3] / phi[0]
    A[3, 3] = (2.0 - gam) * u
    return A


def dAtilde(phi, dphi, g: GasParams, direction, alpha_sq=1.0):
    """Derivative of ``build_Atilde`` along a path with tangent ``dphi`` (chain rule)."""
    phi = _phi(phi)
    dphi = np.asarray(dphi, dtype=float)
    d = _axis(direction)
    gam = g.gamma
    du = (dphi[d] * phi[0] - phi[d] * dphi[0]) / phi[0] ** 2
    dr = (dphi[3] * phi[0] - phi[3] * dphi[0]) / phi[0] ** 2
    A = np.zeros((4, 4) + phi.shape[1:])
    A[0, 0] = alpha_sq * du
    A[1, 1] = 0.5 * (gam - 1.0) * du
    A[2, 2] = 0.5 * (gam - 1.0) * du
    A[3, d] = 2.0 * (gam - 1.0) * dr
    A[3, 3] = (2.0 - gam) * du
    return A


def primitive_jacobian(phi, g: GasParams, direction):
    """Coefficient matrix of ``V_t + A V_x = 0`` for ``V = (rho, u1, u2, p)``."""
    phi = _phi(phi)
    d = _axis(direction)
    rho = phi[0] ** 2
    p = phi[3] ** 2
    u = phi[d] / phi[0]
    A = np.zeros((4, 4) + phi.shape[1:])
    for k in range(4):
        A[k, k] = u
    A[0, d] = rho
    A[d, 3] = 1.0 / rho
    A[3, d] = g.gamma * p
    return A


def skew_jacobian(phi):
    """``M = dPhi/dV`` and its inverse, both in closed form."""
    phi = _phi(phi)
    p1, p2, p3, p4 = phi
    z = np.zeros_like(p1)
    M = np.array([
        [0.5 / p1, z, z, z],
        [0.5 * p2 / p1 ** 2, p1, z, z],
        [0.5 * p3 / p1 ** 2, z, p1, z],
        [z, z, z, 0.5 / p4],
    ])
    Minv = np.array([
        [2.0 * p1, z, z, z],
        [-p2 / p1 ** 2, 1.0 / p1, z, z],
        [-p3 / p1 ** 2, z, 1.0 / p1, z],
        [z, z, z, 2.0 * p4],
    ])
    return M, Minv


def build_B(phi, g: GasParams, direction):
    """Quasilinear matrix of ``Phi_t + B Phi_x = 0``, as ``M A_prim M^-1``."""
    M, Minv = skew_jacobian(phi)
    A = primitive_jacobian(phi, g, direction)
    return np.einsum("ij...,jk...,kl...->il...", M, A, Minv)


def build_split_matrices(phi, g: GasParams, alpha_sq=1.0):
    """Return ``(C1, C2, D1, D2)`` of the split form; independent of ``alpha_sq``."""
    inv2P = 0.5 / build_P(g, alpha_sq)
    A1 = build_Atilde(phi, g, 1, alpha_sq)
    A2 = build_Atilde(phi, g, 2, alpha_sq)
    scale = inv2P.reshape((4, 1) + (1,) * (A1.ndim - 2))
    return (scale * A1, scale * np.swapaxes(A1, 0, 1),
            scale * A2, scale * np.swapaxes(A2, 0, 1))


def verify_skew_identity(field, point, g: GasParams, direction, alpha_sq=1.0,
                         Atilde=build_Atilde):
    """Relative residual of ``(A Phi)_x + A^T Phi_x - 2 P B Phi_x`` at ``point``.

    ``field`` must provide ``evaluate(point) -> (phi, grad)`` with exact first
    derivatives, ``grad[k, axis]``; see :class:`skewns.manufactured.PolynomialField`.
    The derivative of the product is expanded by the chain rule. ``Atilde`` can
    be swapped for a perturbed builder in sensitivity checks.
    """
    d = _axis(direction)
    phi, grad = field.evaluate(point)
    phi = _phi(phi)
    dphi = np.asarray(grad)[:, d - 1]
    A = Atilde(phi, g, d, alpha_sq)
    dA = dAtilde(phi, dphi, g, d, alpha_sq)
    P = build_P(g, alpha_sq)
    B = build_B(phi, g, d)

    lhs_product = dA @ phi + A @ dphi
    lhs_transpose = A.T @ dphi
    rhs = 2.0 * P * (B @ dphi)
    residual = np.linalg.norm(lhs_product + lhs_transpose - rhs)
    scale = max(np.linalg.norm(lhs_product), np.linalg.norm(lhs_transpose),
                np.linalg.norm(rhs))
    if scale == 0.0:
        return float(residual)
    return float(residual / scale)
