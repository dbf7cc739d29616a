"""Viscous stresses, dissipation, heat flux and the scaled viscous right-hand side.

Velocity gradients are arrays ``grad[i, j] = d u_i / d x_j`` of shape
``(2, 2, *s)``; stresses use the same layout.
"""

import numpy as np

from .coeffs import build_P
from .state import GasParams, PrimitiveState, check_positive, check_skew, RHO_FLOOR


def stress_tensor(grad, g: GasParams):
    grad = np.asarray(grad, dtype=float)
    div = grad[0, 0] + grad[1, 1]
    tau = g.mu * (grad + np.swapaxes(grad, 0, 1))
    tau[0, 0] = tau[0, 0] + g.lambda_visc * div
    tau[1, 1] = tau[1, 1] + g.lambda_visc * div
    return tau


def dissipation(grad, tau):
    """Dissipation function ``tau_ij du_i/dx_j``."""
    return np.einsum("ij...,ij...->...", np.asarray(tau, float), np.asarray(grad, float))


def viscous_source(tau_div, heat_div, psi, v: PrimitiveState, g: GasParams):
    """Source ``S = (0, div(tau)_1/rho, div(tau)_2/rho, (gamma-1)(div(kappa grad T) + Psi))``."""
    check_positive("rho", v.rho, RHO_FLOOR)
    tau_div = np.asarray(tau_div, dtype=float)
    rho = np.asarray(v.rho, dtype=float)
    s4 = (g.gamma - 1.0) * (np.asarray(heat_div, float) + psi)
    s2 = tau_div[0] / rho
    s3 = tau_div[1] / rho
    s2, s3, s4 = np.broadcast_arrays(s2, s3, s4)
    return np.stack([np.zeros_like(s2), s2, s3, s4])


def skew_scaling(phi):
    """Diagonal of the variable-change scaling ``(1/(2 phi1), phi1, phi1, 1/(2 phi4))``."""
    phi = np.asarray(phi, dtype=float)
    return np.stack([0.5 / phi[0], phi[0], phi[0], 0.5 / phi[3]])


def scaled_rhs(phi, S, g: GasParams, alpha_sq=1.0):
    """``2 P Lambda S`` assembled as a matrix product."""
    phi = np.asarray(phi, dtype=float)
    check_skew(phi)
    P = build_P(g, alpha_sq).reshape((4,) + (1,) * (phi.ndim - 1))
    return 2.0 * P * skew_scaling(phi) * np.asarray(S, dtype=float)


def scaled_rhs_closed_form(phi, tau_div, heat_div, psi, g: GasParams):
    """Closed form ``(gamma-1) (0, div(tau)_1/phi1, div(tau)_2/phi1, (div q + Psi)/phi4)``."""
    phi = np.asarray(phi, dtype=float)
    check_skew(phi)
    tau_div = np.asarray(tau_div, dtype=float)
    gm1 = g.gamma - 1.0
    r2 = gm1 * tau_div[0] / phi[0]
    r3 = gm1 * tau_div[1] / phi[0]
    r4 = gm1 * (np.asarray(heat_div, float) + psi) / phi[3]
    r2, r3, r4 = np.broadcast_arrays(r2, r3, r4)
    return np.stack([np.zeros_like(r2), r2, r3, r4])


def temperature_field(v: PrimitiveState, g: GasParams):
    return np.asarray(v.p, float) / (g.gas_constant * np.asarray(v.rho, float))


def temperature_from_skew(phi, g: GasParams):
    phi = np.asarray(phi, dtype=float)
    return (phi[3] / phi[0]) ** 2 / g.gas_constant
