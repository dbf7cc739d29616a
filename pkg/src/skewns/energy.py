"""Discrete energy audit: the P-weighted norm, its semi-discrete rate and the surface terms.

For any admissible nodal field on a diagonal-norm SBP grid,

    2 <phi, rhs(phi)>_{P x H} + surface_inviscid - surface_viscous = 0

up to round-off, with no volume remainder. On periodic grids both surface
terms vanish.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .coeffs import build_Atilde, build_P
from .sbp import Grid2D, boundary_quadrature, inner_product
from .solver import full_rhs, viscous_terms
from .state import GasParams


@dataclass
class EnergyBalanceReport:
    energy: float
    rate_measured: float
    surface_inviscid: float
    surface_viscous: float
    residual: float
    mass: float = float("nan")
    total_energy: float = float("nan")

    @property
    def scale(self):
        return max(abs(self.rate_measured), abs(self.surface_inviscid),
                   abs(self.surface_viscous), abs(self.energy))

    @property
    def relative_residual(self):
        s = self.scale
        return abs(self.residual) / s if s > 0 else abs(self.residual)

    def to_dict(self):
        return asdict(self)


def energy_norm(phi, grid: Grid2D, g: GasParams, alpha_sq=1.0):
    return inner_product(grid, build_P(g, alpha_sq), phi, phi)


def measured_rate(phi, tendency, grid: Grid2D, g: GasParams, alpha_sq=1.0):
    """``2 <phi, phi_t>_{P x H}``, the exact time derivative of :func:`energy_norm`."""
    return 2.0 * inner_product(grid, build_P(g, alpha_sq), phi, tendency)


def surface_terms(phi, grid: Grid2D, g: GasParams, alpha_sq=1.0, terms=None):
    """Return ``(inviscid, viscous)`` surface integrals over the bounded faces.

    ``inviscid`` integrates ``phi^T (n_j A_j) phi``; ``viscous`` integrates
    ``(gamma-1)(u_i tau_ij n_j + kappa dT/dn)`` using one-sided boundary
    derivatives from the grid operators.
    """
    phi = np.asarray(phi, dtype=float)
    A1 = build_Atilde(phi, g, 1, alpha_sq)
    A2 = build_Atilde(phi, g, 2, alpha_sq)
    quad1 = np.einsum("i...,ij...,j...->...", phi, A1, phi)
    quad2 = np.einsum("i...,ij...,j...->...", phi, A2, phi)

    def inviscid(name, n):
        idx = grid.face_slice(name)
        return n[0] * quad1[idx] + n[1] * quad2[idx]

    surf_inv = boundary_quadrature(grid, inviscid)
    if g.inviscid:
        return surf_inv, 0.0

    vt = terms if terms is not None else viscous_terms(phi, grid, g)
    # traction_j = u_i tau_ij, heat_j = kappa dT/dx_j
    work = np.einsum("i...,ij...->j...", vt.velocity, vt.tau) + g.kappa * vt.grad_T

    def viscous(name, n):
        idx = grid.face_slice(name)
        return (g.gamma - 1.0) * (n[0] * work[0][idx] + n[1] * work[1][idx])

    return surf_inv, boundary_quadrature(grid, viscous)


def conserved_integrals(phi, grid: Grid2D, g: GasParams):
    """``(integral of rho, integral of total energy)`` for inspection."""
    rho = phi[0] ** 2
    E = phi[3] ** 2 / (g.gamma - 1.0) + 0.5 * (phi[1] ** 2 + phi[2] ** 2)
    return grid.integrate(rho), grid.integrate(E)


def balance_residual(phi, grid: Grid2D, g: GasParams, alpha_sq=1.0, tendency=None):
    phi = np.asarray(phi, dtype=float)
    if tendency is None:
        tendency = full_rhs(phi, grid, g)
    energy = energy_norm(phi, grid, g, alpha_sq)
    rate = measured_rate(phi, tendency, grid, g, alpha_sq)
    if grid.bounded:
        s_inv, s_visc = surface_terms(phi, grid, g, alpha_sq)
    else:
        s_inv, s_visc = 0.0, 0.0
    mass, total = conserved_integrals(phi, grid, g)
    return EnergyBalanceReport(energy, rate, s_inv, s_visc, rate + s_inv - s_visc, mass, total)
