"""Skew-symmetric formulation of the 2D compressible Navier-Stokes equations.

Discrete energy audits with diagonal-norm summation-by-parts operators and
boundary-condition counting from the diagonalised boundary form.
"""

__version__ = "0.1.0"

from .state import (ConservativeState, DomainError, GasParams, PrimitiveState, SkewState,
                    conservative_to_primitive, flow_characterization, primitive_to_conservative,
                    primitive_to_skew, skew_to_primitive)
from .sbp import Grid2D, build_sbp
from .solver import CaseConfig, full_rhs, inviscid_rhs, rk4_step, run_case, viscous_rhs
from .energy import EnergyBalanceReport, balance_residual, energy_norm
from .boundary import count_boundary_conditions, final_lambda

__all__ = [
    "ConservativeState", "DomainError", "GasParams", "PrimitiveState", "SkewState",
    "conservative_to_primitive", "flow_characterization", "primitive_to_conservative",
    "primitive_to_skew", "skew_to_primitive", "Grid2D", "build_sbp", "CaseConfig",
    "full_rhs", "inviscid_rhs", "rk4_step", "run_case", "viscous_rhs",
    "EnergyBalanceReport", "balance_residual", "energy_norm",
    "count_boundary_conditions", "final_lambda",
]
