"""Semi-discrete right-hand side of the skew-symmetric Navier-Stokes system.

The inviscid part is the split form ``(C1 phi)_x + C2 phi_x + (D1 phi)_y + D2 phi_y``
with every derivative replaced by the SBP operator of the grid. The viscous
part differentiates nodal velocities and temperature with the same first
derivative operator (wide stencil), so the dissipation function and the
stress divergence telescope exactly in the energy norm.

No boundary closures are applied; on bounded grids the right-hand side is
used for short diagnostic runs that audit the energy rate.
"""

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .coeffs import build_B, build_split_matrices
from .manufactured import periodic_smooth_ic, random_nodal_field
from .sbp import BOUNDED, Grid2D
from .state import DomainError, GasParams, PrimitiveState, check_skew, primitive_to_skew
from .viscous import (dissipation, skew_scaling, stress_tensor, temperature_from_skew,
                      viscous_source)

log = logging.getLogger(__name__)


def _matvec(M, v):
    return np.einsum("ij...,j...->i...", M, v)


def inviscid_rhs(phi, grid: Grid2D, g: GasParams):
    check_skew(phi)
    C1, C2, D1, D2 = build_split_matrices(phi, g)
    return -(grid.dx(_matvec(C1, phi)) + _matvec(C2, grid.dx(phi))
             + grid.dy(_matvec(D1, phi)) + _matvec(D2, grid.dy(phi)))


def b_form_rhs(phi, grid: Grid2D, g: GasParams):
    """Quasilinear form ``-(B1 phi_x + B2 phi_y)``; not energy stable, used for comparison."""
    check_skew(phi)
    return -(_matvec(build_B(phi, g, 1), grid.dx(phi)) + _matvec(build_B(phi, g, 2), grid.dy(phi)))


@dataclass
class ViscousTerms:
    """Nodal viscous quantities, all built from the grid's first-derivative operator."""

    velocity: np.ndarray       # (2, nx, ny)
    grad: np.ndarray           # (2, 2, nx, ny), grad[i, j] = d u_i / d x_j
    tau: np.ndarray            # (2, 2, nx, ny)
    psi: np.ndarray            # (nx, ny)
    temperature: np.ndarray    # (nx, ny)
    grad_T: np.ndarray         # (2, nx, ny)
    tau_div: np.ndarray        # (2, nx, ny)
    heat_div: np.ndarray       # (nx, ny)


def viscous_terms(phi, grid: Grid2D, g: GasParams):
    vel = phi[1:3] / phi[0]
    grad = np.stack([np.stack([grid.dx(vel[i]), grid.dy(vel[i])]) for i in range(2)])
    tau = stress_tensor(grad, g)
    psi = dissipation(grad, tau)
    T = temperature_from_skew(phi, g)
    grad_T = np.stack([grid.dx(T), grid.dy(T)])
    tau_div = np.stack([grid.dx(tau[i, 0]) + grid.dy(tau[i, 1]) for i in range(2)])
    heat_div = grid.dx(g.kappa * grad_T[0]) + grid.dy(g.kappa * grad_T[1])
    return ViscousTerms(vel, grad, tau, psi, T, grad_T, tau_div, heat_div)


def viscous_rhs(phi, grid: Grid2D, g: GasParams):
    check_skew(phi)
    if g.inviscid:
        return np.zeros_like(phi)
    vt = viscous_terms(phi, grid, g)
    prim = PrimitiveState(phi[0] ** 2, vt.velocity[0], vt.velocity[1], phi[3] ** 2)
    S = viscous_source(vt.tau_div, vt.heat_div, vt.psi, prim, g)
    return skew_scaling(phi) * S


def full_rhs(phi, grid: Grid2D, g: GasParams):
    return inviscid_rhs(phi, grid, g) + viscous_rhs(phi, grid, g)


def rk4_step(phi, dt, rhs):
    """Classical four-stage Runge-Kutta step; every stage state is validated."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    k1 = rhs(phi)
    stage = phi + 0.5 * dt * k1
    _check_stage(stage, 2)
    k2 = rhs(stage)
    stage = phi + 0.5 * dt * k2
    _check_stage(stage, 3)
    k3 = rhs(stage)
    stage = phi + dt * k3
    _check_stage(stage, 4)
    k4 = rhs(stage)
    new = phi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_stage(new, "final")
    return new


def _check_stage(phi, stage):
    if np.ndim(phi) < 1 or np.shape(phi)[0] != 4:
        return
    try:
        check_skew(phi)
    except DomainError as exc:
        raise DomainError(f"RK4 stage {stage} left the admissible region: {exc}") from None


def stable_dt(phi, grid: Grid2D, g: GasParams, cfl=0.5):
    """``cfl * h / max(|u| + c)``."""
    speed = np.hypot(phi[1], phi[2]) / phi[0]
    c = np.sqrt(g.gamma) * phi[3] / phi[0]
    return cfl * grid.h / float(np.max(speed + c))


@dataclass
class CaseConfig:
    nx: int = 33
    ny: int = 33
    extent_x: float = 1.0
    extent_y: float = 1.0
    kind: str = "periodic"
    order: int = 4
    gamma: float = 1.4
    gas_constant: float = 1.0
    mu: float = 0.0
    lambda_visc: float = 0.0
    kappa: float = 0.0
    initial_condition: str = "periodic_smooth"
    amplitude: float = 0.1
    rho0: float = 1.0
    u0: float = 0.5
    v0: float = 0.0
    p0: float = 1.0
    seed: int = 0
    steps: int | None = None
    final_time: float | None = None
    dt: float | None = None
    cfl: float = 0.5
    alpha_sq: float = 1.0
    record_energy: bool = True
    snapshot_every: int = 0

    def __post_init__(self):
        if self.extent_x <= 0 or self.extent_y <= 0:
            raise ValueError("extents must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.steps is None and self.final_time is None:
            raise ValueError("set either steps or final_time")
        if self.steps is not None and self.steps < 0:
            raise ValueError("steps must be non-negative")
        if self.initial_condition not in INITIAL_CONDITIONS:
            raise ValueError(f"unknown initial_condition {self.initial_condition!r}; "
                             f"choose from {sorted(INITIAL_CONDITIONS)}")

    @property
    def gas(self):
        return GasParams(self.gamma, self.gas_constant, self.mu, self.lambda_visc, self.kappa)

    def grid(self):
        return Grid2D.build(self.nx, self.ny, self.extent_x, self.extent_y, self.kind, self.order)

    def to_dict(self):
        return asdict(self)


def _ic_uniform(cfg, grid):
    shape = grid.shape
    prim = PrimitiveState(np.full(shape, cfg.rho0), np.full(shape, cfg.u0),
                          np.full(shape, cfg.v0), np.full(shape, cfg.p0))
    return primitive_to_skew(prim).phi


def _ic_periodic_smooth(cfg, grid):
    return periodic_smooth_ic(grid, cfg.amplitude, (cfg.rho0, cfg.u0, cfg.v0, cfg.p0))


def _ic_random(cfg, grid):
    return random_nodal_field(np.random.default_rng(cfg.seed), grid.shape)


INITIAL_CONDITIONS = {
    "uniform": _ic_uniform,
    "periodic_smooth": _ic_periodic_smooth,
    "random": _ic_random,
}


@dataclass
class SolutionHistory:
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    snapshot_times: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    dt: float = 0.0

    @property
    def final(self):
        return self.snapshots[-1]


def run_case(config: CaseConfig, phi0=None):
    """Integrate the configured case with RK4, optionally auditing energy every step."""
    from .energy import balance_residual

    g = config.gas
    grid = config.grid()
    phi = INITIAL_CONDITIONS[config.initial_condition](config, grid) if phi0 is None else np.array(phi0, float)
    check_skew(phi)

    dt_cfl = stable_dt(phi, grid, g, config.cfl)
    if config.steps is not None:
        steps = config.steps
        dt = config.dt if config.dt is not None else dt_cfl
    else:
        dt = config.dt if config.dt is not None else dt_cfl
        steps = max(1, math.ceil(config.final_time / dt - 1e-12))
        dt = config.final_time / steps
    if config.kind == BOUNDED and steps > 0:
        log.info("bounded grid without boundary closures: diagnostic run only")
    if dt > stable_dt(phi, grid, g, 1.0):
        warnings.warn(f"dt={dt:g} exceeds the CFL-1 estimate {stable_dt(phi, grid, g, 1.0):g}",
                      RuntimeWarning, stacklevel=2)

    def rhs(state):
        return full_rhs(state, grid, g)

    hist = SolutionHistory(dt=dt)
    t = 0.0
    hist.times.append(t)
    hist.snapshots.append(phi.copy())
    hist.snapshot_times.append(t)
    if config.record_energy:
        hist.reports.append(balance_residual(phi, grid, g, config.alpha_sq))
    for step in range(1, steps + 1):
        phi = rk4_step(phi, dt, rhs)
        t = step * dt
        hist.times.append(t)
        if config.record_energy:
            hist.reports.append(balance_residual(phi, grid, g, config.alpha_sq))
        if (config.snapshot_every and step % config.snapshot_every == 0) or step == steps:
            if hist.snapshot_times[-1] != t:
                hist.snapshots.append(phi.copy())
                hist.snapshot_times.append(t)
    return hist
