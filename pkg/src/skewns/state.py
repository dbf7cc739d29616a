"""Variable sets for the 2D compressible flow problem and exact maps between them.

Three state descriptions are used throughout the package:

* primitive ``(rho, u1, u2, p)``
* skew ``phi = (sqrt(rho), sqrt(rho) u1, sqrt(rho) u2, sqrt(p))``
* conservative ``(rho, m1, m2, E)`` with ``E = p/(gamma-1) + rho |u|^2 / 2``

All containers accept scalars or numpy arrays of a common shape, so the same
functions act on a single node or on a whole grid. A skew field on an
``nx x ny`` grid is simply a ``SkewState`` whose ``phi`` has shape
``(4, nx, ny)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

RHO_FLOOR = 1e-12
P_FLOOR = 1e-12


class DomainError(ValueError):
    """Raised when a state or parameter leaves the admissible region."""


@dataclass(frozen=True)
class GasParams:
    """Ideal gas with constant transport coefficients."""

    gamma: float = 1.4
    gas_constant: float = 1.0
    mu: float = 0.0
    lambda_visc: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not 1.0 < self.gamma < 2.0:
            raise DomainError(f"gamma must lie in (1, 2), got {self.gamma}")
        if self.gas_constant <= 0:
            raise DomainError("gas_constant must be positive")
        if self.mu < 0 or self.kappa < 0:
            raise DomainError("mu and kappa must be non-negative")
        if 3.0 * self.lambda_visc + 2.0 * self.mu < -1e-15 * max(1.0, self.mu):
            raise DomainError("3*lambda_visc + 2*mu must be non-negative")

    @classmethod
    def stokes(cls, gamma=1.4, gas_constant=1.0, mu=0.0, prandtl=0.72):
        """Gas with lambda = -2/3 mu and kappa chosen from a Prandtl number."""
        kappa = gamma * gas_constant * mu / ((gamma - 1.0) * prandtl)
        return cls(gamma, gas_constant, mu, -2.0 * mu / 3.0, kappa)

    @property
    def theta(self):
        """Heat-flux coefficient (gamma-1) kappa / R used at boundaries."""
        return (self.gamma - 1.0) * self.kappa / self.gas_constant

    @property
    def inviscid(self):
        return self.mu == 0 and self.lambda_visc == 0 and self.kappa == 0


@dataclass(frozen=True)
class PrimitiveState:
    rho: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class ConservativeState:
    rho: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    E: np.ndarray


@dataclass(frozen=True)
class SkewState:
    """The skew variables ``phi`` with leading axis of length 4."""

    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.shape[:1] != (4,):
            raise ValueError(f"phi must have leading dimension 4, got {phi.shape}")
        object.__setattr__(self, "phi", phi)

    @property
    def shape(self):
        return self.phi.shape[1:]

    @property
    def u1(self):
        return self.phi[1] / self.phi[0]

    @property
    def u2(self):
        return self.phi[2] / self.phi[0]


def _first_bad(mask):
    idx = np.argwhere(np.atleast_1d(mask))
    return tuple(int(i) for i in idx[0]) if idx.size else None


def check_positive(name, value, floor):
    """Reject values below ``floor``; the error names the first offending node."""
    value = np.asarray(value, dtype=float)
    bad = ~(value >= floor)
    if bad.any():
        where = _first_bad(bad)
        raise DomainError(
            f"{name} below floor {floor:g} at node {where}: "
            f"{np.atleast_1d(value)[where]!r}"
        )


def check_skew(phi, floor=None):
    """Validate that phi_1 and phi_4 are strictly positive (above sqrt floors)."""
    phi = np.asarray(phi, dtype=float)
    check_positive("phi_1", phi[0], np.sqrt(RHO_FLOOR) if floor is None else floor)
    check_positive("phi_4", phi[3], np.sqrt(P_FLOOR) if floor is None else floor)
    if not np.isfinite(phi).all():
        raise DomainError(f"non-finite value at node {_first_bad(~np.isfinite(phi))}")


def primitive_to_skew(v: PrimitiveState, rho_floor=RHO_FLOOR, p_floor=P_FLOOR) -> SkewState:
    check_positive("rho", v.rho, rho_floor)
    check_positive("p", v.p, p_floor)
    rho, u1, u2, p = np.broadcast_arrays(*(np.asarray(a, float) for a in (v.rho, v.u1, v.u2, v.p)))
    sr = np.sqrt(rho)
    return SkewState(np.stack([sr, sr * u1, sr * u2, np.sqrt(p)]))


def skew_to_primitive(s: SkewState) -> PrimitiveState:
    phi = s.phi
    check_skew(phi, floor=np.finfo(float).tiny)
    return PrimitiveState(phi[0] ** 2, phi[1] / phi[0], phi[2] / phi[0], phi[3] ** 2)


def primitive_to_conservative(v: PrimitiveState, g: GasParams) -> ConservativeState:
    check_positive("rho", v.rho, RHO_FLOOR)
    check_positive("p", v.p, P_FLOOR)
    rho = np.asarray(v.rho, float)
    m1, m2 = rho * v.u1, rho * v.u2
    E = v.p / (g.gamma - 1.0) + 0.5 * rho * (v.u1 ** 2 + v.u2 ** 2)
    return ConservativeState(rho, m1, m2, E)


def conservative_to_primitive(c: ConservativeState, g: GasParams) -> PrimitiveState:
    check_positive("rho", c.rho, RHO_FLOOR)
    rho = np.asarray(c.rho, float)
    u1, u2 = c.m1 / rho, c.m2 / rho
    internal = c.E - 0.5 * (c.m1 ** 2 + c.m2 ** 2) / rho
    check_positive("internal energy", internal, P_FLOOR / (g.gamma - 1.0))
    return PrimitiveState(rho, u1, u2, (g.gamma - 1.0) * internal)


def unit_normal(n, tol=1e-12):
    n = np.asarray(n, dtype=float)
    if n.shape[:1] != (2,):
        raise DomainError("normal must be a 2-vector")
    if n.ndim == 1:
        if abs(math.hypot(n[0], n[1]) - 1.0) > tol:
            raise DomainError(f"normal is not of unit length: {n}")
    elif np.any(np.abs(np.hypot(n[0], n[1]) - 1.0) > tol):
        raise DomainError(f"normal is not of unit length: {n}")
    return n


def flow_characterization(v: PrimitiveState, n, g: GasParams):
    """Return ``(c, u_n, M_n)``: sound speed, normal velocity and normal Mach number."""
    n = unit_normal(n)
    check_positive("rho", v.rho, RHO_FLOOR)
    check_positive("p", v.p, P_FLOOR)
    c = np.sqrt(g.gamma * np.asarray(v.p, float) / v.rho)
    u_n = n[0] * v.u1 + n[1] * v.u2
    return c, u_n, u_n / c
