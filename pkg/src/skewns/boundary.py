"""Boundary-term analysis in the normal/tangential frame and boundary-condition counting.

At a boundary point with outward unit normal ``n`` the energy-rate integrand

    phi^T (n_j A_j) phi - (gamma-1) (u_i tau_ij n_j + kappa dT/dn)

is written as ``W^T A W / w1`` with the seven-vector

    W = (phi1 | phi1 u_n, phi1 u_t, phi4 | (gamma-1)/2 tau_n, (gamma-1)/2 tau_t, theta psi_n)

and then brought to diagonal form by congruence. The number of negative
diagonal entries is the number of boundary conditions required.

The viscous block ``w3`` is ordered so that each entry pairs with the matching
entry of ``w2`` (``tau_n`` with ``u_n``, ``tau_t`` with ``u_t``, the heat flux
with ``phi4``); any other order does not reproduce the integrand.
"""

from dataclasses import dataclass

import numpy as np

from .coeffs import build_Atilde
from .state import DomainError, GasParams, check_skew, unit_normal

DEGENERATE_TOL = 1e-12


class DegenerateBoundaryError(DomainError):
    """The boundary matrix has a singular block; counts are undefined here."""

    def __init__(self, reason):
        super().__init__(f"degenerate boundary state: {reason}")
        self.reason = reason


@dataclass(frozen=True)
class RotatedState:
    phi1: float
    phi2r: float
    phi3r: float
    phi4: float

    @property
    def vector(self):
        return np.array([self.phi1, self.phi2r, self.phi3r, self.phi4])

    @property
    def u_n(self):
        return self.phi2r / self.phi1

    @property
    def u_t(self):
        return self.phi3r / self.phi1


def rotation(n):
    """The 2x2 rotation ``N`` taking (x1, x2) components to (normal, tangential)."""
    n = unit_normal(n)
    return np.array([[n[0], n[1]], [-n[1], n[0]]])


def rotate_state(phi, n) -> RotatedState:
    phi = np.asarray(phi, dtype=float)
    check_skew(phi, floor=np.finfo(float).tiny)
    m = rotation(n) @ phi[1:3]
    return RotatedState(phi[0], m[0], m[1], phi[3])


def traction(tau, n):
    """Stress vector ``tau_ij n_j``."""
    return np.asarray(tau, dtype=float) @ unit_normal(n)


def rotate_stress(tau, n):
    """Return ``(tau_n, tau_t)``, the traction in the normal/tangential frame."""
    tau = np.asarray(tau, dtype=float)
    if not np.allclose(tau, tau.T, rtol=0, atol=1e-14 * max(1.0, np.abs(tau).max())):
        raise DomainError("stress tensor must be symmetric")
    tn, tt = rotation(n) @ traction(tau, n)
    return tn, tt


def heat_flux_normal(phi, psi_n, g: GasParams):
    """``(gamma-1) kappa dT/dn`` written as ``2 theta (phi4/phi1) psi_n``."""
    phi = np.asarray(phi, dtype=float)
    check_skew(phi, floor=np.finfo(float).tiny)
    return 2.0 * g.theta * (phi[3] / phi[0]) * psi_n


def beta(Mn_sq, g: GasParams):
    """``(M_n^2 - M*^2) / M_n^2`` with ``M*^2 = 2(gamma-1)/(gamma(2-gamma))``."""
    Mn_sq = np.asarray(Mn_sq, dtype=float)
    if np.any(Mn_sq <= 0):
        raise DegenerateBoundaryError("M_n = 0 (no flow through the boundary)")
    return (Mn_sq - critical_mach_sq(g)) / Mn_sq


def critical_mach_sq(g: GasParams):
    return 2.0 * (g.gamma - 1.0) / (g.gamma * (2.0 - g.gamma))


@dataclass
class BoundaryTermVector:
    w1: float
    w2: np.ndarray
    w3: np.ndarray
    theta: float
    psi_n: float
    tau_n: float
    tau_t: float

    @property
    def vector(self):
        return np.concatenate([[self.w1], self.w2, self.w3])


@dataclass
class BoundaryMatrixSet:
    A: np.ndarray
    A11: float
    A22: np.ndarray
    Mn: float
    beta: float
    S22: np.ndarray | None = None
    Lambda22: np.ndarray | None = None
    lambda_final: np.ndarray | None = None
    variant: str | None = None
    degenerate: str | None = None


def _A22(rot: RotatedState, g: GasParams):
    gm1 = g.gamma - 1.0
    a = 0.5 * gm1 * rot.phi2r
    return np.array([
        [a, 0.0, gm1 * rot.phi4],
        [0.0, a, 0.0],
        [gm1 * rot.phi4, 0.0, (2.0 - g.gamma) * rot.phi2r],
    ])


def boundary_matrix(phi, n, g: GasParams, alpha_sq=1.0):
    """The symmetric 7x7 block matrix of the boundary quadratic form."""
    return _boundary_matrix(rotate_state(phi, n), g, alpha_sq)


def _boundary_matrix(rot: RotatedState, g: GasParams, alpha_sq):
    A = np.zeros((7, 7))
    A[0, 0] = alpha_sq * rot.phi2r
    A[1:4, 1:4] = _A22(rot, g)
    A[1:4, 4:7] = -np.eye(3)
    A[4:7, 1:4] = -np.eye(3)
    return A


def normal_mach(phi, n, g: GasParams):
    return _normal_mach(rotate_state(phi, n), g)


def _normal_mach(rot: RotatedState, g: GasParams):
    c = np.sqrt(g.gamma) * rot.phi4 / rot.phi1
    return rot.u_n / c


def _degeneracy(Mn, g):
    if abs(Mn) <= DEGENERATE_TOL:
        return "u_n = 0"
    if abs(beta(Mn ** 2, g)) <= DEGENERATE_TOL:
        return "beta = 0"
    return None


def assemble_boundary_term(phi, n, stresses, psi_n, g: GasParams, alpha_sq=1.0, diagonalize=True):
    """Return ``(W, matrices, bt)`` with ``bt = W^T A W / w1``.

    ``diagonalize=False`` skips ``S22``, ``Lambda22`` and the final diagonal.
    """
    phi = np.asarray(phi, dtype=float)
    rot = rotate_state(phi, n)
    tau_n, tau_t = stresses
    gm1 = g.gamma - 1.0
    W = BoundaryTermVector(
        w1=rot.phi1,
        w2=np.array([rot.phi2r, rot.phi3r, rot.phi4]),
        w3=np.array([0.5 * gm1 * tau_n, 0.5 * gm1 * tau_t, g.theta * psi_n]),
        theta=g.theta, psi_n=psi_n, tau_n=tau_n, tau_t=tau_t,
    )
    A = _boundary_matrix(rot, g, alpha_sq)
    Mn = _normal_mach(rot, g)
    deg = _degeneracy(Mn, g)
    mats = BoundaryMatrixSet(A=A, A11=A[0, 0], A22=A[1:4, 1:4].copy(), Mn=Mn,
                             beta=beta(Mn ** 2, g) if Mn != 0 else np.nan, degenerate=deg)
    if deg is None and diagonalize:
        diag = diagonalize_A22(phi, n, g)
        mats.S22, mats.Lambda22, mats.variant = diag.S22, diag.Lambda22, diag.variant
        mats.lambda_final = final_lambda(phi, n, g, alpha_sq)
    v = W.vector
    bt = float(v @ A @ v) / W.w1
    return W, mats, bt


def direct_integrand(phi, n, tau, grad_T, g: GasParams, alpha_sq=1.0):
    """Energy-rate surface integrand evaluated in Cartesian components."""
    phi = np.asarray(phi, dtype=float)
    n = unit_normal(n)
    An = n[0] * build_Atilde(phi, g, 1, alpha_sq) + n[1] * build_Atilde(phi, g, 2, alpha_sq)
    u = phi[1:3] / phi[0]
    viscous = u @ np.asarray(tau, float) @ n + g.kappa * np.dot(grad_T, n)
    return float(phi @ An @ phi) - (g.gamma - 1.0) * viscous


@dataclass
class BlockDiagonalForm:
    R: np.ndarray
    RW: np.ndarray
    Lambda_A: np.ndarray
    value: float


def block_matrices(A):
    A11 = A[0, 0]
    A22 = A[1:4, 1:4]
    R = np.zeros((7, 7))
    R[0, 0] = A11
    R[1:4, 1:4] = A22
    R[1:4, 4:7] = -np.eye(3)
    R[4:7, 4:7] = np.eye(3)
    A22inv = np.linalg.inv(A22)
    Lambda_A = np.zeros((7, 7))
    Lambda_A[0, 0] = 1.0 / A11
    Lambda_A[1:4, 1:4] = A22inv
    Lambda_A[4:7, 4:7] = -A22inv
    return R, Lambda_A


def block_diagonalize(W: BoundaryTermVector, mats: BoundaryMatrixSet):
    """First congruence: ``W^T A W = (R W)^T blkdiag(A11^-1, A22^-1, -A22^-1) (R W)``."""
    if mats.degenerate:
        raise DegenerateBoundaryError(mats.degenerate)
    R, Lambda_A = block_matrices(mats.A)
    RW = R @ W.vector
    return BlockDiagonalForm(R, RW, Lambda_A, float(RW @ Lambda_A @ RW) / W.w1)


@dataclass
class A22Diagonalization:
    S22: np.ndarray
    Lambda22: np.ndarray
    verified: bool
    variant: str
    error: float


def _relative_error(X, Y):
    return np.abs(X - Y).max() / max(np.abs(Y).max(), np.finfo(float).tiny)


def diagonalize_A22(phi, n, g: GasParams, tol=1e-10):
    """Factor ``A22^-1 = S22 Lambda22^-1 S22^T`` and check it against a dense inverse.

    Candidate coupling entries ``-2 phi4/phi1`` and ``-2 phi4/phi2r`` are each
    tried in both transpose placements; the first one that reproduces the
    dense inverse within ``tol`` is returned, labelled by ``variant``. Only
    ``-2 phi4/phi2r`` with ``S22 Lambda22^-1 S22^T`` holds for general
    states, and it is returned as unverified if nothing matches.
    """
    rot = rotate_state(phi, n)
    Mn = normal_mach(phi, n, g)
    deg = _degeneracy(Mn, g)
    if deg:
        raise DegenerateBoundaryError(deg)
    a = 0.5 * (g.gamma - 1.0) * rot.phi2r
    Lambda22 = np.diag([a, a, (2.0 - g.gamma) * rot.phi2r * beta(Mn ** 2, g)])
    target = np.linalg.inv(_A22(rot, g))
    Linv = np.diag(1.0 / np.diag(Lambda22))

    def S(entry):
        s = np.eye(3)
        s[0, 2] = entry
        return s

    candidates = [
        ("phi1-coupling", S(-2.0 * rot.phi4 / rot.phi1), False),
        ("phi1-coupling-transposed", S(-2.0 * rot.phi4 / rot.phi1), True),
        ("phi2r-coupling", S(-2.0 * rot.phi4 / rot.phi2r), False),
        ("phi2r-coupling-transposed", S(-2.0 * rot.phi4 / rot.phi2r), True),
    ]
    results = []
    for name, S22, transposed in candidates:
        recon = S22.T @ Linv @ S22 if transposed else S22 @ Linv @ S22.T
        err = _relative_error(recon, target)
        if err <= tol:
            return A22Diagonalization(S22, Lambda22, True, name, err)
        results.append((name, S22, err))
    name, S22, err = results[2]
    return A22Diagonalization(S22, Lambda22, False, name, err)


def lambda_signature_entries(u_n_sign, beta_value, g: GasParams, scale=1.0):
    """Seven diagonal entries ``scale/u_n_sign * (1; L; -L)`` with ``L = diag(2/(g-1), 2/(g-1), 1/((2-g) beta))``."""
    L = np.array([2.0 / (g.gamma - 1.0), 2.0 / (g.gamma - 1.0),
                  1.0 / ((2.0 - g.gamma) * beta_value)])
    return scale * np.sign(u_n_sign) * np.concatenate([[1.0], L, -L])


def final_lambda(phi, n, g: GasParams, alpha_sq=1.0):
    """Diagonal of the fully congruence-diagonalised boundary form."""
    phi = np.asarray(phi, dtype=float)
    rot = rotate_state(phi, n)
    Mn = normal_mach(phi, n, g)
    deg = _degeneracy(Mn, g)
    if deg:
        raise DegenerateBoundaryError(deg)
    u_n = rot.u_n
    entries = lambda_signature_entries(1.0, beta(Mn ** 2, g), g, 1.0 / (rot.phi1 ** 2 * u_n))
    entries[0] /= alpha_sq
    return entries


def congruence_vector(W: BoundaryTermVector, mats: BoundaryMatrixSet):
    """``S^T R W`` with ``S = blkdiag(1, S22, S22)``."""
    if mats.degenerate:
        raise DegenerateBoundaryError(mats.degenerate)
    R, _ = block_matrices(mats.A)
    S = np.eye(7)
    S[1:4, 1:4] = mats.S22
    S[4:7, 4:7] = mats.S22
    return S.T @ (R @ W.vector)


def dense_signature(M, tol=1e-12):
    """``(positive, negative, zero)`` eigenvalue counts of a symmetric matrix."""
    ev = np.linalg.eigvalsh(0.5 * (M + M.T))
    cut = tol * max(np.abs(ev).max(), np.finfo(float).tiny)
    return int(np.sum(ev > cut)), int(np.sum(ev < -cut)), int(np.sum(np.abs(ev) <= cut))


def lambda_signs(u_n_sign, Mn_sq, g: GasParams):
    if u_n_sign == 0:
        raise DegenerateBoundaryError("u_n = 0")
    b = beta(Mn_sq, g)
    if abs(b) <= DEGENERATE_TOL:
        raise DegenerateBoundaryError("beta = 0")
    return np.sign(lambda_signature_entries(u_n_sign, b, g)).astype(int)


def count_boundary_conditions(u_n_sign, Mn_sq, g: GasParams):
    """Number of negative entries of the diagonalised boundary matrix."""
    return int(np.sum(lambda_signs(u_n_sign, Mn_sq, g) < 0))


def state_with_normal_mach(u_n_sign, Mn_sq, g: GasParams, n=(1.0, 0.0), u_t=0.3, rho=1.0, p=1.0):
    """Skew state whose flow through ``n`` has the requested sign and ``M_n^2``."""
    n = unit_normal(n)
    c = np.sqrt(g.gamma * p / rho)
    u_n = np.sign(u_n_sign) * np.sqrt(Mn_sq) * c
    u = u_n * n + u_t * np.array([-n[1], n[0]])
    sr = np.sqrt(rho)
    return np.array([sr, sr * u[0], sr * u[1], np.sqrt(p)])


def sweep_table(g: GasParams, Mn_sq_values, signs=(1, -1)):
    """Rows of the boundary-condition table; degenerate rows carry no count."""
    rows = []
    for s in signs:
        for m2 in Mn_sq_values:
            row = {"gamma": g.gamma, "u_n_sign": int(np.sign(s)), "Mn_sq": float(m2)}
            try:
                b = float(beta(m2, g))
                row["beta"] = b
                signs7 = lambda_signs(s, m2, g)
            except DegenerateBoundaryError as exc:
                row.update({f"entry_{k}": 0 for k in range(1, 8)})
                row.update(bc_count=None, status=f"degenerate: {exc.reason}")
                row.setdefault("beta", float("nan"))
                rows.append(row)
                continue
            row.update({f"entry_{k}": int(v) for k, v in enumerate(signs7, start=1)})
            row.update(bc_count=int(np.sum(signs7 < 0)), status="ok")
            rows.append(row)
    return rows
