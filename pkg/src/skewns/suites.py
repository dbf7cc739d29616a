"""Randomised identity suites behind ``skewns verify`` and the acceptance tests.

Each suite samples states from a seeded generator, compares two independent
evaluations and returns a :class:`SuiteResult` holding the worst relative
residual and the state that produced it.
"""

from dataclasses import dataclass, field

import numpy as np

from . import boundary as bnd
from .coeffs import build_Atilde, build_B, build_split_matrices, primitive_jacobian, verify_skew_identity
from .manufactured import random_polynomial_field
from .state import GasParams, PrimitiveState
from .viscous import scaled_rhs, scaled_rhs_closed_form, stress_tensor, viscous_source


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    worst: float = 0.0
    worst_state: dict = field(default_factory=dict)
    trials: int = 0
    failures: int = 0
    note: str = ""

    @property
    def passed(self):
        return self.failures == 0 and self.worst <= self.tolerance

    def record(self, value, **state):
        self.trials += 1
        if not np.isfinite(value) or value > self.tolerance:
            self.failures += 1
        if not np.isfinite(value) or value >= self.worst:
            self.worst = float(value)
            self.worst_state = {k: np.asarray(v).tolist() for k, v in state.items()}

    def summary(self):
        return {"name": self.name, "passed": self.passed, "worst": self.worst,
                "tolerance": self.tolerance, "trials": self.trials,
                "failures": self.failures, "worst_state": self.worst_state, "note": self.note}


def random_gas(rng):
    gamma = rng.uniform(1.05, 1.95)
    mu = rng.uniform(0.0, 1.0)
    return GasParams(gamma, rng.uniform(0.5, 2.0), mu, rng.uniform(-2.0 * mu / 3.0, mu),
                     rng.uniform(0.0, 1.0))


def random_phi(rng):
    return np.array([rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0),
                     rng.uniform(-2.0, 2.0), rng.uniform(0.5, 2.0)])


def random_normal(rng):
    a = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([np.cos(a), np.sin(a)])


def perturbed_atilde(delta=1e-6):
    """An ``Atilde`` builder with entry (1, 1) perturbed; for fault injection."""
    def builder(phi, g, direction, alpha_sq=1.0):
        A = build_Atilde(phi, g, direction, alpha_sq)
        A[0, 0] = A[0, 0] + delta
        return A
    return builder


def skew_identity_suite(rng, trials=100, tol=1e-10, degree=3, fault=False):
    res = SuiteResult("skew_identity", tol)
    atilde = perturbed_atilde() if fault else build_Atilde
    for _ in range(trials):
        g = random_gas(rng)
        f = random_polynomial_field(rng, degree=degree)
        (a0, a1), (b0, b1) = f.window
        pt = (rng.uniform(a0, a1), rng.uniform(b0, b1))
        alpha_sq = rng.uniform(0.2, 5.0)
        for d in (1, 2):
            r = verify_skew_identity(f, pt, g, d, alpha_sq, Atilde=atilde)
            res.record(r, gamma=g.gamma, alpha_sq=alpha_sq, axis=d, point=pt,
                       phi=f.evaluate(pt)[0])
    return res


def spectrum_suite(rng, trials=100, tol=1e-10):
    """Eigenvalues of ``B_dir`` equal ``{u, u, u - c, u + c}``."""
    res = SuiteResult("b_spectrum", tol)
    for _ in range(trials):
        g = random_gas(rng)
        phi = random_phi(rng)
        c = np.sqrt(g.gamma) * phi[3] / phi[0]
        for d in (1, 2):
            u = phi[d] / phi[0]
            expected = np.sort([u - c, u, u, u + c])
            ev = np.linalg.eigvals(build_B(phi, g, d))
            prim = np.sort(np.linalg.eigvals(primitive_jacobian(phi, g, d)).real)
            got = np.sort(ev.real)
            err = max(np.abs(got - expected).max(), np.abs(ev.imag).max(),
                      np.abs(prim - expected).max()) / (abs(u) + c)
            res.record(err, gamma=g.gamma, axis=d, phi=phi)
    return res


def alpha_independence_suite(rng, trials=100, tol=1e-14):
    res = SuiteResult("split_alpha_independence", tol)
    for _ in range(trials):
        g = random_gas(rng)
        phi = random_phi(rng)
        a1, a2 = rng.uniform(0.1, 10.0, size=2)
        m1 = np.array(build_split_matrices(phi, g, a1))
        m2 = np.array(build_split_matrices(phi, g, a2))
        err = np.abs(m1 - m2).max() / max(np.abs(m1).max(), 1.0)
        res.record(err, gamma=g.gamma, alpha_sq=(a1, a2), phi=phi)
    return res


def scaled_rhs_suite(rng, trials=100, tol=1e-14):
    res = SuiteResult("scaled_rhs_forms", tol)
    for _ in range(trials):
        g = random_gas(rng)
        phi = random_phi(rng)
        tau_div = rng.normal(size=2)
        heat_div, psi = rng.normal(), abs(rng.normal())
        prim = PrimitiveState(phi[0] ** 2, phi[1] / phi[0], phi[2] / phi[0], phi[3] ** 2)
        S = viscous_source(tau_div, heat_div, psi, prim, g)
        a = scaled_rhs(phi, S, g, rng.uniform(0.2, 5.0))
        b = scaled_rhs_closed_form(phi, tau_div, heat_div, psi, g)
        err = np.abs(a - b).max() / max(np.abs(b).max(), np.finfo(float).tiny)
        res.record(err, gamma=g.gamma, phi=phi)
    return res


def random_boundary_sample(rng, g):
    """State, normal, stress, temperature gradient and psi_n from a random linear field."""
    phi = random_phi(rng)
    n = random_normal(rng)
    tau = stress_tensor(rng.normal(size=(2, 2)), g)
    dphi = rng.normal(size=(4, 2))
    rho, p = phi[0] ** 2, phi[3] ** 2
    grad_T = (2.0 * phi[3] * dphi[3] * rho - p * 2.0 * phi[0] * dphi[0]) / (g.gas_constant * rho ** 2)
    psi_n = ((dphi[3] * phi[0] - phi[3] * dphi[0]) / phi[0] ** 2) @ n
    return phi, n, tau, grad_T, psi_n


def integrand_scale(phi, n, tau, grad_T, g, alpha_sq=1.0):
    An = n[0] * build_Atilde(phi, g, 1, alpha_sq) + n[1] * build_Atilde(phi, g, 2, alpha_sq)
    u = phi[1:3] / phi[0]
    return (np.abs(phi) @ np.abs(An) @ np.abs(phi)
            + (g.gamma - 1.0) * (np.abs(u) @ np.abs(tau) @ np.abs(n) + g.kappa * np.abs(grad_T) @ np.abs(n)))


def bt_equivalence_suite(rng, trials=1000, tol=1e-12):
    res = SuiteResult("bt_equivalence", tol)
    for _ in range(trials):
        g = random_gas(rng)
        phi, n, tau, grad_T, psi_n = random_boundary_sample(rng, g)
        _, _, bt = bnd.assemble_boundary_term(phi, n, bnd.rotate_stress(tau, n), psi_n, g,
                                              diagonalize=False)
        direct = bnd.direct_integrand(phi, n, tau, grad_T, g)
        res.record(abs(bt - direct) / integrand_scale(phi, n, tau, grad_T, g),
                   gamma=g.gamma, phi=phi, normal=n)
    return res


def stress_rotation_suite(rng, trials=1000, tol=1e-14):
    res = SuiteResult("stress_rotation_invariance", tol)
    for _ in range(trials):
        g = random_gas(rng)
        u = rng.normal(size=2)
        n = random_normal(rng)
        tau = stress_tensor(rng.normal(size=(2, 2)), g)
        t = bnd.traction(tau, n)
        N = bnd.rotation(n)
        lhs = u @ t
        rhs = (N @ u) @ np.array(bnd.rotate_stress(tau, n))
        res.record(abs(lhs - rhs) / max(np.abs(u) @ np.abs(t), np.finfo(float).tiny),
                   normal=n, u=u)
    return res


def congruence_suite(rng, trials=1000, tol=1e-10):
    """``BT = (RW)^T Lambda_A (RW)/w1 = (S^T R W)^T Lambda (S^T R W)`` and signature match."""
    res = SuiteResult("congruence_chain", tol)
    signature_mismatch = 0
    variants = set()
    done = 0
    while done < trials:
        g = random_gas(rng)
        phi, n, tau, grad_T, psi_n = random_boundary_sample(rng, g)
        W, mats, bt = bnd.assemble_boundary_term(phi, n, bnd.rotate_stress(tau, n), psi_n, g)
        if mats.degenerate or abs(mats.beta) < 1e-3 or abs(mats.Mn) < 1e-3:
            continue
        done += 1
        variants.add(mats.variant)
        first = bnd.block_diagonalize(W, mats).value
        v = bnd.congruence_vector(W, mats)
        second = float(v @ (mats.lambda_final * v))
        # Scale: sum of magnitudes of the diagonal-form contributions.
        scale = max(abs(bt), float(np.abs(v) @ (np.abs(mats.lambda_final) * np.abs(v))),
                    float(np.abs(W.vector) @ np.abs(mats.A) @ np.abs(W.vector)) / W.w1)
        err = max(abs(first - bt), abs(second - bt)) / scale
        pos, neg, zero = bnd.dense_signature(mats.A / W.w1)
        expected = (int(np.sum(mats.lambda_final > 0)), int(np.sum(mats.lambda_final < 0)), 0)
        if (pos, neg, zero) != expected:
            signature_mismatch += 1
            err = np.inf
        res.record(err, gamma=g.gamma, phi=phi, normal=n, Mn=mats.Mn)
    res.note = f"S22 variants used: {sorted(variants)}; signature mismatches: {signature_mismatch}"
    return res


def dense_count(u_n_sign, Mn_sq, g: GasParams):
    """Negative eigenvalue count of the dense 7x7 boundary matrix at a matching state."""
    phi = bnd.state_with_normal_mach(u_n_sign, Mn_sq, g)
    A = bnd.boundary_matrix(phi, (1.0, 0.0), g)
    return bnd.dense_signature(A / phi[0])[1]


def run_all(seed=0, trials=100, fault=False):
    rng = np.random.default_rng(seed)
    return [
        skew_identity_suite(rng, trials, fault=fault),
        spectrum_suite(rng, trials),
        alpha_independence_suite(rng, trials),
        scaled_rhs_suite(rng, trials),
        stress_rotation_suite(rng, 10 * trials),
        bt_equivalence_suite(rng, 10 * trials),
        congruence_suite(rng, 10 * trials),
    ]
