"""Boundary quadratic form and how many conditions a boundary needs.

Rotates a state to a boundary, assembles the seven-component vector W and the
matrix A, and follows the congruence chain down to a diagonal form. Counting
negative diagonal entries gives the number of boundary conditions, checked
against a dense eigen-decomposition.

Run: python demos/03_boundary_counting.py
"""

import numpy as np

from skewns import GasParams
from skewns import boundary as bnd

g = GasParams(gamma=1.4, mu=0.1, kappa=0.1)
print(f"beta changes sign at Mn^2 = {bnd.critical_mach_sq(g):.6f}")

phi = np.array([1.1, 0.9, -0.3, 1.0])
n = np.array([0.6, 0.8])
tau = np.array([[0.2, 0.05], [0.05, -0.1]])
W, mats, bt = bnd.assemble_boundary_term(phi, n, bnd.rotate_stress(tau, n), psi_n=0.3, g=g)
print("W =", np.round(W.vector, 4))
print(f"W^T A W / w1 = {bt:.10f}")
print(f"block form   = {bnd.block_diagonalize(W, mats).value:.10f}")
v = bnd.congruence_vector(W, mats)
print(f"diagonal     = {v @ (mats.lambda_final * v):.10f}")
print("S22 variant:", mats.variant)

print("\nsign patterns and counts:")
for sign in (1, -1):
    for m2 in (0.25, 0.9, 1.5, 4.0):
        signs = bnd.lambda_signs(sign, m2, g)
        state = bnd.state_with_normal_mach(sign, m2, g)
        dense = bnd.dense_signature(bnd.boundary_matrix(state, (1.0, 0.0), g) / state[0])[1]
        print(f"  u_n {'out' if sign > 0 else 'in '}  Mn^2={m2:<5} "
              f"{''.join('+' if s > 0 else '-' for s in signs)}  "
              f"count={bnd.count_boundary_conditions(sign, m2, g)}  dense={dense}")
