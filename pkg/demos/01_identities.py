"""Algebraic identities behind the skew-symmetric form.

Draws random cubic polynomial fields, evaluates the skew identity with exact
derivatives and shows that a 1e-6 change in a single coefficient entry is
caught at once. The other suites run by ``skewns verify`` are printed at the end.

Run: python demos/01_identities.py
"""

import numpy as np

from skewns import GasParams
from skewns.coeffs import build_B, build_P, build_split_matrices, dAtilde, verify_skew_identity
from skewns.manufactured import random_polynomial_field
from skewns.suites import perturbed_atilde, run_all

rng = np.random.default_rng(1)
g = GasParams(gamma=1.4)

# One field, one point: the split matrices and B at that state.
field = random_polynomial_field(rng, degree=3)
phi, grad = field.evaluate((0.1, -0.2))
C1, C2, D1, D2 = build_split_matrices(phi, g)
print("phi =", np.round(phi, 4))
# Split form: (C1 + C2) phi_x + (2P)^-1 (d/dx A1) phi reproduces B1 phi_x.
split = (C1 + C2) @ grad[:, 0] + dAtilde(phi, grad[:, 0], g, 1, 1.0) @ phi / (2 * build_P(g))
print("split form matches B1 phi_x:", np.allclose(split, build_B(phi, g, 1) @ grad[:, 0], atol=1e-14))
print("eigenvalues of B1:", np.round(np.sort(np.linalg.eigvals(build_B(phi, g, 1)).real), 4))
u, c = phi[1] / phi[0], np.sqrt(g.gamma) * phi[3] / phi[0]
print("expected u-c, u, u, u+c:", np.round([u - c, u, u, u + c], 4))

# The residual is at round-off for the true coefficients ...
for axis in (1, 2):
    r = verify_skew_identity(field, (0.1, -0.2), g, axis)
    print(f"axis {axis}: relative residual {r:.2e}")

# ... and jumps by ten orders of magnitude under a tiny perturbation.
r = verify_skew_identity(field, (0.1, -0.2), g, 1, Atilde=perturbed_atilde(1e-6))
print(f"perturbed entry: relative residual {r:.2e}")

print("\nall suites:")
for res in run_all(seed=0, trials=50):
    print(" ", res.summary())
