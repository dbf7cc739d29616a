"""Spatial and temporal convergence on a smooth periodic flow.

Errors are measured against a 512-point reference solution in x. The
order-2 and order-4 operators should show rates near 2 and 4, and RK4 a rate
near 4 in time.

Run: python demos/04_convergence.py
"""

import numpy as np

from skewns import GasParams
from skewns.manufactured import periodic_smooth_ic
from skewns.sbp import Grid2D
from skewns.solver import inviscid_rhs, rk4_step

g = GasParams(gamma=1.4)


def solve(nx, order, dt, T):
    grid = Grid2D.build(nx, 5, 1.0, 1.0, "periodic", order)
    phi = periodic_smooth_ic(grid, 0.1)
    for _ in range(round(T / dt)):
        phi = rk4_step(phi, dt, lambda s: inviscid_rhs(s, grid, g))
    return phi


for order in (2, 4):
    ref = solve(512, order, 1e-3, 0.2)
    errs = [np.abs(solve(nx, order, 1e-3, 0.2) - ref[:, :: 512 // nx]).max() for nx in (16, 32, 64, 128)]
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    print(f"order {order}: errors {['%.2e' % e for e in errs]}  rates {np.round(rates, 2)}")

ref = solve(32, 4, 0.005 / 16, 0.5)
errs = [np.abs(solve(32, 4, dt, 0.5) - ref).max() for dt in (0.02, 0.01, 0.005)]
print(f"RK4: errors {['%.2e' % e for e in errs]}  rates {np.round(np.log2(np.array(errs[:-1]) / errs[1:]), 2)}")
