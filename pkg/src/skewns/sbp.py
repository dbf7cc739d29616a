"""Diagonal-norm summation-by-parts first-derivative operators.

Bounded operators satisfy ``Q + Q^T = diag(-1, 0, ..., 0, 1)`` and periodic ones
``Q + Q^T = 0``, with ``D = H^{-1} Q``. The order-4 operator uses the classical
diagonal-norm closure (second order at the boundary, fourth in the interior).

Fields on a :class:`Grid2D` carry the two spatial axes last, e.g. ``(nx, ny)``
for scalars or ``(4, nx, ny)`` for skew fields.
"""

from dataclasses import dataclass, field
from fractions import Fraction as F

import numpy as np

BOUNDED = "bounded"
PERIODIC = "periodic"

# Interior stencils of Q (offsets -k..k); the h cancels in Q.
_INTERIOR = {
    2: [F(-1, 2), F(0), F(1, 2)],
    4: [F(1, 12), F(-2, 3), F(0), F(2, 3), F(-1, 12)],
}

_NORM_4 = [F(17, 48), F(59, 48), F(43, 48), F(49, 48)]
_CLOSURE_D_4 = [
    [F(-24, 17), F(59, 34), F(-4, 17), F(-3, 34), F(0), F(0)],
    [F(-1, 2), F(0), F(1, 2), F(0), F(0), F(0)],
    [F(4, 43), F(-59, 86), F(0), F(59, 86), F(-4, 43), F(0)],
    [F(3, 98), F(0), F(-59, 98), F(0), F(32, 49), F(-4, 49)],
]

_MIN_NODES = {(2, BOUNDED): 3, (4, BOUNDED): 8, (2, PERIODIC): 3, (4, PERIODIC): 5}


class ConfigurationError(ValueError):
    pass


@dataclass
class SbpOperator1D:
    n: int
    extent: float
    kind: str
    order: int
    h: float
    weights: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)

    @property
    def H(self):
        return np.diag(self.weights)

    @property
    def boundary_matrix(self):
        return self.Q + self.Q.T

    @property
    def nodes(self):
        return self.h * np.arange(self.n)

    @property
    def bounded(self):
        return self.kind == BOUNDED


def _bounded_Q(order, n):
    Q = [[F(0)] * n for _ in range(n)]
    stencil = _INTERIOR[order]
    k = len(stencil) // 2
    if order == 2:
        norm = [F(1, 2)]
        closure = [[F(-1, 2), F(1, 2)]]
    else:
        norm = _NORM_4
        closure = [[w * d for d in row] for w, row in zip(_NORM_4, _CLOSURE_D_4)]
    nb = len(closure)
    for i in range(nb, n - nb):
        for off, c in zip(range(-k, k + 1), stencil):
            Q[i][i + off] = c
    for i, row in enumerate(closure):
        for j, c in enumerate(row):
            Q[i][j] = c
            Q[n - 1 - i][n - 1 - j] = -c
    weights = [F(1)] * n
    for i, w in enumerate(norm):
        weights[i] = w
        weights[n - 1 - i] = w
    return Q, weights


def _periodic_Q(order, n):
    Q = [[F(0)] * n for _ in range(n)]
    stencil = _INTERIOR[order]
    k = len(stencil) // 2
    for i in range(n):
        for off, c in zip(range(-k, k + 1), stencil):
            Q[i][(i + off) % n] += c
    return Q, [F(1)] * n


def build_sbp(order, n, extent, kind=BOUNDED):
    """Build a 1D operator on ``n`` nodes covering ``[0, extent]``.

    Periodic grids exclude the right end point, so ``h = extent / n``.
    """
    if order not in (2, 4):
        raise ConfigurationError(f"order must be 2 or 4, got {order}")
    if kind not in (BOUNDED, PERIODIC):
        raise ConfigurationError(f"unknown operator kind {kind!r}")
    if n < _MIN_NODES[order, kind]:
        raise ConfigurationError(
            f"{kind} order-{order} operator needs n >= {_MIN_NODES[order, kind]}, got {n}")
    if not extent > 0:
        raise ConfigurationError("extent must be positive")
    if kind == BOUNDED:
        Qf, wf = _bounded_Q(order, n)
        h = extent / (n - 1)
    else:
        Qf, wf = _periodic_Q(order, n)
        h = extent / n
    Q = np.array([[float(c) for c in row] for row in Qf])
    weights = h * np.array([float(w) for w in wf])
    D = Q / weights[:, None]
    return SbpOperator1D(n, float(extent), kind, order, h, weights, Q, D)


def apply_along(D, f, axis):
    """Apply a square matrix along ``axis`` of ``f``."""
    f = np.asarray(f, dtype=float)
    if f.shape[axis] != D.shape[1]:
        raise ValueError(f"axis {axis} of field has length {f.shape[axis]}, operator expects {D.shape[1]}")
    return np.moveaxis(np.tensordot(D, f, axes=([1], [axis])), 0, axis)


# Face name -> (axis of the normal, end index, outward normal)
FACES = {
    "west": (0, 0, (-1.0, 0.0)),
    "east": (0, -1, (1.0, 0.0)),
    "south": (1, 0, (0.0, -1.0)),
    "north": (1, -1, (0.0, 1.0)),
}


@dataclass
class Grid2D:
    x: SbpOperator1D
    y: SbpOperator1D

    @classmethod
    def build(cls, nx, ny, extent_x=1.0, extent_y=1.0, kind=BOUNDED, order=4):
        return cls(build_sbp(order, nx, extent_x, kind), build_sbp(order, ny, extent_y, kind))

    @property
    def shape(self):
        return (self.x.n, self.y.n)

    @property
    def bounded(self):
        return self.x.bounded or self.y.bounded

    @property
    def h(self):
        return min(self.x.h, self.y.h)

    def mesh(self):
        return np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij")

    @property
    def weights(self):
        return np.outer(self.x.weights, self.y.weights)

    def _check(self, f):
        if np.shape(f)[-2:] != self.shape:
            raise ValueError(f"field shape {np.shape(f)} does not match grid {self.shape}")

    def dx(self, f):
        self._check(f)
        return apply_along(self.x.D, f, -2)

    def dy(self, f):
        self._check(f)
        return apply_along(self.y.D, f, -1)

    def diff(self, f, axis):
        """Derivative along spatial axis 1 (x1) or 2 (x2)."""
        return self.dx(f) if axis == 1 else self.dy(f)

    def integrate(self, f):
        self._check(f)
        return float(np.sum(self.weights * f))

    def face_slice(self, name):
        axis, end, _ = FACES[name]
        return (Ellipsis, end, slice(None)) if axis == 0 else (Ellipsis, slice(None), end)

    def face_weights(self, name):
        axis = FACES[name][0]
        return self.y.weights if axis == 0 else self.x.weights

    def faces(self):
        """Yield ``(name, index, normal, weights)`` for every bounded face."""
        for name, (axis, _, normal) in FACES.items():
            op = self.x if axis == 0 else self.y
            if op.bounded:
                yield name, self.face_slice(name), np.array(normal), self.face_weights(name)


def apply_D(grid: Grid2D, field_values, axis):
    return grid.diff(field_values, axis)


def inner_product(grid: Grid2D, p_diag, a, b):
    """``sum_k P_k <a_k, b_k>_H`` for skew fields; ``p_diag=None`` for scalars."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    grid._check(a)
    prod = a * b * grid.weights
    if p_diag is not None:
        prod = np.asarray(p_diag).reshape((-1,) + (1,) * (prod.ndim - 1)) * prod
    return float(np.sum(prod))


def boundary_quadrature(grid: Grid2D, integrand):
    """Surface integral over the bounded faces.

    ``integrand`` maps face names to nodal values along the face (scalars
    broadcast), or is a callable ``f(name, normal) -> values``. Faces missing
    from a mapping contribute nothing.
    """
    if not grid.bounded:
        raise ConfigurationError("periodic grid has no boundary")
    total = 0.0
    for name, _, normal, w in grid.faces():
        if callable(integrand):
            vals = integrand(name, normal)
        elif name in integrand:
            vals = integrand[name]
        else:
            continue
        total += float(np.sum(w * np.broadcast_to(vals, w.shape)))
    return total
