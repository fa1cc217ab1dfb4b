"""Bending flows generated by the prefix traces ``f_j = tr(g_1 ... g_j)``.

The flow of ``f_j`` conjugates the first j edges by ``exp(s F_j)`` with
``F_j = 2 Im(g_1 ... g_j)`` and leaves the others alone, which rotates the
first j+1 vertices of the polygon about the diagonal from vertex 1 to
vertex j+1.  The normalized flows of ``ell_j = arccos(f_j / 2)`` are
2 pi periodic and together give an action of the (n-3)-torus.
"""

from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import BadIndex, DegenerateDiagonal
from .moduli import HolonomyTuple, is_closed
from .quasipoisson import ham_field

DIAGONAL_TOL = 1e-9


@dataclass(frozen=True)
class FlowSpec:
    """One bending flow: ``f``-time if not normalized, else ``ell``-angle."""

    j: int
    t: float
    normalized: bool = False

    def apply(self, tup):
        if self.normalized:
            return flow_ell(tup, self.j, self.t)
        return flow_f(tup, self.j, self.t)


def _check_j(t, j):
    if not 1 <= j <= t.n:
        raise BadIndex(f"prefix length {j} outside 1..{t.n}")


def _prefix(t, j):
    _check_j(t, j)
    return su2.product(t.g[:j])


def f_val(t, j):
    return float(su2.trace(_prefix(t, j)))


def f_cap(t, j):
    """``F_j = P - P^{-1} = 2 Im P`` for the prefix product ``P``."""
    return 2.0 * su2.im(_prefix(t, j))


def ell_val(t, j):
    return float(np.arccos(np.clip(0.5 * f_val(t, j), -1.0, 1.0)))


def flow_f(t, j, time):
    e = su2.exp_alg(time * f_cap(t, j))
    g = np.array(t.g)
    g[:j] = su2.conjugate(e, g[:j])
    return HolonomyTuple(g, t.r, check=False)


def _speed(t, j):
    f = f_val(t, j)
    if abs(f) >= 2.0 - DIAGONAL_TOL:
        raise DegenerateDiagonal(f"diagonal {j} is degenerate (f_{j} = {f:.12g})", j=j)
    return np.sqrt(4.0 - f * f)


def period_f(t, j):
    return float(2 * np.pi / _speed(t, j))


def flow_ell(t, j, angle):
    """Flow of ``f_j`` run for time ``angle / sqrt(4 - f_j^2)``."""
    return flow_f(t, j, angle / _speed(t, j))


def torus_action(t, angles, order=None):
    """Apply ``flow_ell(., j, angles[j-2])`` for ``j = 2 .. n-2``.

    ``order`` lists the j values in application order (default ascending).
    """
    angles = np.asarray(angles, dtype=float).reshape(-1)
    if len(angles) != t.n - 3:
        raise ValueError(f"need {t.n - 3} angles, got {len(angles)}")
    js = list(range(2, t.n - 1))
    for j in js:
        _speed(t, j)
    if order is None:
        order = js
    if sorted(order) != js:
        raise ValueError(f"order must be a permutation of {js}")
    for j in order:
        t = flow_ell(t, j, angles[j - 2])
    return t


def integrate_field(f, t, time, steps):
    """RK4 along ``ham_field(f)``, re-projecting entries to unit norm each step."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = time / steps

    def rate(g):
        return ham_field(f, HolonomyTuple(g, t.r, check=False)).velocities()

    g = np.array(t.g)
    for _ in range(steps):
        k1 = rate(g)
        k2 = rate(su2.normalize(g + 0.5 * h * k1))
        k3 = rate(su2.normalize(g + 0.5 * h * k2))
        k4 = rate(su2.normalize(g + h * k3))
        g = su2.normalize(g + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
    return HolonomyTuple(g, t.r, check=False)


def closed_and_regular(t):
    """True iff ``t`` is closed and every fan diagonal j = 2..n-2 is regular."""
    if not is_closed(t):
        return False
    return all(abs(f_val(t, j)) < 2.0 - DIAGONAL_TOL for j in range(2, t.n - 1))
