"""Polygons in the 3-sphere as tuples of SU(2) holonomies.

An n-gon with side lengths ``r`` is encoded by its edge holonomies
``(g_1, ..., g_n)`` with ``g_i`` in the conjugacy class ``C_{r_i}``; its
vertices are the prefix products ``g_1 ... g_{k-1}`` applied to a base
point.  The polygon closes iff ``g_1 ... g_n = 1``.

Vertex and edge indices in the public functions are 1-based.
"""

from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import (BadIndex, BadRadius, ClassMismatch, DegeneratePoint,
                     NoSolution, NotClosed)

CLASS_TOL = 1e-9
CLOSED_TOL = 1e-9
DEGENERACY_TOL = 1e-8
RANK_TOL = 1e-8
# Restart when the residual has not halved over this many Newton steps.
STALL_WINDOW = 25
POLISH = 1e-2


def side_length(g):
    """Edge length ``d(1, g) = arccos(tr(g)/2)`` of a holonomy, in [0, pi]."""
    return np.arccos(np.clip(0.5 * su2.trace(g), -1.0, 1.0))


def check_side_lengths(r):
    """Validate a side-length vector; returns a read-only float array."""
    r = np.array(r, dtype=float).reshape(-1)
    if len(r) < 3:
        raise BadRadius(f"need at least 3 sides, got {len(r)}")
    if not np.all(np.isfinite(r)) or np.any(r <= 0.0) or np.any(r >= np.pi):
        raise BadRadius(f"side lengths must lie in (0, pi): {r.tolist()}")
    r.setflags(write=False)
    return r


class HolonomyTuple:
    """Ordered tuple of SU(2) elements, one per polygon edge.

    ``g`` is an (n, 4) array of unit quaternions and ``r`` caches the
    conjugacy class labels.  When ``r`` is passed explicitly each entry is
    checked against it (``check=False`` skips that, e.g. for integrator
    stages that leave the classes to first order).
    """

    __slots__ = ("g", "r")

    def __init__(self, g, r=None, check=True):
        g = np.array(g, dtype=float)
        if g.ndim != 2 or g.shape[1] != 4 or len(g) < 1:
            raise ValueError(f"expected an (n, 4) array, got shape {g.shape}")
        g = su2.normalize(g)
        actual = side_length(g)
        if r is None:
            r = actual
        else:
            r = np.array(r, dtype=float).reshape(-1)
            if len(r) != len(g):
                raise ValueError("side-length labels do not match tuple length")
            if check and np.max(np.abs(actual - r)) > CLASS_TOL:
                bad = int(np.argmax(np.abs(actual - r))) + 1
                raise ClassMismatch(f"entry {bad} is not in class r_{bad}={r[bad - 1]}")
        g.setflags(write=False)
        r.setflags(write=False)
        self.g = g
        self.r = r

    @property
    def n(self):
        return len(self.g)

    def __len__(self):
        return len(self.g)

    def __repr__(self):
        return f"HolonomyTuple(n={self.n}, residual={closure_residual(self):.3g})"

    def product(self):
        return su2.product(self.g)

    def replace(self, g, check=True):
        """New tuple with the same class labels."""
        return HolonomyTuple(g, self.r, check=check)


@dataclass(frozen=True)
class PolygonS3:
    vertices: np.ndarray
    closed: bool


@dataclass(frozen=True)
class TangentVector:
    """Tangent to a product of conjugacy classes in xi-coordinates.

    Component i is the velocity ``xi_i g_i - g_i xi_i`` at ``anchor``.
    """

    xi: np.ndarray
    anchor: HolonomyTuple

    def velocities(self):
        g = self.anchor.g
        x = su2.pure(self.xi)
        return su2.qmul(x, g) - su2.qmul(g, x)

    def right_trivialized(self):
        """``u_i`` with velocity ``u_i g_i``, i.e. ``(1 - Ad_{g_i}) xi_i``."""
        return self.xi - su2.adjoint(self.anchor.g, self.xi)

    def curve(self, eps):
        """Point ``Ad(exp(eps xi_i)) g_i``; stays in every class exactly."""
        e = su2.exp_alg(eps * np.asarray(self.xi))
        g = su2.qmul(su2.qmul(e, self.anchor.g), su2.conj(e))
        return self.anchor.replace(g, check=False)


def tuple_from_entries(entries, r=None):
    return HolonomyTuple(np.array(entries, dtype=float), r)


def closure_residual(t):
    """Euclidean 4-vector distance of ``g_1 ... g_n`` from the identity."""
    return float(np.linalg.norm(t.product() - su2.ONE))


def is_closed(t, tol=CLOSED_TOL):
    return closure_residual(t) < tol


def sample_conjugacy(r, seed=None):
    """Uniform random element of the class ``C_r`` (a 2-sphere)."""
    if not (0.0 < r < np.pi):
        raise BadRadius(f"radius {r} outside (0, pi)")
    rng = np.random.default_rng(seed)
    return su2.exp_alg(r * su2.random_direction(rng))


def _sample_tuple(r, rng):
    u = su2.random_direction(rng, len(r))
    return su2.exp_alg(np.asarray(r)[:, None] * u)


def closure_jacobian(g):
    """3 x 3n matrix of xi -> right-trivialized d(g_1...g_n) (g_1...g_n)^{-1}.

    Column block i is ``Ad_{P_{i-1}} (1 - Ad_{g_i})``; with xi as the
    potentials of a cocycle it evaluates the cocycle closure sum.
    """
    g = np.asarray(g)
    n = len(g)
    prefixes = su2.prefix_products(g)
    jac = np.empty((3, 3 * n))
    for i in range(n):
        cols = su2.BASIS - su2.adjoint(g[i], su2.BASIS)
        jac[:, 3 * i:3 * i + 3] = su2.adjoint(prefixes[i], cols).T
    return jac


def _conjugate_entries(g, xi):
    e = su2.exp_alg(xi)
    return su2.normalize(su2.qmul(su2.qmul(e, g), su2.conj(e)))


def _residual(g):
    return float(np.linalg.norm(su2.product(g) - su2.ONE))


def solve_closure(r, seed=None, tol=1e-10, max_restarts=64, max_iters=500):
    """Find a closed, non-degenerate tuple with side lengths ``r``.

    Random class sampling followed by damped Newton on ``log(g_1...g_n)``;
    each update conjugates the entries, so side lengths are kept exactly.

    Raises
    ------
    NoSolution
        After ``max_restarts`` failed attempts.  Infeasible ``r`` and
        solver failure are not distinguished.
    """
    r = check_side_lengths(r)
    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        g = _sample_tuple(r, rng)
        res = _residual(g)
        history = []
        for it in range(max_iters):
            # Polish past tol; Newton converges quadratically here.
            if res < POLISH * tol:
                break
            history.append(res)
            if it >= STALL_WINDOW and res > 0.5 * history[it - STALL_WINDOW]:
                break
            mu = su2.product(g)
            if su2.trace(mu) <= -2.0 + 1e-6:
                break
            target = -su2.log_group(mu)
            jac = closure_jacobian(g)
            gram = jac @ jac.T
            lam = 1e-12 * np.trace(gram)
            step = jac.T @ np.linalg.solve(gram + lam * np.eye(3), target)
            step = step.reshape(-1, 3)
            alpha = 1.0
            while alpha > 1e-8:
                trial = _conjugate_entries(g, alpha * step)
                trial_res = _residual(trial)
                if trial_res < res:
                    g, res = trial, trial_res
                    break
                alpha *= 0.5
            else:
                break
        if res < tol:
            t = HolonomyTuple(g, r, check=True)
            if not is_degenerate(t):
                return t
    raise NoSolution(f"no closed polygon found for r={r.tolist()}")


def random_closed(n, seed=None, margin=1e-3):
    """Closed non-degenerate tuple with random side lengths.

    Haar-random first n-1 entries; the last closes the product.  Resampled
    until every side length is at least ``margin`` away from 0 and pi.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    rng = np.random.default_rng(seed)
    while True:
        g = np.empty((n, 4))
        g[:-1] = su2.random_unit(rng, n - 1)
        g[-1] = su2.conj(su2.product(g[:-1]))
        r = side_length(g)
        if np.all(r > margin) and np.all(r < np.pi - margin):
            t = HolonomyTuple(g)
            if not is_degenerate(t, tol=1e-4):
                return t


def to_polygon(t, base=su2.ONE):
    """Vertices ``base, g_1 base, g_1 g_2 base, ..., g_1...g_n base``."""
    prefixes = su2.prefix_products(t.g)
    vertices = su2.normalize(su2.qmul(prefixes, base))
    vertices.setflags(write=False)
    return PolygonS3(vertices, closure_residual(t) < CLOSED_TOL)


def diagonal_length(t, i, j):
    """Length of the diagonal joining vertices ``i < j`` (1-based)."""
    n = t.n
    if not (1 <= i < j <= n + 1):
        raise BadIndex(f"need 1 <= i < j <= {n + 1}, got ({i}, {j})")
    return float(side_length(su2.product(t.g[i - 1:j - 1])))


def is_degenerate(t, tol=DEGENERACY_TOL):
    """True iff all edge axes are pairwise parallel.

    Near-central entries (small imaginary part) count as parallel to
    everything.
    """
    v = su2.im(t.g)
    cross = np.cross(v[:, None, :], v[None, :, :])
    return bool(np.all(np.linalg.norm(cross, axis=-1) < tol))


def diagonal_conjugate(k, t):
    """Diagonal K-action ``(Ad_k g_1, ..., Ad_k g_n)``."""
    return t.replace(su2.conjugate(k, t.g), check=False)


def class_plane_basis(g):
    """Orthonormal 3x2 bases of the planes orthogonal to the axes of ``g``.

    Returns shape (n, 3, 2).  These planes parametrize the class tangents
    without the redundant xi-direction along the axis.
    """
    g = np.atleast_2d(g)
    out = np.empty((len(g), 3, 2))
    for i, q in enumerate(g):
        axis = q[1:]
        nrm = np.linalg.norm(axis)
        if nrm < 1e-14:
            out[i] = np.eye(3)[:, :2]
            continue
        axis = axis / nrm
        helper = np.eye(3)[int(np.argmin(np.abs(axis)))]
        a = np.cross(axis, helper)
        a /= np.linalg.norm(a)
        out[i, :, 0] = a
        out[i, :, 1] = np.cross(axis, a)
    return out


def reduced_tangent_basis(t):
    """Orthonormal basis of ``ker d(mu) ∩ (orbit directions)^perp``.

    Each xi_i is restricted to the plane orthogonal to the axis of g_i,
    which parametrizes the class tangent faithfully.  The 2n-6 returned
    vectors represent the tangent space of the reduced moduli space.
    """
    if closure_residual(t) >= CLOSED_TOL:
        raise NotClosed("reduced tangent space needs a closed tuple")
    if is_degenerate(t):
        raise DegeneratePoint("polygon lies on a geodesic")
    n = t.n
    planes = class_plane_basis(t.g)
    lift = np.zeros((3 * n, 2 * n))
    for i in range(n):
        lift[3 * i:3 * i + 3, 2 * i:2 * i + 2] = planes[i]
    closure = closure_jacobian(t.g) @ lift
    orbit = lift.T @ np.tile(np.eye(3), (n, 1))
    constraints = np.vstack([closure, orbit.T])
    _, s, vt = np.linalg.svd(constraints)
    if s[5] <= RANK_TOL * max(s[0], 1.0):
        raise DegeneratePoint(f"constraint rank dropped (sigma_6={s[5]:.3g})")
    null = vt[6:]
    return [TangentVector((lift @ y).reshape(n, 3), t) for y in null]
