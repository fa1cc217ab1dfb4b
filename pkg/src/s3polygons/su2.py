"""Unit-quaternion model of SU(2) and its Lie algebra.

Group elements are float arrays ``(w, x, y, z)`` of unit norm; algebra
elements are arrays ``(x, y, z)`` read as the pure quaternion
``xi + yj + zk``.  The 2x2 matrix trace of ``g`` is ``2w`` and the form
``-1/2 Tr(uv)`` on su(2) is the Euclidean dot product of coordinates.

Every function accepts a single element or a stack ``(..., 4)`` /
``(..., 3)`` and broadcasts over the leading axes.
"""

import numpy as np

from .errors import AntipodalLog

GroupElement = np.ndarray
AlgebraElement = np.ndarray

# Below this norm the exp/log removable singularities use series.
SERIES_CUTOFF = 1e-6
# trace(g) <= -2 + ANTIPODAL_TOL counts as g = -1 for the logarithm.
ANTIPODAL_TOL = 1e-9
# Products of more than this many factors are renormalized en route.
RENORM_EVERY = 8


def _frozen(a):
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


ONE = _frozen([1.0, 0.0, 0.0, 0.0])
I = _frozen([0.0, 1.0, 0.0, 0.0])
J = _frozen([0.0, 0.0, 1.0, 0.0])
K = _frozen([0.0, 0.0, 0.0, 1.0])
MINUS_ONE = _frozen([-1.0, 0.0, 0.0, 0.0])
BASIS = _frozen(np.eye(3))


def normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def group(w, x, y, z):
    """Unit quaternion from coordinates, renormalized."""
    return normalize(np.array([w, x, y, z], dtype=float))


def algebra(x, y, z):
    return np.array([x, y, z], dtype=float)


def pure(v):
    """Embed algebra coordinates as a pure quaternion."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def im(q):
    return np.asarray(q)[..., 1:]


def re(q):
    return np.asarray(q)[..., 0]


def qmul(a, b):
    """Raw Hamilton product without renormalization."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def mul(a, b):
    """Product of two group elements, renormalized to unit norm."""
    return normalize(qmul(a, b))


def product(elements, start=None):
    """Ordered product ``start * e_1 * e_2 * ...`` (identity if empty)."""
    acc = ONE.copy() if start is None else np.array(start, dtype=float)
    for k, e in enumerate(elements, 1):
        acc = qmul(acc, e)
        if k % RENORM_EVERY == 0:
            acc = normalize(acc)
    return normalize(acc)


def prefix_products(g):
    """Stack ``P_0 = 1, P_k = g_1 ... g_k`` for ``k = 0..n``; shape (n+1, 4)."""
    g = np.asarray(g, dtype=float)
    out = np.empty((len(g) + 1, 4))
    out[0] = ONE
    for k in range(len(g)):
        acc = qmul(out[k], g[k])
        if (k + 1) % RENORM_EVERY == 0:
            acc = normalize(acc)
        out[k + 1] = acc
    return normalize(out)


def conj(q):
    """Quaternion conjugate, which is the inverse on the unit sphere."""
    return np.asarray(q, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


inverse = conj


def trace(g):
    """Trace of the 2x2 SU(2) matrix represented by ``g``."""
    return 2.0 * re(g)


def exp_alg(v):
    """Exponential ``cos|v| + sin|v| v/|v|`` of a pure quaternion."""
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1, keepdims=True)
    small = theta < SERIES_CUTOFF
    safe = np.where(small, 1.0, theta)
    t2 = theta * theta
    sinc = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)
    return normalize(np.concatenate([np.cos(theta), sinc * v], axis=-1))


def log_group(g):
    """Principal logarithm; the result has norm in [0, pi).

    Raises
    ------
    AntipodalLog
        If ``trace(g) <= -2 + 1e-9``.
    """
    g = np.asarray(g, dtype=float)
    if np.any(trace(g) <= -2.0 + ANTIPODAL_TOL):
        raise AntipodalLog("logarithm undefined at -1")
    w = g[..., :1]
    v = g[..., 1:]
    s = np.linalg.norm(v, axis=-1, keepdims=True)
    small = s < SERIES_CUTOFF
    safe = np.where(small, 1.0, s)
    s2 = s * s
    # asin(s)/s near the identity; w > 0 there.
    factor = np.where(small, 1.0 + s2 / 6.0 + 3.0 * s2 * s2 / 40.0,
                      np.arctan2(safe, w) / safe)
    return factor * v


def adjoint(g, v):
    """``Ad_g v = g v g^{-1}`` for an algebra element ``v``."""
    return im(qmul(qmul(g, pure(v)), conj(g)))


def conjugate(g, h):
    """Group-on-group conjugation ``g h g^{-1}``."""
    return normalize(qmul(qmul(g, h), conj(g)))


def killing(u, v):
    """Invariant form ``(u, v) = -1/2 Tr(uv)`` (Euclidean dot product)."""
    return np.sum(np.asarray(u, dtype=float) * np.asarray(v, dtype=float), axis=-1)


def geodesic_distance(p, q):
    """Great-circle distance on the unit 3-sphere, in [0, pi]."""
    d = np.sum(np.asarray(p, dtype=float) * np.asarray(q, dtype=float), axis=-1)
    return np.arccos(np.clip(d, -1.0, 1.0))


def random_unit(rng, size=None):
    """Haar-uniform elements of SU(2)."""
    shape = (4,) if size is None else (size, 4)
    return normalize(rng.standard_normal(shape))


def random_direction(rng, size=None):
    """Uniform unit vectors on the 2-sphere."""
    shape = (3,) if size is None else (size, 3)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)
