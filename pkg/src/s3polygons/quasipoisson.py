"""Bracket calculus on conjugation-invariant functions of holonomy tuples.

For a function ``f`` of ``(g_1, ..., g_n)`` the right derivative ``D_i f``
is the algebra element with ``(D_i f, x) = d/ds f(..., exp(sx) g_i, ...)``
and the left derivative ``D'_i f`` uses ``g_i exp(sx)`` instead; the two
are related by ``D'_i f = Ad_{g_i^{-1}} D_i f``.

The bracket is ``{f, h} = sum_j (D'_j f - D_j f, Psi_j h)`` with
``Psi_j h = sum_{i<j} (D_i h - D'_i h) + D_j h``, and ``{f, h} = df(X_h)``
for the Hamiltonian field ``X_h`` returned by :func:`ham_field`.
Indices are 1-based.
"""

from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import BadIndex
from .moduli import HolonomyTuple, TangentVector

FD_STEP = 1e-5


@dataclass(frozen=True)
class InvariantFunction:
    """A real function on holonomy tuples, optionally with exact gradients.

    ``analytic_gradients(t)`` returns an (n, 3) array of right derivatives
    ``D_i f``; left derivatives follow from ``D'_i = Ad_{g_i^{-1}} D_i``.
    Without it, derivatives are central differences with step 1e-5.
    """

    evaluator: object
    analytic_gradients: object = None
    name: str = "f"

    def __call__(self, t):
        return float(self.evaluator(t))

    def __mul__(self, other):
        return product(self, other)


def _check_index(t, i):
    if not 1 <= i <= t.n:
        raise BadIndex(f"index {i} outside 1..{t.n}")


def _perturbed(t, i, x, side):
    e = su2.exp_alg(x)
    g = np.array(t.g)
    g[i - 1] = su2.qmul(e, g[i - 1]) if side == "right" else su2.qmul(g[i - 1], e)
    return HolonomyTuple(g, t.r, check=False)


def _fd_gradient(f, t, i, side, h=FD_STEP):
    out = np.empty(3)
    for a in range(3):
        step = h * su2.BASIS[a]
        out[a] = (f(_perturbed(t, i, step, side)) - f(_perturbed(t, i, -step, side))) / (2 * h)
    return out


def gradients(f, t):
    """Right and left derivatives at all positions, both shape (n, 3)."""
    if f.analytic_gradients is not None:
        d = np.asarray(f.analytic_gradients(t), dtype=float)
    else:
        d = np.array([_fd_gradient(f, t, i, "right") for i in range(1, t.n + 1)])
    return d, su2.adjoint(su2.conj(t.g), d)


def d_right(f, t, i):
    """``D_i f``: derivative along ``exp(sx) g_i``."""
    _check_index(t, i)
    if f.analytic_gradients is not None:
        return np.asarray(f.analytic_gradients(t), dtype=float)[i - 1]
    return _fd_gradient(f, t, i, "right")


def d_left(f, t, i):
    """``D'_i f``: derivative along ``g_i exp(sx)``."""
    _check_index(t, i)
    if f.analytic_gradients is not None:
        return su2.adjoint(su2.conj(t.g[i - 1]), d_right(f, t, i))
    return _fd_gradient(f, t, i, "left")


def _psi_all(d, dp):
    # Psi_j = sum_{i<j} (D_i - D'_i) + D_j
    shifted = np.cumsum(d - dp, axis=0) - (d - dp)
    return shifted + d


def psi_accum(f, t, j):
    _check_index(t, j)
    d, dp = gradients(f, t)
    return _psi_all(d, dp)[j - 1]


def bracket(f, h, t):
    df, dfp = gradients(f, t)
    psi = _psi_all(*gradients(h, t))
    return float(np.sum((dfp - df) * psi))


def ham_field(f, t):
    """Hamiltonian field of ``f`` with ``xi_j = -Psi_j f``."""
    return TangentVector(-_psi_all(*gradients(f, t)), t)


def invariance_defect(f, t):
    """Norm of ``sum_i (D_i f - D'_i f)``; zero iff ``f`` is infinitesimally invariant."""
    d, dp = gradients(f, t)
    return float(np.linalg.norm(np.sum(d - dp, axis=0)))


def directional_derivative(f, v, h=FD_STEP):
    """Central difference of ``f`` along the class-preserving curve of ``v``."""
    return (f(v.curve(h)) - f(v.curve(-h))) / (2 * h)


# ---- trace words and their combinations

def _parse_word(word):
    letters = [int(a) for a in word]
    if not letters or 0 in letters:
        raise ValueError(f"bad trace word {word!r}")
    return letters


def _word_letters(t, letters):
    q = np.array([t.g[abs(a) - 1] for a in letters])
    neg = np.array(letters) < 0
    q[neg] = su2.conj(q[neg])
    return q


def _prefix_suffix(q):
    m = len(q)
    pre = np.empty((m + 1, 4))
    suf = np.empty((m + 1, 4))
    pre[0] = su2.ONE
    suf[m] = su2.ONE
    for k in range(m):
        pre[k + 1] = su2.qmul(pre[k], q[k])
        suf[m - k - 1] = su2.qmul(q[m - k - 1], suf[m - k])
    return pre, suf


def word_value(t, word):
    """Holonomy of a signed index word; ``-i`` stands for ``g_i^{-1}``."""
    return su2.product(_word_letters(t, _parse_word(word)))


def word_trace_gradient(t, word):
    """Right derivatives of ``tr(W)`` for a signed index word ``W``.

    An occurrence ``A g_i B`` contributes ``-2 Im(g_i B A)`` and an
    occurrence ``A g_i^{-1} B`` contributes ``2 Im(B A g_i^{-1})``.
    """
    letters = _parse_word(word)
    q = _word_letters(t, letters)
    pre, suf = _prefix_suffix(q)
    d = np.zeros((t.n, 3))
    for p, a in enumerate(letters):
        ba = su2.qmul(suf[p + 1], pre[p])
        if a > 0:
            d[a - 1] -= 2.0 * su2.im(su2.qmul(q[p], ba))
        else:
            d[-a - 1] += 2.0 * su2.im(su2.qmul(ba, q[p]))
    return d


def trace_word(word, name=None):
    word = tuple(_parse_word(word))
    return InvariantFunction(
        lambda t: su2.trace(word_value(t, word)),
        lambda t: word_trace_gradient(t, word),
        name or "tr(" + " ".join(map(str, word)) + ")",
    )


def prefix_trace(j):
    """``f_j = tr(g_1 ... g_j)``."""
    return trace_word(range(1, j + 1), name=f"f_{j}")


def compose(outer, d_outer, f, name=None):
    """``outer(f)`` with the chain rule applied to ``f``'s gradients."""
    grads = None
    if f.analytic_gradients is not None:
        grads = lambda t: d_outer(f(t)) * np.asarray(f.analytic_gradients(t))
    return InvariantFunction(lambda t: outer(f(t)), grads, name or f"F({f.name})")


def _length_of_trace(tr):
    return float(np.arccos(np.clip(0.5 * tr, -1.0, 1.0)))


def _d_length_of_trace(tr):
    return -1.0 / np.sqrt(max(4.0 - tr * tr, 1e-300))


def length_function(word, name=None):
    """Geodesic length ``arccos(tr(W)/2)`` of the holonomy of ``word``."""
    return compose(_length_of_trace, _d_length_of_trace, trace_word(word), name)


def product(f, h):
    grads = None
    if f.analytic_gradients is not None and h.analytic_gradients is not None:
        grads = lambda t: (f(t) * np.asarray(h.analytic_gradients(t))
                           + h(t) * np.asarray(f.analytic_gradients(t)))
    return InvariantFunction(lambda t: f(t) * h(t), grads, f"{f.name}*{h.name}")


def linear_combination(coeffs, functions):
    coeffs = [float(c) for c in coeffs]
    functions = list(functions)
    grads = None
    if all(f.analytic_gradients is not None for f in functions):
        grads = lambda t: sum(c * np.asarray(f.analytic_gradients(t))
                              for c, f in zip(coeffs, functions))
    return InvariantFunction(lambda t: sum(c * f(t) for c, f in zip(coeffs, functions)),
                             grads, "lincomb")


def bracket_function(f, h):
    """``{f, h}`` as a function; gradients by finite differences."""
    return InvariantFunction(lambda t: bracket(f, h, t), None, f"{{{f.name},{h.name}}}")


def constant(value=0.0):
    return InvariantFunction(lambda t: value, lambda t: np.zeros((t.n, 3)), "const")


# ---- bivector level

def bivector(t, d_alpha, d_beta):
    """Fusion bivector on covectors given by their right components.

    Left components are ``Ad_{g_i^{-1}}`` of the right ones, as for the
    differential of any function.
    """
    g = t.g
    a = np.asarray(d_alpha, dtype=float)
    b = np.asarray(d_beta, dtype=float)
    ap = su2.adjoint(su2.conj(g), a)
    bp = su2.adjoint(su2.conj(g), b)
    da = ap - a
    db = bp - b
    local = 0.5 * np.sum(ap * b - a * bp)
    cross = 0.0
    acc_a = np.zeros(3)
    acc_b = np.zeros(3)
    for k in range(t.n):
        cross += su2.killing(acc_a, db[k]) - su2.killing(acc_b, da[k])
        acc_a += da[k]
        acc_b += db[k]
    return float(local + 0.5 * cross)


def contraction(t, d_alpha):
    """Right-trivialized vector ``V`` with ``beta(V) = bivector(beta, alpha)``."""
    g = t.g
    a = np.asarray(d_alpha, dtype=float)
    ginv = su2.conj(g)
    delta = su2.adjoint(ginv, a) - a
    before = np.cumsum(delta, axis=0) - delta
    after = np.sum(delta, axis=0) - np.cumsum(delta, axis=0)
    s = before - after
    u = 0.5 * (su2.adjoint(ginv, a) - su2.adjoint(g, a)) + 0.5 * (su2.adjoint(g, s) - s)
    return -u


def moment_one_form(t, x):
    """Right components of ``(x, mu^{-1} d mu)`` for ``mu = g_1 ... g_n``.

    Component i is ``Ad_{g_i ... g_n} x``.
    """
    g = t.g
    n = t.n
    out = np.empty((n, 3))
    tail = su2.ONE.copy()
    for i in range(n - 1, -1, -1):
        tail = su2.qmul(g[i], tail)
        out[i] = su2.adjoint(tail, x)
    return out


def diagonal_generator(t, y):
    """Right-trivialized velocity of ``s -> exp(-sy) g_i exp(sy)``."""
    y = np.asarray(y, dtype=float)
    return su2.adjoint(t.g, y) - y


def moment_compatibility(t, x):
    """Residual of ``w(., mu^*(x, theta)) = (1/2)((1 + Ad_mu) x)`` acting diagonally."""
    x = np.asarray(x, dtype=float)
    lhs = contraction(t, moment_one_form(t, x))
    mu = t.product()
    rhs = diagonal_generator(t, 0.5 * (x + su2.adjoint(mu, x)))
    return float(np.max(np.abs(lhs - rhs)))
