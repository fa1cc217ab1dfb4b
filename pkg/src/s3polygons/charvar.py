"""Parabolic group cohomology of the n-punctured sphere group.

The group has generators ``gamma_1, ..., gamma_n`` with the single relation
``gamma_1 ... gamma_n = 1`` and a representation sends ``gamma_i`` to
``g_i``.  A parabolic cocycle is fixed by potentials ``x_i`` through
``c(gamma_i) = x_i - Ad_{g_i} x_i`` and extended to words by
``c(ab) = c(a) + Ad_{rho(a)} c(b)``.

Two 2-forms on cocycles are provided: :func:`goldman_form`, the cup product
against the relative fundamental class, and :func:`pullback_form`, the
reduced fusion form evaluated on the tangent vector with ``xi_i = x_i``.
They agree on closed cocycles at closed anchors.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import AnchorMismatch, NotClosed, ProjectionSingular
from .moduli import (CLOSED_TOL, TangentVector, closure_jacobian,
                     closure_residual, side_length)

COCYCLE_TOL = 1e-9
PROJECTION_RANK_TOL = 1e-10


@dataclass(frozen=True)
class ParabolicCocycle:
    x: np.ndarray
    c: np.ndarray
    anchor: object

    @property
    def n(self):
        return len(self.x)

    def closure_defect(self):
        """Norm of ``c(gamma_1 ... gamma_n)``, zero for a genuine cocycle."""
        return float(np.linalg.norm(closure_jacobian(self.anchor.g) @ self.x.reshape(-1)))

    def is_closed(self, tol=COCYCLE_TOL):
        return self.closure_defect() < tol

    def on_word(self, word):
        return evaluate_word(self, word)[1]


def make_cocycle(t, x, project=False):
    """Cocycle with potentials ``x``; ``project`` makes it close by a least-norm shift."""
    x = np.array(x, dtype=float).reshape(t.n, 3)
    if project:
        jac = closure_jacobian(t.g)
        u, s, vt = np.linalg.svd(jac, full_matrices=False)
        if s[-1] <= PROJECTION_RANK_TOL * max(s[0], 1.0):
            raise ProjectionSingular(f"closure map has rank < 3 (sigma_3 = {s[-1]:.3g})")
        flat = x.reshape(-1)
        flat = flat - vt.T @ ((u.T @ (jac @ flat)) / s)
        x = flat.reshape(t.n, 3)
    c = x - su2.adjoint(t.g, x)
    x.setflags(write=False)
    c.setflags(write=False)
    return ParabolicCocycle(x, c, t)


def coboundary(t, x0):
    """Cocycle with every potential equal to ``x0``."""
    return make_cocycle(t, np.tile(np.asarray(x0, dtype=float), (t.n, 1)))


def evaluate_word(c, word):
    """``(rho(w), c(w))`` for a signed generator word; ``-i`` is ``gamma_i^{-1}``."""
    g = c.anchor.g
    rho = su2.ONE.copy()
    val = np.zeros(3)
    for a in word:
        a = int(a)
        if a > 0:
            gi, ci = g[a - 1], c.c[a - 1]
        else:
            gi = su2.conj(g[-a - 1])
            ci = -su2.adjoint(gi, c.c[-a - 1])
        val = val + su2.adjoint(rho, ci)
        rho = su2.normalize(su2.qmul(rho, gi))
    return rho, val


def holonomy(t, word):
    g = [t.g[a - 1] if a > 0 else su2.conj(t.g[-a - 1]) for a in map(int, word)]
    return su2.product(g)


class RelativeFundamentalClass:
    """The 2-chain ``sum_{i=2}^n (gamma_1 ... gamma_{i-1} | gamma_i)``.

    ``terms`` holds ``(prefix length, generator index)`` pairs.  The
    boundary ``d(a|b) = (b) - (ab) + (a)`` is checked to equal
    ``sum_i (gamma_i)`` on construction, with the relator word read as the
    identity, whose 1-chain is zero.
    """

    def __init__(self, n):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        self.terms = tuple((i - 1, i) for i in range(2, n + 1))
        expected = Counter({(i,): 1 for i in range(1, n + 1)})
        if self.boundary() != expected:
            raise AssertionError("fundamental class has the wrong boundary")

    def _reduce(self, word):
        # The relator gamma_1 ... gamma_n is trivial in the group.
        return () if word == tuple(range(1, self.n + 1)) else word

    def boundary(self):
        chain = Counter()
        for k, i in self.terms:
            a = tuple(range(1, k + 1))
            b = (i,)
            for word, sign in ((b, 1), (a + b, -1), (a, 1)):
                word = self._reduce(word)
                if word:
                    chain[word] += sign
        return Counter({w: m for w, m in chain.items() if m != 0})

    def words(self):
        for k, i in self.terms:
            yield tuple(range(1, k + 1)), i


def _same_anchor(c, c2):
    if c.anchor is not c2.anchor and not np.array_equal(c.anchor.g, c2.anchor.g):
        raise AnchorMismatch("cocycles live at different representations")


def _require_closed(c, *others):
    if closure_residual(c.anchor) >= CLOSED_TOL:
        raise NotClosed("anchor representation is not closed")
    for d in (c,) + others:
        if not d.is_closed():
            raise NotClosed(f"cocycle closure defect {d.closure_defect():.3g}")


def _prefix_images(c):
    """``Ad_{g_1 ... g_{i-1}} c(gamma_i)`` for each i, shape (n, 3)."""
    prefixes = su2.prefix_products(c.anchor.g)
    return su2.adjoint(prefixes[:-1], c.c)


def cup11(c, c2):
    """``sum_{j>=2} (c(gamma_1 ... gamma_{j-1}), Ad_{g_1 ... g_{j-1}} c2(gamma_j))``."""
    _same_anchor(c, c2)
    a = _prefix_images(c)
    a2 = _prefix_images(c2)
    partial = np.cumsum(a, axis=0)
    return float(np.sum(partial[:-1] * a2[1:]))


def cup01(c, c2, i):
    """Pairing of ``c`` with the potential of ``c2`` on the peripheral class ``(gamma_i)``."""
    _same_anchor(c, c2)
    g = c.anchor.g[i - 1]
    return -float(su2.killing(c.c[i - 1], su2.adjoint(g, c2.x[i - 1])))


def goldman_form(c, c2):
    """Cup-product form on closed parabolic cocycles."""
    _same_anchor(c, c2)
    _require_closed(c, c2)
    peripheral = sum(cup01(c, c2, i) for i in range(1, c.n + 1))
    return peripheral + cup11(c, c2)


def upsilon_diff(c):
    """Tangent vector with ``xi_i = x_i``, velocity ``x_i g_i - g_i x_i``."""
    return TangentVector(np.array(c.x), c.anchor)


def pullback_form(c, c2):
    """Reduced fusion 2-form on the tangent vectors of two cocycles."""
    _same_anchor(c, c2)
    if closure_residual(c.anchor) >= CLOSED_TOL:
        raise NotClosed("anchor representation is not closed")
    g = c.anchor.g
    local = -0.5 * np.sum((su2.adjoint(su2.conj(g), c.c) + c.c) * c2.x)
    a = _prefix_images(c)
    a2 = _prefix_images(c2)
    pa = np.cumsum(a, axis=0)
    pa2 = np.cumsum(a2, axis=0)
    cross = np.sum(pa[:-1] * a2[1:]) - np.sum(pa2[:-1] * a[1:])
    return float(local + 0.5 * cross)


def form_matrix(form, cocycles):
    k = len(cocycles)
    out = np.zeros((k, k))
    for a in range(k):
        for b in range(k):
            out[a, b] = form(cocycles[a], cocycles[b])
    return out


def goldman_length(t, word):
    """Geodesic length of the holonomy of a non-empty generator word."""
    word = list(word)
    if not word:
        raise ValueError("word must be non-empty")
    return float(side_length(holonomy(t, word)))
