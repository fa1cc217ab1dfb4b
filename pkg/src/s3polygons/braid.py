"""Braid moves on holonomy tuples and the pure braid generators.

``R`` at position i replaces ``(g_i, g_{i+1})`` by ``(g_i g_{i+1} g_i^{-1}, g_i)``
and ``R'`` is its inverse.  The pure braid generator ``A_ij`` is

    R_{j-1} o ... o R_{i+1} o R_i^2 o R'_{i+1} o ... o R'_{j-1}

and coincides with the flow of ``h_ij = (1/2) ell(g_i g_j)^2`` at time one.
"""

import re
from dataclasses import dataclass

import numpy as np

from . import su2
from .errors import BadIndex, BraidParseError, DegenerateElement
from .moduli import HolonomyTuple, side_length

REGULAR_TOL = 1e-9


def _check_position(t, i):
    if not 1 <= i <= t.n - 1:
        raise BadIndex(f"braid position {i} outside 1..{t.n - 1}")


def _check_pair(t, i, j):
    if not 1 <= i < j <= t.n:
        raise BadIndex(f"need 1 <= i < j <= {t.n}, got ({i}, {j})")


def _swap(t, i, a, b):
    g = np.array(t.g)
    r = np.array(t.r)
    g[i - 1], g[i] = a, b
    r[i - 1], r[i] = r[i], r[i - 1]
    return HolonomyTuple(g, r, check=False)


def r_move(t, i):
    _check_position(t, i)
    a, b = t.g[i - 1], t.g[i]
    return _swap(t, i, su2.conjugate(a, b), a)


def r_prime_move(t, i):
    _check_position(t, i)
    a, b = t.g[i - 1], t.g[i]
    return _swap(t, i, b, su2.conjugate(su2.conj(b), a))


def a_moves(i, j):
    """Moves of ``A_ij`` in application order, as (kind, position) pairs."""
    moves = [("R'", k) for k in range(j - 1, i, -1)]
    moves += [("R", i), ("R", i)]
    moves += [("R", k) for k in range(i + 1, j)]
    return moves


def a_generator(t, i, j):
    _check_pair(t, i, j)
    for kind, k in a_moves(i, j):
        t = r_move(t, k) if kind == "R" else r_prime_move(t, k)
    return t


def f_pair(t, i, j):
    _check_pair(t, i, j)
    return float(su2.trace(su2.mul(t.g[i - 1], t.g[j - 1])))


def h_val(t, i, j):
    _check_pair(t, i, j)
    return 0.5 * float(side_length(su2.mul(t.g[i - 1], t.g[j - 1]))) ** 2


def braid_flow(t, i, j, time):
    """Closed-form flow of ``f_ij = tr(g_i g_j)``.

    Entries i and j are conjugated by ``E = exp(time F_ij)`` and the entries
    strictly between by ``E g_j E^{-1} g_j^{-1}``.
    """
    _check_pair(t, i, j)
    g = np.array(t.g)
    gj = g[j - 1]
    e = su2.exp_alg(time * 2.0 * su2.im(su2.mul(g[i - 1], gj)))
    if j > i + 1:
        mid = su2.product([e, gj, su2.conj(e), su2.conj(gj)])
        g[i:j - 1] = su2.conjugate(mid, g[i:j - 1])
    g[i - 1] = su2.conjugate(e, g[i - 1])
    g[j - 1] = su2.conjugate(e, gj)
    return HolonomyTuple(g, t.r, check=False)


def _regular_trace(tr):
    if abs(tr) >= 2.0 - REGULAR_TOL:
        raise DegenerateElement(f"element is central (trace {tr:.12g})")
    return np.sqrt(4.0 - tr * tr)


def exp_reconstruct(g):
    """``exp(ell(g) / sqrt(4 - tr^2) * (g - g^{-1}))``; equals ``g`` for non-central g."""
    g = np.asarray(g, dtype=float)
    tr = float(su2.trace(g))
    scale = float(side_length(g)) / _regular_trace(tr)
    return su2.exp_alg(scale * 2.0 * su2.im(g))


def t_star(t, i, j):
    """Flow time at which ``braid_flow`` reaches ``A_ij``."""
    tr = f_pair(t, i, j)
    return float(np.arccos(0.5 * tr)) / _regular_trace(tr)


def normalized_braid_flow(t, i, j, s):
    return braid_flow(t, i, j, s * t_star(t, i, j))


# ---- words

@dataclass(frozen=True)
class BraidLetter:
    kind: str          # "R", "R'" or "A"
    args: tuple

    def __str__(self):
        if self.kind == "A":
            i, j = self.args
            sep = "," if max(i, j) > 9 else ""
            return f"A{i}{sep}{j}"
        return f"{self.kind}{self.args[0]}"


_TOKEN = re.compile(r"\S+")
_LETTER = re.compile(r"(R'|R|A)(\d+)(?:,(\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    """Sequence of letters applied left to right."""

    letters: tuple

    @classmethod
    def parse(cls, text):
        """Read words like ``"R3 R'2 A14"``; ``A1,12`` separates multi-digit indices."""
        letters = []
        for m in _TOKEN.finditer(text):
            tok = m.group()
            offset = len(text[:m.start()].encode())
            hit = _LETTER.match(tok)
            if hit is None:
                raise BraidParseError(f"bad braid token {tok!r} at byte {offset}", tok, offset)
            kind, a, b = hit.groups()
            if kind == "A":
                if b is not None:
                    args = (int(a), int(b))
                elif len(a) == 2:
                    args = (int(a[0]), int(a[1]))
                else:
                    raise BraidParseError(
                        f"ambiguous generator {tok!r} at byte {offset}; write A<i>,<j>", tok, offset)
                if not args[0] < args[1]:
                    raise BraidParseError(f"generator {tok!r} needs i < j", tok, offset)
            else:
                if b is not None:
                    raise BraidParseError(f"bad braid token {tok!r} at byte {offset}", tok, offset)
                args = (int(a),)
            if min(args) < 1:
                raise BraidParseError(f"indices in {tok!r} must be positive", tok, offset)
            letters.append(BraidLetter(kind, args))
        return cls(tuple(letters))

    def __str__(self):
        return " ".join(map(str, self.letters))

    def apply(self, t):
        for letter in self.letters:
            if letter.kind == "R":
                t = r_move(t, *letter.args)
            elif letter.kind == "R'":
                t = r_prime_move(t, *letter.args)
            else:
                t = a_generator(t, *letter.args)
        return t
