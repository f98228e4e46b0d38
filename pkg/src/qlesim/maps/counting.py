"""Exact disk counts from the peeling case split.

Peel the root edge of a triangulated m-gon with n inner vertices (loopless,
multiple edges allowed).  The triangle behind it either has its third vertex
inside (leaving an (m+1)-gon with n-1 inner vertices) or at boundary vertex
number j (2 <= j <= m-1), which cuts the disk into a j-gon and an
(m-j+1)-gon sharing the n inner vertices.  A 2-gon part may be degenerate
(its two sides glued into one edge), which is the base value B(2, 0) = 1.

    B(m, n) = B(m+1, n-1) + sum_j sum_{n1+n2=n} B(j, n1) B(m-j+1, n2),
    B(2, n) = B(3, n-1) for n >= 1.

Z(m, n) counts the same disks with a target 2-gon inserted on one edge; the
root edge either carries the target (B(m, n) ways) or the target lies in one
of the pieces.  Simple counts follow from the loopless ones: every loopless
triangulation is a simple one with each edge replaced by a triangulated
2-gon, so with G(x) = sum_k B(2, k) x^k and E = 2m + 3k - 3 edges,

    B(m, n) = sum_k S(m, k) [x^(n-k)] G(x)^E,

which is inverted term by term.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cmap import CLASSES, MULTI_EDGE, SIMPLE


@lru_cache(maxsize=None)
def _B(m: int, n: int) -> int:
    if n < 0:
        return 0
    if m == 2:
        return 1 if n == 0 else _B(3, n - 1)
    tot = _B(m + 1, n - 1)
    for j in range(2, m):
        for n1 in range(n + 1):
            tot += _B(j, n1) * _B(m - j + 1, n - n1)
    return tot


@lru_cache(maxsize=None)
def _Z(m: int, n: int) -> int:
    if n < 0:
        return 0
    tot = _B(m, n) + _Z(m + 1, n - 1)
    for j in range(2, m):
        for n1 in range(n + 1):
            n2 = n - n1
            tot += _Z(j, n1) * _B(m - j + 1, n2) + _B(j, n1) * _Z(m - j + 1, n2)
    return tot


@lru_cache(maxsize=None)
def _G_power(e: int, k: int) -> int:
    """[x^k] G(x)^e."""
    if e == 0:
        return 1 if k == 0 else 0
    return sum(_B(2, i) * _G_power(e - 1, k - i) for i in range(k + 1))


@lru_cache(maxsize=None)
def _S(m: int, n: int) -> int:
    if n < 0:
        return 0
    if m == 2:
        return 1 if n == 0 else 0
    rest = sum(_S(m, k) * _G_power(2 * m + 3 * k - 3, n - k) for k in range(n))
    return _B(m, n) - rest


def count_disk_triangulations(m: int, n: int, cls: str = MULTI_EDGE, with_target: bool = False) -> int:
    """Rooted triangulations of an m-gon with n inner vertices (exact integer)."""
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")
    if m < 2 or n < 0:
        raise ValueError("need perimeter m >= 2 and inner vertices n >= 0")
    if cls == SIMPLE:
        if with_target:
            raise NotImplementedError("targeted counts are only available for MULTI_EDGE")
        return _S(m, n)
    return _Z(m, n) if with_target else _B(m, n)


def count_sphere_configurations(n_vertices: int) -> int:
    """Doubly-marked rooted loopless sphere triangulations: Z(2, n - 2)."""
    return _Z(2, n_vertices - 2)


def chain_transitions(m: int, n: int) -> list:
    """Exact one-step law of the (M, N) chain from boundary m + 2, n unseen vertices.

    Returns ``[(kind, j, side, next_state, prob)]`` with ``next_state`` None
    for the terminal step.  ``side`` is 1 when the bubble is the piece
    between the peeled edge and vertex j (walking forwards), 2 otherwise.
    """
    L = m + 2
    z = _Z(L, n)
    if z == 0:
        raise ValueError(f"state ({m}, {n}) is not reachable")
    out = [("end", 0, 0, None, Fraction(_B(L, n), z))]
    if n >= 1:
        out.append(("new", 0, 0, (m + 1, n - 1), Fraction(_Z(L + 1, n - 1), z)))
    for j in range(2, L):
        for n1 in range(n + 1):
            n2 = n - n1
            w1 = _B(j, n1) * _Z(L - j + 1, n2)        # bubble on the first piece
            if w1:
                out.append(("split", j, 1, (L - j + 1 - 2, n2), Fraction(w1, z)))
            w2 = _Z(j, n1) * _B(L - j + 1, n2)
            if w2:
                out.append(("split", j, 2, (j - 2, n1), Fraction(w2, z)))
    return out
