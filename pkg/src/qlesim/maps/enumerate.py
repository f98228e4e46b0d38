"""Exhaustive enumeration by gluing labelled faces.

The gluing search always treats the smallest unmatched dart.  Its partner is
either dart 0 of a brand-new face (faces are labelled in creation order) or
an unmatched dart on the same boundary cycle; gluing across two different
cycles would add a handle.  Every rooted planar map therefore appears
exactly once, with the root being dart 0 of face 0.

This is the brute-force oracle behind the counting recursions and the
universe of doubly-marked triangulations used in exact law comparisons.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .cmap import CLASSES, MULTI_EDGE, SIMPLE, Triangulation, fatten, orbits, vertex_ids

N_MIN, N_MAX = 3, 8


def _gluings(first_deg: int, n_tri: int, digon: bool = False):
    """Yield (nxt, twin) for every planar gluing of one ``first_deg``-gon,
    ``n_tri`` triangles and optionally one extra 2-gon (placed at the end)."""
    nxt = [(i + 1) % first_deg for i in range(first_deg)]
    twin = [-1] * first_deg
    state = {"tri": 0, "digon": None}

    def bsucc(d):
        x = nxt[d]
        while twin[x] >= 0:
            x = nxt[twin[x]]
        return x

    def add_face(k):
        b = len(nxt)
        nxt.extend(b + (i + 1) % k for i in range(k))
        twin.extend([-1] * k)
        return b

    def drop_face(k):
        del nxt[-k:]
        del twin[-k:]

    def rec():
        try:
            d0 = twin.index(-1)
        except ValueError:
            if state["tri"] == n_tri and (not digon or state["digon"] is not None):
                yield list(nxt), list(twin), state["digon"]
            return
        y = bsucc(d0)
        cyc = []
        while y != d0:
            cyc.append(y)
            y = bsucc(y)
        for y in cyc:
            twin[d0], twin[y] = y, d0
            yield from rec()
            twin[d0] = twin[y] = -1
        if state["tri"] < n_tri:
            b = add_face(3)
            state["tri"] += 1
            twin[d0], twin[b] = b, d0
            yield from rec()
            twin[d0] = -1
            state["tri"] -= 1
            drop_face(3)
        if digon and state["digon"] is None:
            b = add_face(2)
            state["digon"] = b
            twin[d0], twin[b] = b, d0
            yield from rec()
            twin[d0] = -1
            state["digon"] = None
            drop_face(2)

    yield from rec()


def _simple_graph(nxt, twin, tail) -> bool:
    seen = set()
    for d in range(len(nxt)):
        if d < twin[d]:
            key = frozenset((tail[d], tail[nxt[d]]))
            if len(key) < 2 or key in seen:
                return False
            seen.add(key)
    return True


def _distinct_faces(nxt, tail) -> bool:
    """No two faces on the same vertex set (rules out the doubled triangle)."""
    sets = [frozenset(tail[d] for d in c) for c in orbits(nxt)]
    return len(set(sets)) == len(sets)


def _loopless(nxt, tail) -> bool:
    return all(tail[d] != tail[nxt[d]] for d in range(len(nxt)))


def _check_class(cls):
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")


@lru_cache(maxsize=None)
def rooted_sphere_triangulations(n_vertices: int, cls: str = MULTI_EDGE) -> tuple:
    """All rooted loopless (or simple) sphere triangulations, as (nxt, twin) pairs.

    The root is dart 0.  SIMPLE means simplicial: no loops, no multiple edges
    and no two faces on the same three vertices, so n = 3 has none.
    """
    _check_class(cls)
    if not N_MIN <= n_vertices <= N_MAX:
        raise ValueError(f"n_vertices must lie in [{N_MIN}, {N_MAX}] (exhaustive enumeration bound)")
    out = []
    for nxt, twin, _ in _gluings(3, 2 * n_vertices - 5):
        tail = vertex_ids(nxt, twin)
        if not _loopless(nxt, tail):
            continue
        if cls == SIMPLE and not (_simple_graph(nxt, twin, tail) and _distinct_faces(nxt, tail)):
            continue
        out.append((tuple(nxt), tuple(twin)))
    return tuple(out)


def enumerate_triangulations(n_vertices: int, cls: str = SIMPLE) -> list:
    """Every doubly-marked rooted triangulation with ``n_vertices`` vertices.

    The root edge is fattened into the start 2-gon.  The target 2-gon then
    fattens any of the E + 1 edges of the resulting map (including either
    side of the start 2-gon), so each rooted triangulation contributes E + 1
    configurations.  Rooted maps have no non-trivial root-preserving
    automorphisms, so ``labelings`` is n! for each of them.
    """
    _check_class(cls)
    out = []
    lab = math.factorial(n_vertices)
    for nxt0, twin0 in rooted_sphere_triangulations(n_vertices, cls):
        nxt, twin = list(nxt0), list(twin0)
        s0, _ = fatten(nxt, twin, 0)
        for d in range(len(nxt)):
            if d > twin[d]:
                continue
            nx, tw = list(nxt), list(twin)
            t0, _ = fatten(nx, tw, d)
            out.append(Triangulation(nx, tw, s0, t0, cls, lab).validate())
    return out


def universe(n_vertices: int, cls: str = SIMPLE) -> list:
    """Canonical forms of :func:`enumerate_triangulations`, checked distinct."""
    tris = [t.canonical() for t in enumerate_triangulations(n_vertices, cls)]
    if len(set(t.code for t in tris)) != len(tris):
        raise AssertionError("enumeration produced isomorphic duplicates")
    return tris


# --------------------------------------------------------------------------
# disks


def brute_force_disk_count(m: int, n: int, cls: str = MULTI_EDGE, with_target: bool = False) -> int:
    """Triangulations of an m-gon with n inner vertices, by exhaustive gluing.

    The boundary must be a simple cycle and the map loopless (simple for the
    SIMPLE class).  ``with_target`` additionally places one 2-gon (a fattened
    edge) anywhere in the disk.  The degenerate 2-gon (m = 2, n = 0) is the
    single edge with both boundary sides glued together.
    """
    _check_class(cls)
    if m < 2 or n < 0:
        raise ValueError("need m >= 2 and n >= 0")
    return _disk_counts(m, n, with_target)[cls]


@lru_cache(maxsize=None)
def _disk_counts(m: int, n: int, with_target: bool) -> dict:
    """One pass over the gluings, counted for both classes."""
    n_tri = m + 2 * n - 2
    counts = {MULTI_EDGE: 0, SIMPLE: 0}
    for nxt, twin, dg in _gluings(m, n_tri, digon=with_target):
        tail = vertex_ids(nxt, twin)
        if len(set(tail)) != m + n:
            continue
        if len({tail[i] for i in range(m)}) != m:
            continue
        if not _loopless(nxt, tail):
            continue
        counts[MULTI_EDGE] += 1
        nx, tw = list(nxt), list(twin)
        if dg is not None:
            # collapse the 2-gon back to an edge before testing
            a, b = dg, dg + 1
            x, y = tw[a], tw[b]
            tw[x], tw[y] = y, x
            keep = [d for d in range(len(nx)) if d not in (a, b)]
            simple = _simple_edges(nx, tw, tail, keep)
        else:
            simple = _simple_graph(nx, tw, tail)
        counts[SIMPLE] += simple
    return counts


def _simple_edges(nxt, twin, tail, darts) -> bool:
    seen = set()
    for d in darts:
        if d < twin[d]:
            key = frozenset((tail[d], tail[nxt[d]]))
            if len(key) < 2 or key in seen:
                return False
            seen.add(key)
    return True


def face_degrees(nxt) -> list:
    return sorted(len(c) for c in orbits(nxt))
