"""Exact laws of explorations on enumerated universes (rational arithmetic).

Every configuration of a universe carries the same weight.  Percolation
averages over all 2^V colorings; Eden over all sequences of uniform peel
positions, by memoised recursion on the boundary list.
"""
from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..rng import stream
from .cmap import MULTI_EDGE, SIMPLE, Triangulation
from .counting import chain_transitions, count_sphere_configurations
from .enumerate import universe
from .explore import (ExplorationTrace, PeelStep, code_inner_vertices, eden_exploration,
                      initial_boundary, peel, percolation_exploration, reference_path,
                      region_faces)


def tv_distance(P: dict, Q: dict) -> Fraction:
    keys = set(P) | set(Q)
    return sum((abs(Fraction(P.get(k, 0)) - Fraction(Q.get(k, 0))) for k in keys), Fraction(0)) / 2


def _check_law(P: dict):
    s = sum(P.values(), Fraction(0))
    if s != 1:
        raise AssertionError(f"law has total mass {s}")
    return P


# --------------------------------------------------------------------------
# statistics of a descriptor sequence


def chain_of(descs, n_vertices: int) -> tuple:
    N = n_vertices - 2
    out = []
    for d in descs:
        out.append((d[1] - 2, N))
        if d[0] == "new":
            N -= 1
        elif d[0] == "split":
            N -= code_inner_vertices(d[4])
    return tuple(out)


def statistic(descs, n_vertices: int, name: str):
    if name == "chain":
        return chain_of(descs, n_vertices)
    if name == "triangles":
        return len(descs) - 1
    if name == "necklaces":
        return tuple(d if d[0] != "end" else ("end", d[1]) for d in descs)
    if name == "full":
        return tuple(descs)
    raise ValueError(f"unknown statistic {name!r}")


STATISTICS = ("chain", "triangles", "necklaces")


def marginal(law: dict, n_vertices: int, name: str) -> dict:
    out = defaultdict(Fraction)
    for seq, p in law.items():
        out[statistic(seq, n_vertices, name)] += p
    return dict(out)


# --------------------------------------------------------------------------
# Eden


def _eden(tri, beta, memo, with_pos):
    key = beta if with_pos else frozenset(beta)
    hit = memo.get(key)
    if hit is not None:
        return hit
    L = len(beta)
    w = Fraction(1, L)
    out = defaultdict(Fraction)
    for i in range(L):
        step, new = peel(tri, beta, i)
        it = (i, step.descriptor) if with_pos else step.descriptor
        if new is None:
            out[(it,)] += w
        else:
            for suf, p in _eden(tri, new, memo, with_pos).items():
                out[(it,) + suf] += w * p
    memo[key] = dict(out)
    return memo[key]


def eden_law_map(tri: Triangulation, with_positions: bool = False) -> dict:
    """Exact law of the descriptor sequence (or full record) of Eden on one map."""
    return _eden(tri, initial_boundary(tri), {}, with_positions)


def eden_law(tris, with_positions: bool = False) -> dict:
    out = defaultdict(Fraction)
    w = Fraction(1, len(tris))
    for tri in tris:
        for seq, p in eden_law_map(tri, with_positions).items():
            out[seq] += w * p
    return _check_law(dict(out))


# --------------------------------------------------------------------------
# percolation


def percolation_law(tris, reverse_path: bool = False) -> dict:
    out = defaultdict(Fraction)
    for tri in tris:
        cols = list(itertools.product((0, 1), repeat=tri.n_vertices))
        w = Fraction(1, len(tris) * len(cols))
        path = reference_path(tri, reverse=reverse_path)
        for c in cols:
            tr = percolation_exploration(tri, c, path=path)
            out[tuple(s.descriptor for s in tr.steps)] += w
    return _check_law(dict(out))


def path_independence(tris) -> bool:
    """Per map, the multiset of interface traces over all colorings is the
    same for the two canonical reference paths."""
    for tri in tris:
        p1, p2 = reference_path(tri), reference_path(tri, reverse=True)
        cols = list(itertools.product((0, 1), repeat=tri.n_vertices))
        a = sorted(percolation_exploration(tri, c, path=p1).record for c in cols)
        b = sorted(percolation_exploration(tri, c, path=p2).record for c in cols)
        if a != b:
            return False
    return True


# --------------------------------------------------------------------------
# chain mode


def chain_law(n_vertices: int) -> dict:
    """Law of the (M, N) sequence from the counting ratios (MULTI_EDGE only)."""
    @lru_cache(maxsize=None)
    def rec(m, n):
        out = defaultdict(Fraction)
        for kind, j, side, nxt_state, p in chain_transitions(m, n):
            if nxt_state is None:
                out[((m, n),)] += p
            else:
                for suf, q in rec(*nxt_state).items():
                    out[((m, n),) + suf] += p * q
        return dict(out)
    return _check_law(rec(0, n_vertices - 2))


def eden_chain(n_vertices: int, seed, cls: str = MULTI_EDGE) -> ExplorationTrace:
    """Eden exploration in chain mode: transitions drawn from count ratios."""
    if cls != MULTI_EDGE:
        raise ValueError("chain mode needs the spatial Markov property; only MULTI_EDGE supports it")
    rng = stream(seed, "eden_chain")
    m, n = 0, n_vertices - 2
    chain, steps = [], []
    while True:
        chain.append((m, n))
        tr = chain_transitions(m, n)
        p = [float(t[4]) for t in tr]
        k = int(rng.choice(len(tr), p=p))
        kind, j, side, nxt_state, _ = tr[k]
        steps.append(PeelStep(0, m + 2, kind, j, side))
        if nxt_state is None:
            break
        m, n = nxt_state
    return ExplorationTrace(tuple(chain), tuple(steps))


# --------------------------------------------------------------------------
# reshuffle


def reshuffle_law(perc: dict) -> dict:
    """Law of records obtained by giving a percolation trace uniform positions."""
    out = {}
    for seq, p in perc.items():
        lengths = [d[1] for d in seq]
        w = p
        for L in lengths:
            w /= L
        for pos in itertools.product(*(range(L) for L in lengths)):
            out[tuple(zip(pos, seq))] = w
    return _check_law(out)


def reshuffle_tv(eden: dict, perc: dict, n_configs: int) -> Fraction:
    """TV between the Eden record law and the reshuffled percolation record law.

    Both laws give every position vector of a descriptor sequence s the same
    factor w(s) = prod 1/L.  A record determines its map (see ``assemble``),
    so Eden puts mass w(s)/n_configs on each of K(s) realisable position
    vectors, with K(s) w(s) = n_configs * P_eden(s), and none elsewhere.
    Summing |P_eden - P_reshuffle| over positions then only needs the two
    position-free laws.  :func:`reshuffle_law` is the explicit version.
    """
    tot = Fraction(0)
    for s in set(eden) | set(perc):
        pe, pp = eden.get(s, Fraction(0)), perc.get(s, Fraction(0))
        frac = n_configs * pe
        if frac > 1:
            raise AssertionError("more realisable records than position vectors")
        tot += frac * abs(pp - Fraction(1, n_configs)) + (1 - frac) * pp
    return tot / 2


# --------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class LawComparison:
    cls: str
    n: int
    statistic: str
    tv: Fraction

    def to_json(self) -> dict:
        return {"class": self.cls, "n": self.n, "statistic": self.statistic,
                "tv_distance_num": self.tv.numerator, "tv_distance_den": self.tv.denominator}


def compare_explorations(n_vertices: int, cls: str = SIMPLE, reshuffle: bool = True) -> list:
    """Exact TV distances between Eden and percolation laws on one universe."""
    tris = universe(n_vertices, cls)
    if not tris:
        raise ValueError(f"no {cls} triangulations with {n_vertices} vertices")
    ed = eden_law(tris)
    pc = percolation_law(tris)
    out = [LawComparison(cls, n_vertices, s, tv_distance(marginal(ed, n_vertices, s),
                                                         marginal(pc, n_vertices, s)))
           for s in STATISTICS]
    if reshuffle:
        out.append(LawComparison(cls, n_vertices, "reshuffle", reshuffle_tv(ed, pc, len(tris))))
    if cls == MULTI_EDGE:
        out.append(LawComparison(cls, n_vertices, "chain_mode",
                                 tv_distance(marginal(ed, n_vertices, "chain"), chain_law(n_vertices))))
    return out


def comparisons_json(rows) -> str:
    return json.dumps([r.to_json() for r in rows], indent=1)


# --------------------------------------------------------------------------
# two-sided Eden


def passage_time_law(tri: Triangulation) -> dict:
    """Exact law of the number of triangles Eden explores before the target."""
    return marginal(eden_law_map(tri), tri.n_vertices, "triangles")


def _cluster(tri, beta) -> frozenset:
    """Faces outside the target region (explored triangles, bubbles, start 2-gon)."""
    inside = set(region_faces(tri, beta))
    return frozenset(f for f in range(len(tri.faces)) if f not in inside)


@dataclass(frozen=True)
class TwoSidedRecord:
    passage_xy: int
    steps_x: int
    steps_y: int
    trace_x: tuple
    trace_y: tuple


def two_sided_eden_experiment(tri: Triangulation, seed, x: str = "start", y: str = "target") -> TwoSidedRecord:
    """Grow Eden from x for a uniform fraction of its x -> y passage time, then
    grow an independent Eden cluster from y until it reveals a face of the
    first cluster."""
    if {x, y} != {"start", "target"}:
        raise ValueError("x and y must be the two distinct marked 2-gons")
    if x == "target":
        tri = tri.swapped()
    full = eden_exploration(tri, stream(seed, "two_sided", 0))
    T = full.triangles
    u = stream(seed, "two_sided", 1).uniform()
    k = min(int(u * T), max(T - 1, 0))
    steps_x = full.steps[:k]
    # replay to get the cluster after k steps
    beta = initial_boundary(tri)
    for s in steps_x:
        _, beta = peel(tri, beta, s.position)
    cluster = _cluster(tri, beta)
    other = tri.swapped()
    rng = stream(seed, "two_sided", 2)
    beta = initial_boundary(other)
    steps_y = []
    met = False
    while not met:
        i = int(rng.integers(len(beta)))
        rot = beta[i:] + beta[:i]
        step, new = peel(other, beta, i)
        steps_y.append(step)
        met = other.face_of[rot[0]] in cluster or new is None
        if new is None:
            break
        beta = new
    assert met, "the two clusters must meet"
    return TwoSidedRecord(T, k, len(steps_y), tuple(s.descriptor for s in steps_x),
                          tuple(s.descriptor for s in steps_y))


def two_sided_exact(tri: Triangulation) -> dict:
    """Exact law of (passage time, steps_x, steps_y) for the two-sided experiment."""
    out = defaultdict(Fraction)
    other = tri.swapped()

    def x_paths(states, p):
        beta = states[-1]
        L = len(beta)
        for i in range(L):
            _, new = peel(tri, beta, i)
            if new is None:
                yield states, p / L
            else:
                yield from x_paths(states + [new], p / L)

    memo = {}

    def meet_law(cluster):
        if cluster in memo:
            return memo[cluster]
        res = defaultdict(Fraction)

        def rec(beta, k, p):
            L = len(beta)
            for i in range(L):
                _, new = peel(other, beta, i)
                if other.face_of[beta[i]] in cluster or new is None:
                    res[k + 1] += p / L
                else:
                    rec(new, k + 1, p / L)
        rec(initial_boundary(other), 0, Fraction(1))
        memo[cluster] = res
        return res

    for states, p in x_paths([initial_boundary(tri)], Fraction(1)):
        T = len(states) - 1
        ks = range(T) if T else [0]
        for k in ks:
            cl = _cluster(tri, states[k])
            for ky, q in meet_law(cl).items():
                out[(T, k, ky)] += p * q / len(ks)
    return _check_law(dict(out))
