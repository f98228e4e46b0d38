"""Peeling explorations, necklaces and reassembly.

State of an exploration: the list ``beta`` of boundary darts of the
unexplored region that contains the target, in boundary order.  Each dart
in ``beta`` belongs to an unexplored face; its twin is explored.  Peeling
``beta[i]`` rotates the list so that the peeled dart comes first and
reveals the face behind it:

* the target 2-gon: the exploration stops;
* a triangle (d, d1, d2) whose third vertex c is new: the list becomes
  ``[twin d2, twin d1, beta_1, ..., beta_{L-1}]``;
* a triangle whose third vertex is ``tail(beta_j)``: the two pieces are
  ``[twin d1, beta_1 .. beta_{j-1}]`` and ``[twin d2, beta_j ..]``; the one
  without the target is a bubble.  A piece of length 2 whose second dart
  is the triangle's own side is degenerate (no faces).

A step is recorded with its position ``i`` and a position-free descriptor.
The descriptors of one step form a necklace; reassembling a record with
fresh uniform positions is the slot-machine reshuffle.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..rng import stream
from .cmap import MULTI_EDGE, Triangulation, orbits

# --------------------------------------------------------------------------
# regions


def region_faces(tri: Triangulation, boundary) -> list:
    """Faces enclosed by a boundary cycle (flood fill that never crosses it)."""
    bset = set(boundary)
    start = tri.face_of[boundary[0]]
    seen = {start}
    todo = [start]
    while todo:
        f = todo.pop()
        for x in tri.faces[f]:
            if x not in bset:
                g = tri.face_of[tri.twin[x]]
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
    return sorted(seen)


def region_code(tri: Triangulation, boundary) -> tuple:
    """Canonical description of the region inside ``boundary``, rooted at ``boundary[0]``.

    ``(nxt, twin, target, boundary_labels)`` on BFS labels; ``twin`` is -1 on
    boundary darts and ``target`` is the label of a target dart or -1.
    """
    bset = set(boundary)
    lab = {boundary[0]: 0}
    order = [boundary[0]]
    q = deque(order)
    while q:
        d = q.popleft()
        nb = (tri.nxt[d],) if d in bset else (tri.nxt[d], tri.twin[d])
        for e in nb:
            if e not in lab:
                lab[e] = len(order)
                order.append(e)
                q.append(e)
    tf = tri.target_face
    tl = [lab[d] for d in order if tri.face_of[d] == tf]
    return (tuple(lab[tri.nxt[d]] for d in order),
            tuple(-1 if d in bset else lab[tri.twin[d]] for d in order),
            min(tl) if tl else -1,
            tuple(lab[b] for b in boundary))


def code_inner_vertices(code: tuple) -> int:
    """Inner vertices of a coded region (0 for the degenerate empty region)."""
    if not code:
        return 0
    nx, _, tgt, bl = code
    tris = len(orbits(nx)) - (1 if tgt >= 0 else 0)
    return (tris - len(bl) + 2) // 2


# --------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class PeelStep:
    position: int
    length: int          # boundary length before the step
    kind: str            # "new", "split" or "end"
    j: int = 0
    side: int = 0        # which piece is the bubble (split) ; 0 otherwise
    region: tuple = ()   # bubble code (split) or final region code (end)
    face: int = -1       # face id of the revealed triangle in the source map

    @property
    def descriptor(self) -> tuple:
        if self.kind == "new":
            return ("new", self.length)
        if self.kind == "split":
            return ("split", self.length, self.j, self.side, self.region)
        return ("end", self.length, self.region)

    @property
    def necklace_key(self) -> tuple:
        """Descriptor without the contents of the final region."""
        return self.descriptor if self.kind != "end" else ("end", self.length)

    @property
    def bubble_inner(self) -> int:
        return code_inner_vertices(self.region) if self.kind == "split" else 0


@dataclass(frozen=True)
class Necklace:
    inner_length: int
    outer_length: int
    triangles: int = 1
    bubble: tuple | None = None
    kind: str = "new"
    j: int = 0
    side: int = 0

    def __post_init__(self):
        if self.bubble is not None and self.bubble:
            nx, tw, tgt, bl = self.bubble
            if tgt != -1 or sorted(nx) != list(range(len(nx))):
                raise ValueError("bubble must be a rooted triangulated polygon without target")
            if any(tw[b] != -1 for b in bl) or sum(t == -1 for t in tw) != len(bl):
                raise ValueError("bubble boundary labels are inconsistent")


@dataclass(frozen=True, eq=False)
class ExplorationTrace:
    chain: tuple                  # (M_k, N_k), k = 0 .. number of steps
    steps: tuple                  # PeelStep, the last one has kind "end"
    necklaces: tuple = field(default=())

    def __post_init__(self):
        if not self.steps or self.steps[-1].kind != "end":
            raise ValueError("trace must terminate at the target 2-gon")
        if len(self.chain) != len(self.steps):
            raise ValueError("chain must have one state per step")
        for (m0, n0), (m1, n1) in zip(self.chain, self.chain[1:]):
            if n1 > n0:
                raise ValueError("N must be non-increasing")
            if m1 > m0 and not (m1 == m0 + 1 and n1 == n0 - 1):
                raise ValueError("M may only increase by one together with a unit drop of N")
        if not self.necklaces:
            object.__setattr__(self, "necklaces", tuple(_necklaces(self.steps)))

    @property
    def triangles(self) -> int:
        return len(self.steps) - 1

    @property
    def record(self) -> tuple:
        return tuple((s.position, s.descriptor) for s in self.steps)

    @property
    def necklace_sequence(self) -> tuple:
        return tuple(s.necklace_key for s in self.steps)

    @property
    def faces(self) -> tuple:
        return tuple(s.face for s in self.steps[:-1])

    @property
    def cap(self) -> tuple:
        return self.steps[-1].region


def _necklaces(steps) -> list:
    out = []
    for s, t in zip(steps, steps[1:]):
        bubble = s.region if s.kind == "split" else None
        out.append(Necklace(s.length, t.length, 1, bubble, s.kind, s.j, s.side))
    return out


# --------------------------------------------------------------------------
# one peeling step on a concrete map


def initial_boundary(tri: Triangulation) -> tuple:
    s0 = tri.start
    return (tri.twin[s0], tri.twin[tri.nxt[s0]])


def peel(tri: Triangulation, beta: tuple, i: int):
    """Peel ``beta[i]``; returns (PeelStep, new boundary or None)."""
    L = len(beta)
    b = beta[i:] + beta[:i]
    d = b[0]
    if tri.is_target(d):
        return PeelStep(i, L, "end", region=region_code(tri, b)), None
    nxt, twin, tail = tri.nxt, tri.twin, tri.tail
    d1 = nxt[d]
    d2 = nxt[d1]
    c = tail[d2]
    tails = [tail[x] for x in b]
    face = tri.face_of[d]
    if c not in tails:
        return PeelStep(i, L, "new", face=face), (twin[d2], twin[d1]) + b[1:]
    j = tails.index(c)
    if not 2 <= j <= L - 1:
        raise ValueError("peeled triangle closes a loop")
    r1 = (twin[d1],) + b[1:j]
    r2 = (twin[d2],) + b[j:]
    deg1 = j == 2 and b[1] == d1
    deg2 = j == L - 1 and b[L - 1] == d2
    tf = tri.target_face
    if not deg1 and tf in region_faces(tri, r1):
        side, bubble, new, deg = 2, r2, r1, deg2
    else:
        side, bubble, new, deg = 1, r1, r2, deg1
    code = () if deg else region_code(tri, bubble)
    return PeelStep(i, L, "split", j, side, code, face), new


def run_exploration(tri: Triangulation, choose) -> ExplorationTrace:
    """Generic driver; ``choose(beta, last_step)`` returns the index to peel."""
    beta = initial_boundary(tri)
    N = tri.n_vertices - 2
    chain, steps = [], []
    last = None
    while True:
        chain.append((len(beta) - 2, N))
        i = choose(beta, last)
        step, new = peel(tri, beta, i)
        steps.append(step)
        if new is None:
            break
        if step.kind == "new":
            N -= 1
        else:
            N -= step.bubble_inner
        last = (step, beta[i:] + beta[:i], new)
        beta = new
    return ExplorationTrace(tuple(chain), tuple(steps))


def target_inner_vertices(tri: Triangulation, beta) -> int:
    """Direct count of unseen vertices inside the target region (validator)."""
    code = region_code(tri, tuple(beta))
    return code_inner_vertices(code)


# --------------------------------------------------------------------------
# Eden and percolation


def eden_exploration(tri: Triangulation, seed) -> ExplorationTrace:
    """Peel a uniformly random boundary edge of the target region at every step."""
    rng = stream(seed, "eden")
    return run_exploration(tri, lambda beta, last: int(rng.integers(len(beta))))


def explore_at(tri: Triangulation, positions) -> ExplorationTrace:
    """Exploration with prescribed peel positions."""
    it = iter(positions)
    return run_exploration(tri, lambda beta, last: next(it))


def reference_path(tri: Triangulation, reverse: bool = False) -> frozenset:
    """Edges crossed by a canonical shortest dual path from the start to the target 2-gon.

    Breadth-first search over faces; inside a face the darts are scanned in
    face order from the entry dart (backwards when ``reverse``).
    """
    sf, tf = tri.start_face, tri.target_face
    parent = {sf: None}
    q = deque([(sf, tri.start)])
    while q:
        f, entry = q.popleft()
        if f == tf:
            break
        darts = []
        x = entry
        for _ in range(len(tri.faces[f])):
            darts.append(x)
            x = tri.nxt[x]
        if reverse:
            darts = darts[:1] + darts[1:][::-1]
        for x in darts:
            g = tri.face_of[tri.twin[x]]
            if g not in parent:
                parent[g] = (f, x)
                q.append((g, tri.twin[x]))
    cross = set()
    f = tf
    while parent[f] is not None:
        pf, x = parent[f]
        cross.add(tri.edge_key(x))
        f = pf
    return frozenset(cross)


def _passable(tri: Triangulation, colors, cross):
    tail = tri.tail

    def ok(x):
        differ = colors[tail[x]] != colors[tail[tri.nxt[x]]]
        return differ != (tri.edge_key(x) in cross)
    return ok


def _colors(tri, colors, seed):
    if colors is None:
        if seed is None:
            raise ValueError("give either colors or a seed")
        colors = stream(seed, "percolation_colors").integers(0, 2, tri.n_vertices)
    colors = [int(c) for c in colors]
    if len(colors) != tri.n_vertices:
        raise ValueError(f"coloring has {len(colors)} entries, map has {tri.n_vertices} vertices")
    return colors


def percolation_exploration(tri: Triangulation, colors=None, seed=None, path=None) -> ExplorationTrace:
    """Follow the percolation interface from the start to the target 2-gon.

    An edge is crossed when its endpoints have different colors, except that
    the rule is flipped on edges crossed by the reference dual path.  The
    peeled edge at every step is the exit edge of the interface.
    """
    colors = _colors(tri, colors, seed)
    cross = reference_path(tri) if path is None else path
    ok = _passable(tri, colors, cross)
    s0 = tri.start
    exits = [x for x in (s0, tri.nxt[s0]) if ok(x)]
    if len(exits) != 1:
        raise AssertionError("start 2-gon must have exactly one passable side")
    want = [tri.twin[exits[0]]]

    def choose(beta, last):
        if last is not None:
            step, rot, new = last
            d = rot[0]
            d1 = tri.nxt[d]
            ex = [x for x in (d1, tri.nxt[d1]) if ok(x)]
            if len(ex) != 1:
                raise AssertionError("interface must leave a triangle through exactly one side")
            want[0] = tri.twin[ex[0]]
        if want[0] not in beta:
            raise AssertionError("interface left the target region")
        return beta.index(want[0])
    return run_exploration(tri, choose)


def interface_faces(tri: Triangulation, colors, path=None) -> tuple:
    """Direct dual-path tracer (no peeling): triangles visited by the interface."""
    colors = _colors(tri, colors, None)
    cross = reference_path(tri) if path is None else path
    ok = _passable(tri, colors, cross)
    f, entry = tri.start_face, None
    out = []
    while True:
        darts = [x for x in tri.faces[f] if x != entry and ok(x)]
        if len(darts) != 1:
            raise AssertionError("interface is not a path")
        entry = tri.twin[darts[0]]
        f = tri.face_of[entry]
        if f == tri.target_face:
            return tuple(out)
        out.append(f)


# --------------------------------------------------------------------------
# reassembly


def _fill(nxt, twin, open_darts, code):
    nx, tw, tgt, bl = code
    if len(bl) != len(open_darts):
        raise ValueError("region boundary length does not match the slot")
    lab = [None] * len(nx)
    for l, d in zip(bl, open_darts):
        lab[l] = d
    for l in range(len(nx)):
        if lab[l] is None:
            lab[l] = len(nxt)
            nxt.append(None)
            twin.append(None)
    for l in range(len(nx)):
        nxt[lab[l]] = lab[nx[l]]
        if tw[l] >= 0:
            twin[lab[l]] = lab[tw[l]]
    return lab[tgt] if tgt >= 0 else None


def _new_pair(nxt, twin):
    a, b = len(nxt), len(nxt) + 1
    nxt.extend([None, None])
    twin.extend([b, a])
    return a, b


def assemble(record, cls: str = MULTI_EDGE) -> Triangulation:
    """Rebuild the doubly-marked map from ``(position, descriptor)`` pairs."""
    # start 2-gon on darts 0, 1; their outer sides 2, 3 are the first boundary
    nxt, twin = [1, 0, None, None], [2, 3, 0, 1]
    beta = (2, 3)
    target = None
    for pos, desc in record:
        L = len(beta)
        if desc[1] != L:
            raise ValueError(f"descriptor length {desc[1]} does not match boundary length {L}")
        if not 0 <= pos < L:
            raise ValueError("position out of range")
        b = beta[pos:] + beta[:pos]
        d = b[0]
        kind = desc[0]
        if kind == "end":
            target = _fill(nxt, twin, b, desc[2])
            beta = None
            break
        if kind == "new":
            d1, e1 = _new_pair(nxt, twin)
            d2, e2 = _new_pair(nxt, twin)
            nxt[d], nxt[d1], nxt[d2] = d1, d2, d
            beta = (e2, e1) + b[1:]
            continue
        _, _, j, side, code = desc
        if not 2 <= j <= L - 1:
            raise ValueError("split offset out of range")
        deg = not code
        if deg and side == 1:
            if j != 2:
                raise ValueError("degenerate bubble must sit next to the peeled edge")
            d1, e1 = b[1], None
        else:
            d1, e1 = _new_pair(nxt, twin)
        if deg and side == 2:
            if j != L - 1:
                raise ValueError("degenerate bubble must sit next to the peeled edge")
            d2, e2 = b[L - 1], None
        else:
            d2, e2 = _new_pair(nxt, twin)
        nxt[d], nxt[d1], nxt[d2] = d1, d2, d
        r1 = (e1,) + b[1:j]
        r2 = (e2,) + b[j:]
        bubble, beta = (r1, r2) if side == 1 else (r2, r1)
        if not deg:
            _fill(nxt, twin, bubble, code)
    if beta is not None or target is None:
        raise ValueError("record does not terminate at the target 2-gon")
    if None in nxt or None in twin:
        raise ValueError("record leaves unmatched darts")
    return Triangulation(nxt, twin, 0, target, cls).validate()


def reshuffle_necklaces(necklaces, seed, cap: tuple | None = None, cls: str = MULTI_EDGE):
    """Glue the necklaces back with independent uniform rotations.

    ``necklaces`` is an :class:`ExplorationTrace` (its cap is used) or a
    sequence of :class:`Necklace` together with the final region ``cap``.
    Returns the reassembled map and its exploration at the new positions.
    """
    if isinstance(necklaces, ExplorationTrace):
        cap = necklaces.cap if cap is None else cap
        necklaces = necklaces.necklaces
    necklaces = list(necklaces)
    if cap is None:
        raise ValueError("the final region (cap) is required")
    for k, (a, b) in enumerate(zip(necklaces, necklaces[1:])):
        if a.outer_length != b.inner_length:
            raise ValueError(f"necklaces {k} and {k + 1} do not fit: outer {a.outer_length} != inner {b.inner_length}")
    if necklaces and necklaces[0].inner_length != 2:
        raise ValueError("the first necklace must sit on the start 2-gon")
    rng = stream(seed, "reshuffle")
    rec = []
    for nk in necklaces:
        pos = int(rng.integers(nk.inner_length))
        if nk.kind == "new":
            rec.append((pos, ("new", nk.inner_length)))
        else:
            rec.append((pos, ("split", nk.inner_length, nk.j, nk.side, nk.bubble or ())))
    L = necklaces[-1].outer_length if necklaces else 2
    rec.append((int(rng.integers(L)), ("end", L, cap)))
    tri = assemble(rec, cls)
    trace = explore_at(tri, [p for p, _ in rec])
    if trace.record != tuple(rec):
        raise AssertionError("reassembled map does not reproduce the record")
    return tri, trace
