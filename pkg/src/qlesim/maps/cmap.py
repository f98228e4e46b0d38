"""Combinatorial maps with two marked 2-gons.

A map is stored as two permutations on darts (half-edges):

* ``nxt[d]``  next dart around the face of ``d`` (faces are counter-clockwise),
* ``twin[d]`` the opposite half of the edge carrying ``d``.

Dart ``d`` runs from ``tail(d)`` to ``head(d) = tail(nxt[d])``; the rotation
around a vertex is ``d -> nxt[twin[d]]``.  A :class:`Triangulation` is a map
whose faces are triangles except two 2-gons: the start face (containing dart
``start``) and the target face (containing dart ``target``).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

MULTI_EDGE = "MULTI_EDGE"
SIMPLE = "SIMPLE"
CLASSES = (SIMPLE, MULTI_EDGE)


def orbits(perm) -> list:
    seen = [False] * len(perm)
    out = []
    for d in range(len(perm)):
        if seen[d]:
            continue
        cyc = []
        x = d
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def vertex_ids(nxt, twin) -> list:
    """Tail vertex of every dart; vertices numbered by smallest dart."""
    rot = [nxt[twin[d]] for d in range(len(nxt))]
    vid = [-1] * len(nxt)
    for k, cyc in enumerate(orbits(rot)):
        for d in cyc:
            vid[d] = k
    return vid


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Rooted sphere triangulation with start and target 2-gons."""

    nxt: tuple
    twin: tuple
    start: int
    target: int
    cls: str = MULTI_EDGE
    labelings: int = field(default=1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nxt", tuple(self.nxt))
        object.__setattr__(self, "twin", tuple(self.twin))

    # -- structure ---------------------------------------------------------

    @property
    def n_darts(self) -> int:
        return len(self.nxt)

    @property
    def half_edges(self):
        return self.nxt, self.twin

    @cached_property
    def faces(self) -> list:
        return orbits(self.nxt)

    @cached_property
    def face_of(self) -> tuple:
        f = [0] * self.n_darts
        for k, cyc in enumerate(self.faces):
            for d in cyc:
                f[d] = k
        return tuple(f)

    @cached_property
    def tail(self) -> tuple:
        return tuple(vertex_ids(self.nxt, self.twin))

    def head(self, d: int) -> int:
        return self.tail[self.nxt[d]]

    @property
    def n_vertices(self) -> int:
        return max(self.tail) + 1

    @property
    def n_edges(self) -> int:
        return self.n_darts // 2

    @property
    def n_triangles(self) -> int:
        return len(self.faces) - 2

    @property
    def start_face(self) -> int:
        return self.face_of[self.start]

    @property
    def target_face(self) -> int:
        return self.face_of[self.target]

    def is_target(self, d: int) -> bool:
        return self.face_of[d] == self.face_of[self.target]

    def edge_key(self, d: int) -> int:
        return min(d, self.twin[d])

    # -- validation --------------------------------------------------------

    def validate(self) -> "Triangulation":
        n = self.n_darts
        nxt, twin = self.nxt, self.twin
        if sorted(nxt) != list(range(n)) or sorted(twin) != list(range(n)):
            raise ValueError("nxt and twin must be permutations")
        if any(twin[twin[d]] != d or twin[d] == d for d in range(n)):
            raise ValueError("twin must be a fixed-point-free involution")
        sf, tf = self.start_face, self.target_face
        if sf == tf:
            raise ValueError("start and target 2-gons must be distinct faces")
        for k, cyc in enumerate(self.faces):
            want = 2 if k in (sf, tf) else 3
            if len(cyc) != want:
                raise ValueError(f"face {k} has degree {len(cyc)}, expected {want}")
        # connectivity over nxt and twin
        seen = {0}
        todo = [0]
        while todo:
            d = todo.pop()
            for e in (nxt[d], twin[d]):
                if e not in seen:
                    seen.add(e)
                    todo.append(e)
        if len(seen) != n:
            raise ValueError("map is not connected")
        V, E, F = self.n_vertices, self.n_edges, len(self.faces)
        if V - E + F != 2:
            raise ValueError(f"Euler characteristic {V - E + F} != 2")
        if any(self.tail[d] == self.head(d) for d in range(n)):
            raise ValueError("map has a loop")
        if self.cls == SIMPLE and not self.underlying_simple():
            raise ValueError("underlying triangulation has multiple edges")
        return self

    def underlying_simple(self) -> bool:
        """No multiple edges once the two 2-gons are collapsed back to edges."""
        digon = set(self.faces[self.start_face]) | set(self.faces[self.target_face])
        pairs = set()
        for d in range(self.n_darts):
            if d in digon:
                continue
            e = self.twin[d]
            while e in digon:          # walk through collapsed 2-gons
                e = self.twin[self.nxt[e]]
            if d < e:
                key = frozenset((self.tail[d], self.head(d)))
                if key in pairs:
                    return False
                pairs.add(key)
        return True

    # -- canonical form ------------------------------------------------------

    @cached_property
    def code(self) -> tuple:
        """Canonical code: BFS relabelling from the start dart."""
        lab = {self.start: 0}
        order = [self.start]
        q = deque(order)
        while q:
            d = q.popleft()
            for e in (self.nxt[d], self.twin[d]):
                if e not in lab:
                    lab[e] = len(order)
                    order.append(e)
                    q.append(e)
        t = min(lab[d] for d in self.faces[self.target_face])
        return (tuple(lab[self.nxt[d]] for d in order), tuple(lab[self.twin[d]] for d in order), t)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def canonical(self) -> "Triangulation":
        nxt, twin, t = self.code
        # the target dart is the smallest label in its face
        return Triangulation(nxt, twin, 0, t, self.cls, self.labelings)

    def swapped(self) -> "Triangulation":
        """Same map with the roles of the two 2-gons exchanged."""
        return Triangulation(self.nxt, self.twin, self.target, self.start, self.cls, self.labelings)


def fatten(nxt: list, twin: list, d: int) -> tuple:
    """Replace the edge of ``d`` by a 2-gon; returns the darts (a, b) of the 2-gon.

    ``a`` is glued to ``d`` and ``b`` to ``twin[d]``.
    """
    a, b = len(nxt), len(nxt) + 1
    e = twin[d]
    nxt.extend([b, a])
    twin.extend([d, e])
    twin[d], twin[e] = a, b
    return a, b


# --------------------------------------------------------------------------
# plain-text exchange format

_HEADER = "# qlesim map v1"


def dumps(tri: Triangulation) -> str:
    """Edge list with rotation orders.

    Lines: header, ``class``, ``start``/``target`` darts, one ``edge`` line per
    edge (``edge <dart> <twin> <tail> <head>``), one ``rotation`` line per
    vertex listing its outgoing darts counter-clockwise, and one ``face`` line
    per face listing its darts in order.
    """
    out = [_HEADER, f"class {tri.cls}", f"darts {tri.n_darts}",
           f"start {tri.start}", f"target {tri.target}"]
    for d in range(tri.n_darts):
        if d < tri.twin[d]:
            out.append(f"edge {d} {tri.twin[d]} {tri.tail[d]} {tri.head(d)}")
    rot = [tri.nxt[tri.twin[d]] for d in range(tri.n_darts)]
    for cyc in sorted(orbits(rot), key=lambda c: tri.tail[c[0]]):
        out.append(f"rotation {tri.tail[cyc[0]]} : " + " ".join(map(str, cyc)))
    for cyc in tri.faces:
        out.append("face " + " ".join(map(str, cyc)))
    return "\n".join(out) + "\n"


def loads(text: str) -> Triangulation:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    kv = {ln[0]: ln[1:] for ln in lines if ln[0] in ("class", "darts", "start", "target")}
    n = int(kv["darts"][0])
    twin = [-1] * n
    nxt = [-1] * n
    for ln in lines:
        if ln[0] == "edge":
            a, b = int(ln[1]), int(ln[2])
            twin[a], twin[b] = b, a
        elif ln[0] == "face":
            cyc = [int(x) for x in ln[1:]]
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                nxt[x] = y
    if -1 in twin or -1 in nxt:
        raise ValueError("incomplete map description")
    tri = Triangulation(nxt, twin, int(kv["start"][0]), int(kv["target"][0]), kv["class"][0])
    # cross-check the rotation lines against the permutations
    for ln in lines:
        if ln[0] == "rotation":
            cyc = [int(x) for x in ln[3:]]
            if any(tri.nxt[tri.twin[x]] != y for x, y in zip(cyc, cyc[1:] + cyc[:1])):
                raise ValueError("rotation line disagrees with faces and edges")
    return tri.validate()
