"""Embedded planar multigraph core.

Graphs are combinatorial embeddings: darts (directed half-edges) with a
rotation system giving the counterclockwise order of outgoing darts at each
vertex. Edge ``e`` owns darts ``2e`` and ``2e+1``; ``twin(d) == d ^ 1``.
Faces are the orbits of ``next(d) = rot_next[twin(d)]``. Weights are exact
nonnegative integers, with ``INF`` (float infinity) as the saturating
sentinel used for artificial triangulation edges.
"""

from __future__ import annotations

import random
from array import array
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    BadParams,
    EulerViolation,
    InconsistentRotation,
    NegativeWeight,
    NotAClosedWalk,
    ParseError,
    UnsupportedSelfCrossing,
)

try:
    import numpy as _np
except ImportError:  # pragma: no cover
    _np = None

INF = float("inf")

Weight = Union[int, float]

# Edge provenance labels.
LABEL_REAL = 0
LABEL_ZERO = 1  # artificial zero-weight edge from degree reduction
LABEL_INF = 2  # artificial infinite-weight triangulation edge

LABEL_NAMES = {LABEL_REAL: "real", LABEL_ZERO: "artificial-zero", LABEL_INF: "artificial-inf"}


def _check_weight(w: Weight, e: int) -> Weight:
    if w == INF:
        return INF
    if not isinstance(w, int) or isinstance(w, bool):
        raise NegativeWeight(f"edge {e}: weight must be a nonnegative int or INF, got {w!r}")
    if w < 0:
        raise NegativeWeight(f"edge {e}: negative weight {w}")
    return w


class PlanarGraph:
    """Immutable rotation-system-embedded weighted planar multigraph."""

    __slots__ = (
        "n",
        "m",
        "tail",
        "rot_next",
        "rot_prev",
        "vertex_dart",
        "weight",
        "label",
        "face_of",
        "nfaces",
        "face_dart",
        "face_size",
        "_nx_cache",
    )

    def __init__(
        self,
        tails: Sequence[int],
        rotations: Sequence[Sequence[int]],
        weights: Sequence[Weight],
        labels: Optional[Sequence[int]] = None,
        validate: bool = True,
    ):
        n = len(rotations)
        m = len(weights)
        if len(tails) != 2 * m:
            raise InconsistentRotation(f"{len(tails)} tails for {m} edges")
        self.n = n
        self.m = m
        self.tail = array("i", tails)
        self.weight = [_check_weight(w, e) for e, w in enumerate(weights)]
        self.label = bytes(labels) if labels is not None else bytes(m)
        rn = array("i", [-1]) * (2 * m) if m else array("i")
        rp = array("i", [-1]) * (2 * m) if m else array("i")
        vd = array("i", [-1]) * n if n else array("i")
        if validate:
            seen = bytearray(2 * m)
            tails_arr = self.tail
            for v, rot in enumerate(rotations):
                k = len(rot)
                if k == 0:
                    continue
                vd[v] = rot[0]
                for i, d in enumerate(rot):
                    if d < 0 or d >= 2 * m or seen[d]:
                        raise InconsistentRotation(f"dart {d} repeated or out of range at vertex {v}")
                    if tails_arr[d] != v:
                        raise InconsistentRotation(f"dart {d} listed at vertex {v} but tails at {tails_arr[d]}")
                    seen[d] = 1
                    rn[d] = rot[(i + 1) % k]
                    rp[d] = rot[(i - 1) % k]
            if m and not all(seen):
                missing = seen.index(0)
                raise InconsistentRotation(f"dart {missing} missing from every rotation")
        else:
            for v, rot in enumerate(rotations):
                k = len(rot)
                if k == 0:
                    continue
                vd[v] = rot[0]
                prev = rot[-1]
                for d in rot:
                    rn[prev] = d
                    rp[d] = prev
                    prev = d
        self.rot_next = rn
        self.rot_prev = rp
        self.vertex_dart = vd
        self._compute_faces()
        self._nx_cache = None
        if validate:
            self._check_euler()

    # -- basic accessors -------------------------------------------------

    def head(self, d: int) -> int:
        return self.tail[d ^ 1]

    def degree(self, v: int) -> int:
        d0 = self.vertex_dart[v]
        if d0 < 0:
            return 0
        k, d = 1, self.rot_next[d0]
        while d != d0:
            k += 1
            d = self.rot_next[d]
        return k

    def rotation(self, v: int) -> list[int]:
        """Counterclockwise list of outgoing darts at ``v``."""
        d0 = self.vertex_dart[v]
        if d0 < 0:
            return []
        out, d = [d0], self.rot_next[d0]
        while d != d0:
            out.append(d)
            d = self.rot_next[d]
        return out

    def next_in_face(self, d: int) -> int:
        return self.rot_next[d ^ 1]

    def face_walk(self, f: int) -> list[int]:
        d0 = self.face_dart[f]
        out, d = [d0], self.next_in_face(d0)
        while d != d0:
            out.append(d)
            d = self.next_in_face(d)
        return out

    def edges_of_vertex(self, v: int) -> list[int]:
        return [d >> 1 for d in self.rotation(v)]

    def total_finite_weight(self) -> int:
        return sum(w for w in self.weight if w != INF)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        cnt = 1
        while stack:
            v = stack.pop()
            for d in self.rotation(v):
                u = self.head(d)
                if not seen[u]:
                    seen[u] = 1
                    cnt += 1
                    stack.append(u)
        return cnt == self.n

    @property
    def outer_face(self) -> int:
        """Largest face, smallest id on ties. Hole counting only."""
        best = 0
        for f in range(1, self.nfaces):
            if self.face_size[f] > self.face_size[best]:
                best = f
        return best

    # -- construction helpers --------------------------------------------

    def _compute_faces(self) -> None:
        m2 = 2 * self.m
        if m2 >= 100_000 and _np is not None:
            self._compute_faces_np()
            return
        face_of = array("i", [-1]) * m2 if m2 else array("i")
        face_dart: list[int] = []
        face_size: list[int] = []
        nxt = self.rot_next
        for d0 in range(m2):
            if face_of[d0] >= 0:
                continue
            f = len(face_dart)
            face_dart.append(d0)
            sz = 0
            d = d0
            while True:
                face_of[d] = f
                sz += 1
                d = nxt[d ^ 1]
                if d == d0:
                    break
            face_size.append(sz)
        self.face_of = face_of
        self.nfaces = len(face_dart)
        self.face_dart = face_dart
        self.face_size = face_size

    def _compute_faces_np(self) -> None:
        # orbit labeling by pointer doubling: label every dart with the
        # minimum dart id on its face orbit
        m2 = 2 * self.m
        rn = _np.frombuffer(self.rot_next, dtype=_np.int32).astype(_np.int64)
        darts = _np.arange(m2, dtype=_np.int64)
        nxt = rn[darts ^ 1]
        label = _np.minimum(darts, nxt)
        while True:
            label2 = _np.minimum(label, label[nxt])
            nxt = nxt[nxt]
            if _np.array_equal(label2, label):
                break
            label = label2
        reps, face_of64, counts = _np.unique(label, return_inverse=True, return_counts=True)
        self.face_of = array("i", face_of64.astype(_np.int32).tobytes())
        self.nfaces = len(reps)
        self.face_dart = reps.tolist()
        self.face_size = counts.tolist()

    def _check_euler(self) -> None:
        # Euler characteristic per connected component; isolated vertices
        # count one face (their own sphere).
        comp = array("i", [-1]) * self.n if self.n else array("i")
        ncomp = 0
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = ncomp
            stack = [s]
            while stack:
                v = stack.pop()
                for d in self.rotation(v):
                    u = self.tail[d ^ 1]
                    if comp[u] < 0:
                        comp[u] = ncomp
                        stack.append(u)
            ncomp += 1
        vcnt = [0] * ncomp
        ecnt = [0] * ncomp
        fcnt = [0] * ncomp
        for v in range(self.n):
            vcnt[comp[v]] += 1
        for e in range(self.m):
            ecnt[comp[self.tail[2 * e]]] += 1
        for f in range(self.nfaces):
            fcnt[comp[self.tail[self.face_dart[f]]]] += 1
        for c in range(ncomp):
            if fcnt[c] == 0:
                fcnt[c] = 1  # isolated vertex
            if vcnt[c] - ecnt[c] + fcnt[c] != 2:
                raise EulerViolation(
                    f"component {c}: V-E+F = {vcnt[c]}-{ecnt[c]}+{fcnt[c]} != 2 (not a sphere embedding)"
                )


# ---------------------------------------------------------------------------
# Cycles


@dataclass
class Cycle:
    """A closed dart walk. ``darts`` is the simple part; a doubly-traversed
    root-side tail (fundamental cycles) is kept separately in ``tail_darts``."""

    darts: list[int]
    total_length: Weight
    simple: bool = True
    tail_darts: list[int] = field(default_factory=list)

    def edge_set(self) -> set[int]:
        return {d >> 1 for d in self.darts}


def walk_is_closed(g: PlanarGraph, darts: Sequence[int]) -> bool:
    if not darts:
        return False
    return all(g.head(darts[i]) == g.tail[darts[(i + 1) % len(darts)]] for i in range(len(darts)))


def walk_length(g: PlanarGraph, darts: Iterable[int]) -> Weight:
    total: Weight = 0
    for d in darts:
        total += g.weight[d >> 1]
    return total


def trim_tail(g: PlanarGraph, darts: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split a closed walk into (simple cycle, doubled tail prefix).

    Accepts either a simple cycle or a simple cycle plus a tail traversed
    out and back at the walk's start/end. Raises otherwise.
    """
    if not darts or not walk_is_closed(g, darts):
        raise NotAClosedWalk("walk is empty or not closed")
    w = list(darts)
    tail: list[int] = []
    while len(w) >= 2 and w[0] == (w[-1] ^ 1):
        tail.append(w[0])
        w = w[1:-1]
    if not w:
        raise UnsupportedSelfCrossing("walk reduces to a doubled path; no cycle remains")
    seen = set()
    for d in w:
        v = g.tail[d]
        if v in seen:
            raise UnsupportedSelfCrossing(f"walk revisits vertex {v} outside the tail")
        seen.add(v)
    return w, tail


def make_cycle(g: PlanarGraph, darts: Sequence[int]) -> Cycle:
    simple, tail = trim_tail(g, darts)
    return Cycle(simple, walk_length(g, simple), True, tail)


def validate_cycle(g: PlanarGraph, cyc: Cycle, require_real: bool = True) -> None:
    from .errors import InternalInvariantError

    if not walk_is_closed(g, cyc.darts):
        raise InternalInvariantError("cycle darts are not a closed walk")
    if walk_length(g, cyc.darts) != cyc.total_length:
        raise InternalInvariantError("cycle length does not re-sum")
    if require_real and not any(g.label[d >> 1] == LABEL_REAL for d in cyc.darts):
        raise InternalInvariantError("cycle contains no real edge")


# ---------------------------------------------------------------------------
# build_graph from neighbor lists


def build_graph(
    rotation_spec: Sequence[Sequence[Union[int, tuple[int, int]]]],
    weights: Union[Sequence[Weight], dict[int, Weight]],
) -> PlanarGraph:
    """Build a validated graph from per-vertex ccw neighbor lists.

    Entries are neighbor vertex ids, or ``(neighbor, edge_id)`` pairs to
    disambiguate parallel edges. Without explicit ids, the k-th occurrence
    of ``v`` at ``u`` pairs with the (count-1-k)-th occurrence of ``u`` at
    ``v`` (the planar bigon pairing) and edges are numbered by first
    appearance in scan order.
    """
    n = len(rotation_spec)
    slots: list[list[tuple[int, Optional[int]]]] = []
    for u, row in enumerate(rotation_spec):
        cur = []
        for item in row:
            if isinstance(item, tuple):
                v, eid = item
            else:
                v, eid = item, None
            if not 0 <= v < n:
                raise InconsistentRotation(f"vertex {u} lists unknown neighbor {v}")
            cur.append((v, eid))
        slots.append(cur)

    # occurrences per unordered pair per side
    occ: dict[tuple[int, int], dict[int, list[int]]] = {}
    for u, row in enumerate(slots):
        for i, (v, _) in enumerate(row):
            key = (min(u, v), max(u, v))
            occ.setdefault(key, {}).setdefault(u, []).append(i)

    explicit: dict[int, list[tuple[int, int]]] = {}
    edge_of_slot: dict[tuple[int, int], int] = {}
    auto_pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for (a, b), sides in sorted(occ.items()):
        rows_a = sides.get(a, [])
        rows_b = sides.get(b, [])
        if a == b:
            # self-loop: both darts listed at the same vertex
            if len(rows_a) % 2:
                raise InconsistentRotation(f"vertex {a} lists itself an odd number of times")
            ids = [slots[a][i][1] for i in rows_a]
            if any(x is not None for x in ids):
                by_id: dict[int, list[int]] = {}
                for i in rows_a:
                    eid = slots[a][i][1]
                    if eid is None:
                        raise InconsistentRotation(f"loop at {a} mixes explicit and implicit edge ids")
                    by_id.setdefault(eid, []).append(i)
                for eid, pos in sorted(by_id.items()):
                    if len(pos) != 2:
                        raise InconsistentRotation(f"edge {eid} has {len(pos)} slots")
                    explicit.setdefault(eid, []).extend([(a, pos[0]), (a, pos[1])])
            else:
                for i in range(0, len(rows_a), 2):
                    auto_pairs.append(((a, rows_a[i]), (a, rows_a[i + 1])))
            continue
        if len(rows_a) != len(rows_b):
            raise InconsistentRotation(
                f"{a} lists {b} x{len(rows_a)} but {b} lists {a} x{len(rows_b)}"
            )
        ids_a = [slots[a][i][1] for i in rows_a]
        ids_b = [slots[b][i][1] for i in rows_b]
        if any(x is not None for x in ids_a + ids_b):
            if any(x is None for x in ids_a + ids_b):
                raise InconsistentRotation(f"pair ({a},{b}) mixes explicit and implicit edge ids")
            for (side, rows, ids) in ((a, rows_a, ids_a), (b, rows_b, ids_b)):
                for i, eid in zip(rows, ids):
                    explicit.setdefault(eid, []).append((side, i))
        else:
            for k, i in enumerate(rows_a):
                j = rows_b[len(rows_b) - 1 - k]
                auto_pairs.append(((a, i), (b, j)))

    for eid, ends in explicit.items():
        if len(ends) != 2:
            raise InconsistentRotation(f"edge {eid} has {len(ends)} endpoints")

    # assign edge ids: explicit first (as given), autos by scan order
    pair_list: list[tuple[int, tuple[int, int], tuple[int, int]]] = []
    for eid, (s1, s2) in sorted(explicit.items()):
        pair_list.append((eid, s1, s2))
    used = set(explicit)
    nxt_id = 0
    for s1, s2 in sorted(auto_pairs, key=lambda p: min(p)):
        while nxt_id in used:
            nxt_id += 1
        used.add(nxt_id)
        pair_list.append((nxt_id, min(s1, s2), max(s1, s2)))

    m = len(pair_list)
    if sorted(e for e, _, _ in pair_list) != list(range(m)):
        raise InconsistentRotation("edge ids are not 0..m-1")

    dart_at: dict[tuple[int, int], int] = {}
    tails = [0] * (2 * m)
    for eid, (u, i), (v, j) in pair_list:
        dart_at[(u, i)] = 2 * eid
        dart_at[(v, j)] = 2 * eid + 1
        tails[2 * eid] = u
        tails[2 * eid + 1] = v
    rotations = [[dart_at[(u, i)] for i in range(len(slots[u]))] for u in range(n)]

    if isinstance(weights, dict):
        wlist = [weights[e] for e in range(m)]
    else:
        wlist = list(weights)
        if len(wlist) != m:
            raise InconsistentRotation(f"{len(wlist)} weights for {m} edges")
    return PlanarGraph(tails, rotations, wlist)


# ---------------------------------------------------------------------------
# Mutable editor used by triangulation and vertex insertion


class GraphEditor:
    """Linked-list view of a graph's rotations supporting local surgery."""

    def __init__(self, g: PlanarGraph):
        self.g = g
        self.tail = list(g.tail)
        self.rn = list(g.rot_next)
        self.rp = list(g.rot_prev)
        self.vertex_dart = list(g.vertex_dart)
        self.weight = list(g.weight)
        self.label = list(g.label)
        self.alive = bytearray(b"\x01") * g.m if g.m else bytearray()
        self.deg = [0] * g.n
        for d in range(2 * g.m):
            self.deg[g.tail[d]] += 1

    @property
    def m(self) -> int:
        return len(self.weight)

    def _grow(self) -> int:
        e = len(self.weight)
        self.tail.extend((-1, -1))
        self.rn.extend((-1, -1))
        self.rp.extend((-1, -1))
        self.weight.append(0)
        self.label.append(LABEL_REAL)
        self.alive.append(1)
        return e

    def _insert_before(self, d: int, anchor: int, v: int) -> None:
        """Insert dart ``d`` (tail v) as the ccw predecessor of ``anchor``."""
        self.tail[d] = v
        if anchor < 0:
            self.rn[d] = d
            self.rp[d] = d
            self.vertex_dart[v] = d
            return
        p = self.rp[anchor]
        self.rn[p] = d
        self.rp[d] = p
        self.rn[d] = anchor
        self.rp[anchor] = d

    def add_edge(self, u: int, before_u: int, v: int, before_v: int, w: Weight, label: int) -> int:
        """New edge u-v; dart 2e precedes ``before_u`` at u, 2e+1 precedes
        ``before_v`` at v. Pass anchor -1 for an isolated endpoint."""
        e = self._grow()
        self.weight[e] = w
        self.label[e] = label
        self._insert_before(2 * e, before_u, u)
        self._insert_before(2 * e + 1, before_v, v)
        self.deg[u] += 1
        self.deg[v] += 1
        return e

    def new_vertex(self) -> int:
        self.vertex_dart.append(-1)
        self.deg.append(0)
        return len(self.vertex_dart) - 1

    def remove_edge(self, e: int) -> None:
        self.alive[e] = 0
        for d in (2 * e, 2 * e + 1):
            v = self.tail[d]
            self.deg[v] -= 1
            if self.rn[d] == d:
                self.vertex_dart[v] = -1
            else:
                self.rn[self.rp[d]] = self.rn[d]
                self.rp[self.rn[d]] = self.rp[d]
                if self.vertex_dart[v] == d:
                    self.vertex_dart[v] = self.rn[d]

    def rotation(self, v: int) -> list[int]:
        d0 = self.vertex_dart[v]
        if d0 < 0:
            return []
        out, d = [d0], self.rn[d0]
        while d != d0:
            out.append(d)
            d = self.rn[d]
        return out

    def freeze(self, validate: bool = True) -> tuple[PlanarGraph, list[int]]:
        """Build an immutable graph; returns (graph, edge_map new->old id).

        Dead edges are dropped and ids compacted; vertices keep their ids.
        """
        emap = [e for e in range(self.m) if self.alive[e]]
        new_id = {e: i for i, e in enumerate(emap)}
        tails = []
        for e in emap:
            tails.extend((self.tail[2 * e], self.tail[2 * e + 1]))
        nv = len(self.vertex_dart)
        rotations = []
        for v in range(nv):
            rot = []
            for d in self.rotation(v):
                e = d >> 1
                rot.append(2 * new_id[e] + (d & 1))
            rotations.append(rot)
        weights = [self.weight[e] for e in emap]
        labels = [self.label[e] for e in emap]
        return PlanarGraph(tails, rotations, weights, labels, validate=validate), emap


# ---------------------------------------------------------------------------
# Triangulation (INF chords) and degree reduction (zero paths)


def _triangulate_editor(ed: GraphEditor, walks: list[list[int]]) -> int:
    """Cut every walk of size >= 4 into triangles with INF chords in place.

    Ears are cut at advancing positions, which splits large faces in
    roughly balanced rounds. Returns the number of chords added.
    """
    added = 0
    GREEDY_LIMIT = 8  # small faces pick the lowest-degree chord (keeps hubs intact)
    for walk in walks:
        w = list(walk)
        stuck = 0
        i = 0
        while len(w) > 3:
            k = len(w)
            if stuck >= k:
                break  # alternating multigraph face; cannot be triangulated with chords
            if k <= GREEDY_LIMIT:
                best = None
                for c in range(k):
                    cu, cv = ed.tail[w[c]], ed.tail[w[(c + 2) % k]]
                    if cu == cv:
                        continue
                    key = (ed.deg[cu] + ed.deg[cv], max(ed.deg[cu], ed.deg[cv]), c)
                    if best is None or key < best:
                        best = key
                        i = c
                if best is None:
                    break
            i %= k
            j = (i + 2) % k
            u = ed.tail[w[i]]
            v = ed.tail[w[j]]
            if u == v:
                i += 1
                stuck += 1
                continue
            e = ed.add_edge(u, w[i], v, w[j], INF, LABEL_INF)
            added += 1
            # ear (2e+1, w[i], w[i+1]) split off; dart 2e continues the big face
            if j > i:
                w = w[:i] + [2 * e] + w[j:]
            elif j == 0:  # i == k-2
                w = w[:i] + [2 * e]
            else:  # i == k-1, j == 1
                w = [2 * e] + w[1 : k - 1]
            i += 1
            stuck = 0
    return added


def triangulate(g: PlanarGraph, validate: bool = True) -> tuple[PlanarGraph, list[int]]:
    """Add INF chords until every face walk has size <= 3.

    Returns (graph, edge_map) where edge ids < g.m are unchanged and new
    edges are appended; edge_map[new_e] == old_e for preserved edges.
    """
    ed = GraphEditor(g)
    walks = [g.face_walk(f) for f in range(g.nfaces) if g.face_size[f] > 3]
    _triangulate_editor(ed, walks)
    out, emap = ed.freeze(validate=validate)
    return out, emap


def reduce_degrees(g: PlanarGraph) -> tuple[PlanarGraph, list[int]]:
    """Split every vertex of degree > 3 into a zero-weight path of copies.

    Returns (graph, vertex_origin); vertex ids < g.n are the first copies.
    """
    tails = list(g.tail)
    weights = list(g.weight)
    labels = list(g.label)
    rotations: list[list[int]] = [[] for _ in range(g.n)]
    vertex_origin = list(range(g.n))

    def add_zero_edge(u: int, v: int) -> int:
        e = len(weights)
        weights.append(0)
        labels.append(LABEL_ZERO)
        tails.extend((u, v))
        return e

    extra_rot: list[list[int]] = []
    for v in range(g.n):
        rot = g.rotation(v)
        k = len(rot)
        if k <= 3:
            rotations[v] = rot
            continue
        copies = [v]
        for _ in range(k - 3):
            copies.append(g.n + len(extra_rot))
            extra_rot.append([])
            vertex_origin.append(v)
        zedges = [add_zero_edge(copies[i], copies[i + 1]) for i in range(len(copies) - 1)]
        # copy i keeps: first copy darts rot[0], rot[1]; middle copy i dart rot[i+1];
        # last copy darts rot[k-2], rot[k-1]
        def assign(copy_idx: int, darts: list[int]) -> None:
            c = copies[copy_idx]
            for d in darts:
                tails[d] = c
            if c < g.n:
                rotations[c] = darts
            else:
                extra_rot[c - g.n] = darts

        last = len(copies) - 1
        for ci in range(len(copies)):
            if ci == 0:
                assign(0, [rot[0], rot[1], 2 * zedges[0]])
            elif ci == last:
                assign(ci, [2 * zedges[ci - 1] + 1, rot[k - 2], rot[k - 1]])
            else:
                assign(ci, [2 * zedges[ci - 1] + 1, rot[ci + 1], 2 * zedges[ci]])
    out = PlanarGraph(tails, rotations + extra_rot, weights, labels)
    return out, vertex_origin


@dataclass
class NormalizeResult:
    """Normalized graph plus the mapping back to the input.

    Real edges keep their ids and dart orientations, so a dart ``d`` of a
    real edge in the normalized graph is the dart ``d`` of the input.
    """

    graph: PlanarGraph
    original: PlanarGraph
    vertex_origin: list[int]

    def original_m(self) -> int:
        return self.original.m

    def map_cycle(self, darts: Sequence[int]) -> list[int]:
        m0 = self.original.m
        out = [d for d in darts if (d >> 1) < m0]
        return out


def normalize(g: PlanarGraph) -> NormalizeResult:
    """Triangulate with INF edges, then reduce all degrees to <= 3 with
    zero-weight path expansion. Cycles over real edges are preserved
    weight-for-weight; no artificial zero-weight cycle exists."""
    tri, emap = triangulate(g)
    assert emap[: g.m] == list(range(g.m))
    out, vertex_origin = reduce_degrees(tri)
    return NormalizeResult(out, g, vertex_origin)


# ---------------------------------------------------------------------------
# Degree-2 contraction


def _contract_is_noop(g: PlanarGraph) -> bool:
    """True when the graph has no degree-2 vertex, no parallel pair, and
    no self-loop, so contraction would return it unchanged."""
    tails = _np.frombuffer(g.tail, dtype=_np.int32).astype(_np.int64)
    heads = tails.copy()
    heads[0::2] = tails[1::2]
    heads[1::2] = tails[0::2]
    if (tails[0::2] == tails[1::2]).any():
        return False  # self-loop
    deg = _np.bincount(tails, minlength=g.n)
    if (deg == 2).any():
        return False
    u = tails[0::2]
    v = tails[1::2]
    lo = _np.minimum(u, v)
    hi = _np.maximum(u, v)
    key = lo * (2 ** 32) + hi
    uniq = _np.unique(key)
    return len(uniq) == g.m


@dataclass
class ContractResult:
    graph: PlanarGraph
    candidate: Weight
    candidate_darts: Optional[list[int]]  # in the input graph
    origin_single: "array"  # per new edge: input dart along dart 2e (single-dart chains)
    origin_multi: dict  # new edge -> tuple of input darts (merged chains)
    vertex_map: list[int]  # new vertex id -> input vertex id

    @property
    def edge_chain(self) -> list[tuple[int, ...]]:
        out = []
        for e in range(self.graph.m):
            seq = self.origin_multi.get(e)
            out.append(seq if seq is not None else (self.origin_single[e],))
        return out


def contract_degree2(g: PlanarGraph, validate: bool = True) -> ContractResult:
    """Remove degree-2 vertices by merging their edges, dedupe parallel
    classes keeping the lightest edge, and drop self-loops. Every removed
    2-cycle or loop contributes a candidate cycle length; the best one is
    returned with its witness walk in the input graph."""
    if _np is not None and g.m >= 20_000 and _contract_is_noop(g):
        single = array("i", (2 * e for e in range(g.m)))
        return ContractResult(g, INF, None, single, {}, list(range(g.n)))
    m = g.m
    tail = list(g.tail)
    rn = list(g.rot_next)
    rp = list(g.rot_prev)
    vdart = list(g.vertex_dart)
    weight = list(g.weight)
    alive = bytearray(b"\x01") * m if m else bytearray()
    chain: list[Optional[list[int]]] = [None] * m  # input darts along dart 2e

    def chain_of(d: int) -> list[int]:
        e = d >> 1
        c = chain[e]
        if c is None:
            c = [2 * e]
        return c if d & 1 == 0 else [x ^ 1 for x in reversed(c)]

    candidate: Weight = INF
    cand_darts: Optional[list[int]] = None

    def offer(value: Weight, darts_fn) -> None:
        nonlocal candidate, cand_darts
        if value < candidate:
            candidate = value
            cand_darts = darts_fn()

    def unlink(d: int) -> None:
        v = tail[d]
        if rn[d] == d:
            vdart[v] = -1
        else:
            rn[rp[d]] = rn[d]
            rp[rn[d]] = rp[d]
            if vdart[v] == d:
                vdart[v] = rn[d]

    def remove_edge(e: int) -> None:
        alive[e] = 0
        unlink(2 * e)
        unlink(2 * e + 1)

    def rotation_darts(v: int) -> list[int]:
        d0 = vdart[v]
        if d0 < 0:
            return []
        out, d = [d0], rn[d0]
        while d != d0:
            out.append(d)
            d = rn[d]
        return out

    pending = deque()
    queued = bytearray(g.n)

    def enqueue(v: int) -> None:
        if not queued[v]:
            queued[v] = 1
            pending.append(v)

    # initial sweep: loops, then parallel classes
    groups: dict[tuple[int, int], list[int]] = {}
    for e in range(m):
        u, v = tail[2 * e], tail[2 * e + 1]
        if u == v:
            offer(weight[e], lambda e=e: [2 * e])
            remove_edge(e)
            enqueue(u)
        else:
            groups.setdefault((min(u, v), max(u, v)), []).append(e)
    for (u, v), es in sorted(groups.items()):
        es = [e for e in es if alive[e]]
        if len(es) < 2:
            continue
        es.sort(key=lambda e: (weight[e], e))
        e1, e2 = es[0], es[1]

        def two_cycle(e1=e1, e2=e2, u=u):
            d1 = 2 * e1 if tail[2 * e1] == u else 2 * e1 + 1
            d2 = 2 * e2 + 1 if tail[2 * e2] == u else 2 * e2
            return chain_of(d1) + chain_of(d2)

        offer(weight[e1] + weight[e2], two_cycle)
        for e in es[1:]:
            remove_edge(e)
        enqueue(u)
        enqueue(v)

    for v in range(g.n):
        enqueue(v)

    def dedupe_at(x: int, e_new: int) -> None:
        """After e_new gained endpoint pair (x, y), drop the heavier of any
        parallel duplicate, crediting the 2-cycle candidate."""
        dx = 2 * e_new if tail[2 * e_new] == x else 2 * e_new + 1
        y = tail[dx ^ 1]
        for d in rotation_darts(x):
            f = d >> 1
            if f == e_new or not alive[f]:
                continue
            if tail[d ^ 1] == y:
                lo, hi = sorted((e_new, f), key=lambda e: (weight[e], e))

                def two_cycle(lo=lo, hi=hi, x=x):
                    dl = 2 * lo if tail[2 * lo] == x else 2 * lo + 1
                    dh = 2 * hi + 1 if tail[2 * hi] == x else 2 * hi
                    return chain_of(dl) + chain_of(dh)

                offer(weight[lo] + weight[hi], two_cycle)
                remove_edge(hi)
                enqueue(x)
                enqueue(y)
                return

    while pending:
        v = pending.popleft()
        queued[v] = 0
        darts = rotation_darts(v)
        if len(darts) != 2:
            continue
        p, q = darts
        e1, e2 = p >> 1, q >> 1
        if e1 == e2:  # both darts of one loop (defensive; loops were swept)
            offer(weight[e1], lambda e1=e1: chain_of(2 * e1))
            remove_edge(e1)
            continue
        x, y = tail[p ^ 1], tail[q ^ 1]
        if x == v or y == v:
            continue
        if x == y:
            lo, hi = sorted((e1, e2), key=lambda e: (weight[e], e))

            def two_cycle(lo=lo, hi=hi, v=v):
                dl = 2 * lo + 1 if tail[2 * lo] == v else 2 * lo
                dh = 2 * hi if tail[2 * hi] == v else 2 * hi + 1
                return chain_of(dl) + chain_of(dh)

            offer(weight[lo] + weight[hi], two_cycle)
            remove_edge(hi)
            enqueue(v)
            enqueue(x)
            continue
        # contract v: merge e2 into e1's slot; dart p^1 keeps x's rotation
        # position, dart p takes over q^1's position at y.
        new_chain = chain_of(p ^ 1) + chain_of(q)
        a, b = rp[q ^ 1], rn[q ^ 1]
        if a == (q ^ 1):
            rn[p] = rp[p] = p
        else:
            rn[a] = p
            rp[p] = a
            rn[p] = b
            rp[b] = p
        if vdart[y] == (q ^ 1):
            vdart[y] = p
        tail[p] = y
        vdart[v] = -1
        weight[e1] = weight[e1] + weight[e2]
        alive[e2] = 0
        chain[e1] = new_chain if (p ^ 1) == 2 * e1 else [x ^ 1 for x in reversed(new_chain)]
        dedupe_at(x, e1)
        if alive[e1]:
            dedupe_at(y, e1)
        enqueue(x)
        enqueue(y)

    # freeze
    emap = [e for e in range(m) if alive[e]]
    vkeep = sorted({tail[2 * e] for e in emap} | {tail[2 * e + 1] for e in emap})
    vmap_new_to_old = vkeep
    vnew = {v: i for i, v in enumerate(vkeep)}
    tails_out: list[int] = []
    for e in emap:
        tails_out.extend((vnew[tail[2 * e]], vnew[tail[2 * e + 1]]))
    eid = {e: i for i, e in enumerate(emap)}
    rotations = []
    for v in vkeep:
        rotations.append([2 * eid[d >> 1] + (d & 1) for d in rotation_darts(v)])
    weights_out = [weight[e] for e in emap]
    labels_out = [g.label[e] for e in emap]
    # merged-edge labels: a chain that mixes labels is real if any member is
    for i, e in enumerate(emap):
        if chain[e] is not None:
            mem = [g.label[d >> 1] for d in chain[e]]
            if LABEL_INF in mem:
                labels_out[i] = LABEL_INF
            elif LABEL_REAL in mem:
                labels_out[i] = LABEL_REAL
            else:
                labels_out[i] = LABEL_ZERO
    out = PlanarGraph(tails_out, rotations, weights_out, labels_out, validate=validate)
    single = array("i", [-1]) * len(emap) if emap else array("i")
    multi: dict = {}
    for i, e in enumerate(emap):
        c = chain[e]
        if c is None:
            single[i] = 2 * e
        elif len(c) == 1:
            single[i] = c[0]
        else:
            multi[i] = tuple(c)
    return ContractResult(out, candidate, cand_darts, single, multi, vmap_new_to_old)


# ---------------------------------------------------------------------------
# Dual graphs


@dataclass
class DualMap:
    graph: PlanarGraph  # the dual
    # primal face f <-> dual vertex f (identity); primal edge e <-> dual edge e.

    def face_of_primal_dart(self, d: int) -> int:
        return self.graph.tail[d]


def dual(g: PlanarGraph) -> DualMap:
    """One dual vertex per face, one dual edge per primal edge with equal
    weight; the dual dart ``d`` runs from ``face_of[d]`` to ``face_of[d^1]``
    and the rotation at a face is its orbit order."""
    tails = [g.face_of[d] for d in range(2 * g.m)]
    rotations = [g.face_walk(f) for f in range(g.nfaces)]
    dg = PlanarGraph(tails, rotations, list(g.weight), list(g.label))
    return DualMap(dg)


# ---------------------------------------------------------------------------
# Splitting along a cycle


@dataclass
class SplitResult:
    interior: PlanarGraph
    exterior: PlanarGraph
    interior_edge_map: list[int]  # side edge id -> parent edge id
    exterior_edge_map: list[int]
    interior_vertex_map: list[int]
    exterior_vertex_map: list[int]
    interior_faces: set[int]  # parent faces assigned to each side
    exterior_faces: set[int]


def side_faces(g: PlanarGraph, cycle_darts: Sequence[int]) -> tuple[set[int], set[int]]:
    """Partition faces into the two sides of a simple cycle; the first set
    contains the faces left of the walk."""
    cyc_edges = {d >> 1 for d in cycle_darts}
    seed = g.face_of[cycle_darts[0]]
    seen = {seed}
    stack = [seed]
    while stack:
        f = stack.pop()
        for d in g.face_walk(f):
            if (d >> 1) in cyc_edges:
                continue
            f2 = g.face_of[d ^ 1]
            if f2 not in seen:
                seen.add(f2)
                stack.append(f2)
    other = set(range(g.nfaces)) - seen
    return seen, other


def _induce_side(g: PlanarGraph, faces: set[int], cyc_edges: set[int], validate: bool = True) -> tuple[PlanarGraph, list[int], list[int]]:
    face_of = g.face_of
    gtail = g.tail
    keep: list[int] = []
    in_keep = bytearray(g.m)
    for e in range(g.m):
        if face_of[2 * e] in faces or face_of[2 * e + 1] in faces:
            keep.append(e)
            in_keep[e] = 1
    eid = {e: i for i, e in enumerate(keep)}
    vset = sorted({gtail[2 * e] for e in keep} | {gtail[2 * e + 1] for e in keep})
    vnew = {v: i for i, v in enumerate(vset)}
    tails = []
    for e in keep:
        tails.extend((vnew[gtail[2 * e]], vnew[gtail[2 * e + 1]]))
    rn = g.rot_next
    vdart = g.vertex_dart
    rotations = []
    for v in vset:
        rot = []
        d0 = vdart[v]
        d = d0
        while True:
            if in_keep[d >> 1]:
                rot.append(2 * eid[d >> 1] + (d & 1))
            d = rn[d]
            if d == d0:
                break
        rotations.append(rot)
    weights = [g.weight[e] for e in keep]
    labels = [g.label[e] for e in keep]
    return PlanarGraph(tails, rotations, weights, labels, validate=validate), keep, vset


def split_by_cycle(
    g: PlanarGraph,
    cycle: Union[Cycle, Sequence[int]],
    validate: bool = True,
    sides: Optional[tuple[set[int], set[int]]] = None,
) -> SplitResult:
    """Cut the sphere along a simple cycle (tails are trimmed first).

    Both sides keep the cycle's edges and vertices; every parent face goes
    to exactly one side. ``sides`` accepts a precomputed face partition."""
    darts = cycle.darts if isinstance(cycle, Cycle) else list(cycle)
    simple, _tail = trim_tail(g, darts)
    cyc_edges = {d >> 1 for d in simple}
    left, right = sides if sides is not None else side_faces(g, simple)
    if not right:
        raise UnsupportedSelfCrossing("walk does not separate the sphere")
    gi, emap_i, vmap_i = _induce_side(g, left, cyc_edges, validate)
    ge, emap_e, vmap_e = _induce_side(g, right, cyc_edges, validate)
    return SplitResult(gi, ge, emap_i, emap_e, vmap_i, vmap_e, left, right)


# ---------------------------------------------------------------------------
# Generators


def _parse_weights(spec: str) -> tuple[str, int, int]:
    if spec == "unit":
        return ("unit", 1, 1)
    if spec.startswith("uniform:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise BadParams(f"bad weight spec {spec!r}")
        lo, hi = int(parts[1]), int(parts[2])
        if lo < 0 or hi < lo:
            raise BadParams(f"bad weight range {spec!r}")
        return ("uniform", lo, hi)
    raise BadParams(f"unknown weight spec {spec!r}")


def generate(kind: str, *, rows: int = 0, cols: int = 0, n: int = 0, weights: str = "unit", seed: int = 0) -> PlanarGraph:
    """Deterministic graph generators: ``grid(rows, cols)`` and
    ``random_maximal(n)`` (repeated vertex insertion into a random face)."""
    mode, lo, hi = _parse_weights(weights)
    rng = random.Random(seed)

    def draw() -> int:
        return 1 if mode == "unit" else rng.randint(lo, hi)

    if kind == "grid":
        if rows < 2 or cols < 2:
            raise BadParams("grid needs rows >= 2 and cols >= 2")
        nh = rows * (cols - 1)  # horizontal edges, id = i*(cols-1)+j for (i,j)-(i,j+1)
        nv = (rows - 1) * cols  # vertical edges, id = nh + i*cols+j for (i,j)-(i+1,j)
        m = nh + nv
        tails = [0] * (2 * m)
        for i in range(rows):
            for j in range(cols - 1):
                e = i * (cols - 1) + j
                tails[2 * e] = i * cols + j
                tails[2 * e + 1] = i * cols + j + 1
        for i in range(rows - 1):
            for j in range(cols):
                e = nh + i * cols + j
                tails[2 * e] = i * cols + j
                tails[2 * e + 1] = (i + 1) * cols + j
        rotations = []
        for i in range(rows):
            for j in range(cols):
                rot = []
                if j + 1 < cols:  # east
                    rot.append(2 * (i * (cols - 1) + j))
                if i + 1 < rows:  # north
                    rot.append(2 * (nh + i * cols + j))
                if j > 0:  # west
                    rot.append(2 * (i * (cols - 1) + j - 1) + 1)
                if i > 0:  # south
                    rot.append(2 * (nh + (i - 1) * cols + j) + 1)
                rotations.append(rot)
        wlist = [draw() for _ in range(m)]
        return PlanarGraph(tails, rotations, wlist)

    if kind == "random_maximal":
        if n < 3:
            raise BadParams("random_maximal needs n >= 3")
        # grow from a triangle, keeping the triangular face list incrementally
        tails = [0, 1, 1, 2, 2, 0]
        rotations = [[0, 5], [2, 1], [4, 3]]
        base = PlanarGraph(tails, rotations, [draw(), draw(), draw()])
        ed = GraphEditor(base)
        walks = [base.face_walk(f) for f in range(base.nfaces)]
        for _k in range(3, n):
            f = rng.randrange(len(walks))
            w0, w1, w2 = walks[f]
            v = ed.new_vertex()
            # first edge reaches the isolated v; the rest anchor on its darts
            # so the rotation at v comes out as (m_a, m_c, m_b)
            e0 = ed.add_edge(ed.tail[w0], w0, v, -1, draw(), LABEL_REAL)
            e1 = ed.add_edge(ed.tail[w1], w1, v, 2 * e0 + 1, draw(), LABEL_REAL)
            e2 = ed.add_edge(ed.tail[w2], w2, v, 2 * e1 + 1, draw(), LABEL_REAL)
            walks[f] = [w0, 2 * e1, 2 * e0 + 1]
            walks.append([w1, 2 * e2, 2 * e1 + 1])
            walks.append([w2, 2 * e0, 2 * e2 + 1])
        g, _ = ed.freeze()
        return g

    raise BadParams(f"unknown generator {kind!r}")


# ---------------------------------------------------------------------------
# Text format "plg 1"


def encode(g: PlanarGraph) -> str:
    lines = [f"plg 1 {g.n} {g.m}"]
    for v in range(g.n):
        lines.append("v " + " ".join([str(v)] + [str(d) for d in g.rotation(v)]))
    for e in range(g.m):
        w = "inf" if g.weight[e] == INF else str(g.weight[e])
        lines.append(f"e {e} {2 * e} {2 * e + 1} {w}")
    return "\n".join(lines) + "\n"


def decode(text: str) -> PlanarGraph:
    n = m = -1
    vrows: dict[int, list[int]] = {}
    erows: dict[int, tuple[int, int, Weight]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n < 0:
            if len(toks) != 4 or toks[0] != "plg" or toks[1] != "1":
                raise ParseError("expected header 'plg 1 <n> <m>'", lineno)
            try:
                n, m = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("bad header counts", lineno) from None
            continue
        if toks[0] == "v":
            try:
                vid = int(toks[1])
                darts = [int(t) for t in toks[2:]]
            except ValueError:
                raise ParseError("bad vertex line", lineno) from None
            if not 0 <= vid < n or vid in vrows:
                raise ParseError(f"bad or duplicate vertex id {vid}", lineno)
            vrows[vid] = darts
        elif toks[0] == "e":
            if len(toks) != 5:
                raise ParseError("edge line needs 'e <id> <dart> <twin> <weight|inf>'", lineno)
            try:
                eid, d1, d2 = int(toks[1]), int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("bad edge line", lineno) from None
            if toks[4] == "inf":
                w: Weight = INF
            else:
                try:
                    w = int(toks[4])
                except ValueError:
                    raise ParseError(f"bad weight {toks[4]!r}", lineno) from None
            if not 0 <= eid < m or eid in erows:
                raise ParseError(f"bad or duplicate edge id {eid}", lineno)
            if d1 == d2:
                raise ParseError("twin darts must differ", lineno)
            erows[eid] = (d1, d2, w)
        else:
            raise ParseError(f"unknown record {toks[0]!r}", lineno)
    if n < 0:
        raise ParseError("missing header", 1)
    if len(vrows) != n or len(erows) != m:
        raise ParseError(f"expected {n} vertex and {m} edge lines, got {len(vrows)} and {len(erows)}", 1)
    dart_map: dict[int, int] = {}
    for eid, (d1, d2, _w) in erows.items():
        for file_d, internal in ((d1, 2 * eid), (d2, 2 * eid + 1)):
            if file_d in dart_map:
                raise ParseError(f"dart {file_d} used twice", 1)
            dart_map[file_d] = internal
    tails = [-1] * (2 * m)
    rotations = []
    for v in range(n):
        row = vrows.get(v, [])
        rot = []
        for file_d in row:
            if file_d not in dart_map:
                raise ParseError(f"vertex {v} lists unknown dart {file_d}", 1)
            d = dart_map[file_d]
            if tails[d] != -1:
                raise ParseError(f"dart {file_d} listed at two vertices", 1)
            tails[d] = v
            rot.append(d)
        rotations.append(rot)
    if any(t < 0 for t in tails):
        raise ParseError("some darts missing from vertex lines", 1)
    weights = [erows[e][2] for e in range(m)]
    labels = [LABEL_INF if weights[e] == INF else LABEL_REAL for e in range(m)]
    return PlanarGraph(tails, rotations, weights, labels)


# ---------------------------------------------------------------------------
# Structural equality and canonical forms


def structurally_equal(g1: PlanarGraph, g2: PlanarGraph) -> bool:
    """Identity of vertex/edge ids, rotations and weights (labels ignored:
    the text format does not carry them)."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if list(g1.tail) != list(g2.tail) or g1.weight != g2.weight:
        return False
    return all(g1.rotation(v) == g2.rotation(v) for v in range(g1.n))


def canonical_form(g: PlanarGraph) -> tuple:
    """Canonical string of a connected embedded graph, invariant under
    orientation-preserving isomorphism. Quadratic; intended for small graphs."""
    best = None
    m2 = 2 * g.m
    for start in range(m2):
        code: list = []
        dart_id: dict[int, int] = {}
        order = deque([start])
        dart_id[start] = 0
        while order:
            d = order.popleft()
            for nb in (d ^ 1, g.rot_next[d]):
                if nb not in dart_id:
                    dart_id[nb] = len(dart_id)
                    order.append(nb)
            code.append((dart_id[d ^ 1], dart_id[g.rot_next[d]], g.weight[d >> 1]))
        tup = tuple(code)
        if best is None or tup < best:
            best = tup
    return best if best is not None else ()
