"""Max-flow / min-cut primitives and minimum face-separating cycles.

The max-flow engine is a blocking-flow (Dinic) search over the graph's
darts: dart ``d`` and its twin are the two residual directions of an
undirected edge. INF edges get capacity one above the total finite weight,
which makes them uncuttable without special cases; any answer at or above
that bound is reported as INF.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import INF, Cycle, DualMap, PlanarGraph, Weight, dual
from .errors import EmptyScope, InternalInvariantError, SameFace, SameVertex


def _adjacency(g: PlanarGraph) -> list[list[int]]:
    return [g.rotation(v) for v in range(g.n)]


def _dinic(g: PlanarGraph, adj: list[list[int]], cap: list[int], s: int, t: int, limit: int = 0) -> int:
    """Blocking-flow max flow on the dart structure; mutates ``cap``.

    Iterative advance/retreat search, safe for million-vertex graphs.
    With a positive ``limit`` the search stops once the flow reaches it
    (callers treat such answers as "at least limit").
    """
    tail = g.tail
    n = g.n
    total = 0
    while True:
        level = [-1] * n
        level[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            if v == t:
                break  # deeper levels cannot lie on shortest augmenting paths
            lv = level[v] + 1
            for d in adj[v]:
                u = tail[d ^ 1]
                if u != v and cap[d] > 0 and level[u] < 0:
                    level[u] = lv
                    q.append(u)
        if level[t] < 0:
            return total
        it = [0] * n
        path: list[int] = []
        v = s
        while True:
            if v == t:
                f = min(cap[d] for d in path)
                cut_at = len(path)
                for i, d in enumerate(path):
                    cap[d] -= f
                    cap[d ^ 1] += f
                    if cap[d] == 0 and i < cut_at:
                        cut_at = i
                total += f
                if limit and total >= limit:
                    return total
                del path[cut_at:]
                v = tail[path[-1] ^ 1] if path else s
                continue
            advanced = False
            row = adj[v]
            i = it[v]
            lv = level[v] + 1
            while i < len(row):
                d = row[i]
                u = tail[d ^ 1]
                if u != v and cap[d] > 0 and level[u] == lv:
                    it[v] = i
                    path.append(d)
                    v = u
                    advanced = True
                    break
                i += 1
            if not advanced:
                it[v] = i
                level[v] = -1
                if not path:
                    break
                d = path.pop()
                v = tail[d]
                it[v] += 1


def _capacities(g: PlanarGraph) -> tuple[list[int], int]:
    big = g.total_finite_weight() + 1
    cap = []
    for e in range(g.m):
        c = big if g.weight[e] == INF else g.weight[e]
        cap.extend((c, c))
    return cap, big


def max_flow_value(g: PlanarGraph, s: int, t: int) -> Weight:
    """Exact undirected max-flow value with edge weights as capacities."""
    if s == t:
        raise SameVertex(f"s == t == {s}")
    cap, big = _capacities(g)
    val = _dinic(g, _adjacency(g), cap, s, t)
    return INF if val >= big else val


@dataclass
class SeparatingCycleAnswer:
    length: Weight
    cycle: Optional[Cycle]  # in the queried graph; None when length is INF
    enclosed_faces: Optional[set[int]]  # side containing exactly one query face


def _region_boundary_walks(g: PlanarGraph, in_side: list[bool]) -> list[list[int]]:
    """Closed dart walks bounding the face region ``in_side``; the region
    stays on the face_of side of every walk dart."""
    boundary = [
        d for d in range(2 * g.m) if in_side[g.face_of[d]] and not in_side[g.face_of[d ^ 1]]
    ]
    bset = set(boundary)
    seen: set[int] = set()
    walks = []
    for d0 in boundary:
        if d0 in seen:
            continue
        walk = []
        d = d0
        while True:
            walk.append(d)
            seen.add(d)
            x = g.rot_next[d ^ 1]
            while x not in bset:
                x = g.rot_next[x]
            d = x
            if d == d0:
                break
        walks.append(walk)
    return walks


def _walk_sides(g: PlanarGraph, walk: list[int]) -> tuple[set[int], set[int]]:
    blocked = {d >> 1 for d in walk}
    seed = g.face_of[walk[0]]
    seen = {seed}
    stack = [seed]
    while stack:
        f = stack.pop()
        d0 = g.face_dart[f]
        d = d0
        while True:
            if (d >> 1) not in blocked:
                f2 = g.face_of[d ^ 1]
                if f2 not in seen:
                    seen.add(f2)
                    stack.append(f2)
            d = g.rot_next[d ^ 1]
            if d == d0:
                break
    return seen, set(range(g.nfaces)) - seen


class FlowStructure:
    """Frozen query scope: a graph, its dual, and reusable flow workspace.

    Queries never mutate the scope; each one runs on a fresh copy of the
    capacity table, so a structure can serve many queries and concurrent
    readers.
    """

    def __init__(self, scope: PlanarGraph):
        if scope.m == 0:
            raise EmptyScope("scope has no edges")
        self.scope = scope
        self.dual_map: DualMap = dual(scope)
        self._adj = _adjacency(self.dual_map.graph)
        self._cap_template, self.big = _capacities(self.dual_map.graph)
        self.queries = 0

    def query(self, f1: int, f2: int, limit: Weight = INF) -> SeparatingCycleAnswer:
        """Minimum cycle separating two faces of the scope. Answers at or
        above ``limit`` come back as INF without cut recovery (for callers
        taking minima against a known candidate)."""
        if f1 == f2:
            raise SameFace(f"faces both {f1}")
        self.queries += 1
        g = self.scope
        dg = self.dual_map.graph
        cap = list(self._cap_template)
        cutoff = 0 if limit == INF else min(int(limit), self.big)
        val = _dinic(dg, self._adj, cap, f1, f2, cutoff)
        if val >= self.big or (cutoff and val >= cutoff):
            return SeparatingCycleAnswer(INF, None, None)
        # residual-reachable dual vertices = faces on the f1 side of the cut
        in_side = [False] * dg.n
        in_side[f1] = True
        q = deque([f1])
        while q:
            v = q.popleft()
            for d in self._adj[v]:
                u = dg.tail[d ^ 1]
                if u != v and cap[d] > 0 and not in_side[u]:
                    in_side[u] = True
                    q.append(u)
        if in_side[f2]:
            raise InternalInvariantError("flow left f2 reachable")
        for walk in sorted(_region_boundary_walks(g, in_side), key=min):
            length = sum(g.weight[d >> 1] for d in walk)
            if length != val:
                continue
            enclosed, other = _walk_sides(g, walk)
            if (f1 in enclosed) != (f2 in enclosed):
                side = enclosed if f1 in enclosed else other
                verts = {g.tail[d] for d in walk}
                return SeparatingCycleAnswer(val, Cycle(walk, val, len(verts) == len(walk)), side)
        raise InternalInvariantError("no boundary walk matches the cut value")


def build_flow_structure(scope: PlanarGraph) -> FlowStructure:
    return FlowStructure(scope)


def fs_query(fs: FlowStructure, f1: int, f2: int) -> SeparatingCycleAnswer:
    return fs.query(f1, f2)


def min_separating_cycle(g: PlanarGraph, f1: int, f2: int) -> SeparatingCycleAnswer:
    """Lightest cycle enclosing exactly one of two faces: a min cut between
    the face vertices of the dual, with the cycle recovered from the cut."""
    return FlowStructure(g).query(f1, f2)
