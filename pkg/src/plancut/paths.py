"""Single-source shortest paths and fundamental cycles.

Dijkstra with a binary heap and deterministic tie-breaking by
``(distance, vertex id, incoming edge id)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Optional, Sequence

from .core import INF, Cycle, PlanarGraph, Weight
from .errors import EndpointUnreachable, RootNotInScope


@dataclass
class ShortestPathTree:
    graph: PlanarGraph
    root: int
    dist: list[Weight]
    parent_dart: list[int]  # dart whose head is the vertex; -1 at root/unreachable

    def path_darts(self, v: int) -> list[int]:
        """Root-to-v dart walk."""
        out = []
        while v != self.root:
            d = self.parent_dart[v]
            if d < 0:
                raise EndpointUnreachable(f"vertex {v} unreachable from {self.root}")
            out.append(d)
            v = self.graph.tail[d]
        out.reverse()
        return out

    def depth(self, v: int) -> int:
        k = 0
        while v != self.root:
            d = self.parent_dart[v]
            if d < 0:
                raise EndpointUnreachable(f"vertex {v} unreachable from {self.root}")
            k += 1
            v = self.graph.tail[d]
        return k


def sssp(g: PlanarGraph, root: int, scope: Optional[set[int]] = None) -> ShortestPathTree:
    """Exact shortest-path tree from ``root``, optionally restricted to an
    edge subset. INF edges are usable but dominate any finite path."""
    if not 0 <= root < g.n:
        raise RootNotInScope(f"root {root} not a vertex")
    if scope is not None and scope and not any((d >> 1) in scope for d in g.rotation(root)):
        raise RootNotInScope(f"root {root} has no incident edge in scope")
    dist: list[Weight] = [INF] * g.n
    parent: list[int] = [-1] * g.n
    done = bytearray(g.n)
    dist[root] = 0
    heap: list[tuple[Weight, int, int]] = [(0, root, -1)]
    tail = g.tail
    weight = g.weight
    rot = g.rotation
    while heap:
        dv, v, via = heappop(heap)
        if done[v]:
            continue
        done[v] = 1
        if via >= 0:
            # dart of the winning edge whose head is v
            parent[v] = 2 * via if tail[2 * via + 1] == v else 2 * via + 1
        for d in rot(v):
            e = d >> 1
            if scope is not None and e not in scope:
                continue
            u = tail[d ^ 1]
            if done[u]:
                continue
            du = dv + weight[e]
            # equal-distance entries compete on (vertex id, edge id) at pop time
            if du <= dist[u]:
                dist[u] = du
                heappush(heap, (du, u, e))
    return ShortestPathTree(g, root, dist, parent)


def tree_meet(t: ShortestPathTree, b: int, c: int) -> int:
    """Deepest common ancestor of b and c in the tree."""
    db, dc = t.depth(b), t.depth(c)
    while db > dc:
        b = t.graph.tail[t.parent_dart[b]]
        db -= 1
    while dc > db:
        c = t.graph.tail[t.parent_dart[c]]
        dc -= 1
    while b != c:
        b = t.graph.tail[t.parent_dart[b]]
        c = t.graph.tail[t.parent_dart[c]]
    return b


def fundamental_cycle(t: ShortestPathTree, e: int) -> Cycle:
    """Cycle of non-tree edge ``e``: tree path to one endpoint, the edge,
    tree path back. The shared root-side prefix is kept as the tail and the
    length counts only the simple part."""
    g = t.graph
    b, c = g.tail[2 * e], g.tail[2 * e + 1]
    for v in (b, c):
        if v != t.root and t.parent_dart[v] < 0:
            raise EndpointUnreachable(f"endpoint {v} unreachable")
    meet = tree_meet(t, b, c)
    up: list[int] = []  # meet -> b tree darts
    v = b
    while v != meet:
        d = t.parent_dart[v]
        up.append(d)
        v = g.tail[d]
    up.reverse()
    down: list[int] = []  # c -> meet as reversed tree darts
    v = c
    while v != meet:
        d = t.parent_dart[v]
        down.append(d ^ 1)
        v = g.tail[d]
    darts = up + [2 * e] + down
    length = walk_sum(g, darts)
    return Cycle(darts, length, len({g.tail[d] for d in darts}) == len(darts), t.path_darts(meet))


def walk_sum(g: PlanarGraph, darts: Sequence[int]) -> Weight:
    total: Weight = 0
    for d in darts:
        total += g.weight[d >> 1]
    return total


def bellman_ford(g: PlanarGraph, root: int, scope: Optional[set[int]] = None) -> list[Weight]:
    """Independent reference distances (used by tests as an oracle)."""
    dist: list[Weight] = [INF] * g.n
    dist[root] = 0
    edges = [(g.tail[2 * e], g.tail[2 * e + 1], g.weight[e]) for e in range(g.m) if scope is None or e in scope]
    for _ in range(max(1, g.n - 1)):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist
