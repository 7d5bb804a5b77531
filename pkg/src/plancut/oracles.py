"""Brute-force oracles.

Deliberately independent of the solver modules: shortest paths are
re-implemented here rather than shared, and every oracle is the most
direct computation of its quantity. oracle_shortest_cycle runs one full
single-source Dijkstra per removed edge with no early exit; it exists as
a slow, trustworthy reference.
"""

from __future__ import annotations

import time
from heapq import heappop, heappush
from typing import Optional

from .core import INF, LABEL_REAL, Cycle, PlanarGraph, Weight
from .errors import SameFace


class OracleTimeout(Exception):
    """Raised when an oracle exceeds its measurement deadline."""


def _dijkstra_without_edge(g: PlanarGraph, root: int, skip_edge: int) -> tuple[list[Weight], list[int]]:
    dist: list[Weight] = [INF] * g.n
    parent = [-1] * g.n
    done = bytearray(g.n)
    dist[root] = 0
    heap: list[tuple[Weight, int, int]] = [(0, root, -1)]
    tail = g.tail
    weight = g.weight
    while heap:
        dv, v, pd = heappop(heap)
        if done[v]:
            continue
        done[v] = 1
        parent[v] = pd
        d0 = g.vertex_dart[v]
        if d0 < 0:
            continue
        d = d0
        while True:
            e = d >> 1
            if e != skip_edge and weight[e] != INF:
                u = tail[d ^ 1]
                if not done[u]:
                    du = dv + weight[e]
                    if du < dist[u]:
                        dist[u] = du
                        heappush(heap, (du, u, d))
            d = g.rot_next[d]
            if d == d0:
                break
    return dist, parent


def oracle_shortest_cycle(g: PlanarGraph, deadline: Optional[float] = None) -> tuple[Weight, Optional[Cycle]]:
    """Per-edge-removal shortest cycle: for every real edge e=(u,v), the
    best cycle through e costs dist(u,v) in g-e plus w(e). INF on forests.

    ``deadline`` (seconds on the monotonic clock) aborts long measurement
    runs by raising OracleTimeout; the result is unaffected when it
    completes.
    """
    best: Weight = INF
    best_edge = -1
    best_parent: Optional[list[int]] = None
    for e in range(g.m):
        if g.label[e] != LABEL_REAL or g.weight[e] == INF:
            continue
        if deadline is not None and time.monotonic() > deadline:
            raise OracleTimeout()
        u, v = g.tail[2 * e], g.tail[2 * e + 1]
        if u == v:  # self-loop is itself a cycle
            if g.weight[e] < best:
                best = g.weight[e]
                best_edge, best_parent = e, None
            continue
        dist, parent = _dijkstra_without_edge(g, u, e)
        cand = dist[v] + g.weight[e]
        if cand < best:
            best = cand
            best_edge, best_parent = e, parent
    if best == INF:
        return INF, None
    e = best_edge
    u, v = g.tail[2 * e], g.tail[2 * e + 1]
    if best_parent is None:
        return best, Cycle([2 * e], best, True)
    darts = []
    x = v
    while x != u:
        d = best_parent[x]
        darts.append(d)
        x = g.tail[d]
    darts.reverse()  # u -> v path avoiding e
    darts.append(2 * e + 1)  # v -> u
    return best, Cycle(darts, best, True)


def oracle_min_cut(g: PlanarGraph) -> Weight:
    """Stoer-Wagner global minimum cut by repeated maximum-adjacency
    contraction. Returns 0 for disconnected inputs."""
    if g.n < 2:
        return 0
    # adjacency with merged parallel weights
    adj: list[dict[int, Weight]] = [dict() for _ in range(g.n)]
    for e in range(g.m):
        u, v = g.tail[2 * e], g.tail[2 * e + 1]
        if u == v:
            continue
        adj[u][v] = adj[u].get(v, 0) + g.weight[e]
        adj[v][u] = adj[v].get(u, 0) + g.weight[e]
    alive = set(range(g.n))
    best: Weight = INF
    while len(alive) > 1:
        start = min(alive)
        in_a = {start}
        w: dict[int, Weight] = dict(adj[start])
        heap: list[tuple[Weight, int]] = [(-val, u) for u, val in w.items()]
        import heapq

        heapq.heapify(heap)
        order = [start]
        while len(in_a) < len(alive):
            while heap:
                negval, u = heapq.heappop(heap)
                if u in in_a or u not in alive or w.get(u) != -negval:
                    continue
                break
            else:
                return 0  # disconnected
            in_a.add(u)
            order.append(u)
            for x, val in adj[u].items():
                if x not in in_a and x in alive:
                    w[x] = w.get(x, 0) + val
                    heapq.heappush(heap, (-w[x], x))
        t = order[-1]
        s = order[-2]
        cut_of_phase = sum(adj[t].values())
        if cut_of_phase < best:
            best = cut_of_phase
        # merge t into s
        for x, val in adj[t].items():
            if x == s:
                continue
            adj[s][x] = adj[s].get(x, 0) + val
            adj[x][s] = adj[x].get(s, 0) + val
            del adj[x][t]
        adj[s].pop(t, None)
        adj[t].clear()
        alive.remove(t)
    return best if best != INF else 0


def oracle_separating_cycle(g: PlanarGraph, f1: int, f2: int) -> Weight:
    """Cut-open reference for the minimum f1/f2-separating cycle length.

    Take any dual path from f1 to f2 (a curve between the two faces); a
    cycle separates the faces iff it crosses the curve an odd number of
    times. Shortest odd-crossing cycles are found on a two-layer cover
    where crossing edges switch layers: one Dijkstra per crossing edge.
    """
    if f1 == f2:
        raise SameFace(f"faces both {f1}")
    # dual BFS path f1 -> f2; record the primal edges the curve crosses
    prev: dict[int, int] = {f1: -1}
    from collections import deque

    q = deque([f1])
    while q:
        f = q.popleft()
        if f == f2:
            break
        for d in g.face_walk(f):
            f2x = g.face_of[d ^ 1]
            if f2x not in prev:
                prev[f2x] = d >> 1
                q.append(f2x)
    crossing: set[int] = set()
    f = f2
    while f != f1:
        e = prev[f]
        crossing.add(e)
        f = g.face_of[2 * e] if g.face_of[2 * e] != f else g.face_of[2 * e + 1]
        # prev stored the edge entered through; recover the other side
    # two-layer shortest paths: node (v, layer), crossing edges flip layer
    best: Weight = INF
    n = g.n
    for e0 in sorted(crossing):
        if g.weight[e0] == INF:
            continue
        u0, v0 = g.tail[2 * e0], g.tail[2 * e0 + 1]
        # path v0 -> u0 with even crossings, then e0 closes with odd parity
        dist: dict[tuple[int, int], Weight] = {(v0, 0): 0}
        done: set[tuple[int, int]] = set()
        heap: list[tuple[Weight, int, int]] = [(0, v0, 0)]
        target = (u0, 0)
        while heap:
            dv, v, layer = heappop(heap)
            if (v, layer) in done:
                continue
            done.add((v, layer))
            if (v, layer) == target:
                break
            d0 = g.vertex_dart[v]
            if d0 < 0:
                continue
            d = d0
            while True:
                e = d >> 1
                w = g.weight[e]
                if e != e0 and w != INF:
                    nl = layer ^ 1 if e in crossing else layer
                    u = g.tail[d ^ 1]
                    du = dv + w
                    if (u, nl) not in done and du < dist.get((u, nl), INF):
                        dist[(u, nl)] = du
                        heappush(heap, (du, u, nl))
                d = g.rot_next[d]
                if d == d0:
                    break
        cand = dist.get(target, INF) + g.weight[e0]
        if cand < best:
            best = cand
    return best
