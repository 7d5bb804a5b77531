"""Dynamic shortest cycles under embedding-preserving edge updates.

The structure keeps a mutable rotation system with stable edge ids plus
two r-divisions with dense distance graphs: structure A (small pieces,
one cached in-piece shortest cycle each) drives the query recursion;
structure B (large pieces) answers exact distance and cycle-through-edge
queries by expanding the endpoint pieces and crossing everything else
through DDG tables. Updates rebuild only the DDGs and caches of affected
pieces; everything is rebuilt from scratch when the edge count drifts by
a factor of two.

A query recursion region is a set of current faces plus the boundary
vertices allowed on its side. Dividing builds a shortest-path tree over
the side-filtered DDG edges (never rebuilt during a query), expands its
tree edges to an explicit sub-embedding, and cuts along a balanced
fundamental cycle; conquering pairs one separating-cycle query on a
whole-graph flow scope with exact per-edge dispatches to structure B for
edges near the cycle. Cycles confined to single pieces are covered by
the cache minimum folded into every answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Optional, Sequence

from .core import INF, LABEL_REAL, PlanarGraph, Weight
from .errors import EmbeddingViolation, InternalInvariantError, NoSuchEdge
from .flowcut import FlowStructure
from .partition import DenseDistanceGraph, Piece, _subgraph, build_ddg, multipart_dijkstra, piece_boundary, r_division
from .paths import fundamental_cycle, sssp
from .static_solver import RunStats, _per_edge_solve, _solve_engine


def _clamp(x: int, lo: int, hi: int) -> int:
    return max(lo, min(x, hi))


def r_a_for(n: int) -> int:
    return _clamp(math.ceil(n ** (1 / 3)), 4, max(n, 4))


def r_b_for(n: int) -> int:
    return _clamp(math.ceil(n ** (2 / 3) * math.log2(max(n, 4)) ** (2 / 3)), 4, max(n, 4))


class _StableHost:
    """Adapter exposing stable-id dart tails to DenseDistanceGraph.expand."""

    def __init__(self, dyn: "DynamicStructure"):
        self._dyn = dyn

    @property
    def tail(self):
        return self._dyn.tail


class _Substructure:
    """One r-division with DDGs over the current graph (stable edge ids)."""

    def __init__(self, name: str, r: int):
        self.name = name
        self.r = r
        self.piece_edges: list[set[int]] = []
        self.piece_of_edge: dict[int, int] = {}
        self.boundary: list[list[int]] = []
        self.ddg: list[Optional[DenseDistanceGraph]] = []
        self.arcs: list[list[tuple[int, int, tuple[int, ...]]]] = []  # stable-dart walks
        self.cache: list[Weight] = []


class DynamicStructure:
    def __init__(self, g: PlanarGraph):
        self.n = g.n
        self.tail = list(g.tail)
        self.weight = list(g.weight)
        self.label = list(g.label)
        self.alive = bytearray(b"\x01") * g.m if g.m else bytearray()
        self.rn = list(g.rot_next)
        self.rp = list(g.rot_prev)
        self.vertex_dart = list(g.vertex_dart)
        self.generation = 0
        self._cur: Optional[PlanarGraph] = None
        self._cur_gen = -1
        self._cur_emap: list[int] = []
        self._cur_einv: dict[int, int] = {}
        self._flow: Optional[FlowStructure] = None
        self._flow_gen = -1
        self._b_adj: Optional[dict] = None
        self._b_adj_gen = -1
        self.stats = RunStats()
        self.A = _Substructure("A", r_a_for(self.n))
        self.B = _Substructure("B", r_b_for(self.n))
        self.built_edges = max(1, sum(self.alive))
        self._build_all()

    # -- mutable embedding -------------------------------------------------

    def rotation(self, v: int) -> list[int]:
        d0 = self.vertex_dart[v]
        if d0 < 0:
            return []
        out, d = [d0], self.rn[d0]
        while d != d0:
            out.append(d)
            d = self.rn[d]
        return out

    def alive_m(self) -> int:
        return sum(self.alive)

    def current(self) -> PlanarGraph:
        if self._cur is None or self._cur_gen != self.generation:
            emap = [e for e in range(len(self.alive)) if self.alive[e]]
            eid = {e: i for i, e in enumerate(emap)}
            tails = []
            for e in emap:
                tails.extend((self.tail[2 * e], self.tail[2 * e + 1]))
            rotations = []
            for v in range(self.n):
                rotations.append([2 * eid[d >> 1] + (d & 1) for d in self.rotation(v)])
            self._cur = PlanarGraph(tails, rotations, [self.weight[e] for e in emap], [self.label[e] for e in emap])
            self._cur_gen = self.generation
            self._cur_emap = emap
            self._cur_einv = eid
        return self._cur

    def flow_scope(self) -> FlowStructure:
        if self._flow is None or self._flow_gen != self.generation:
            self._flow = FlowStructure(self.current())
            self._flow_gen = self.generation
        return self._flow

    def _corner_face(self, d: int) -> list[int]:
        """Face orbit owning the corner between d and its ccw successor:
        the orbit of rn[d] under next(x) = rn[twin(x)]. Splicing a new dart
        after d puts it into exactly this face."""
        walk = []
        x = self.rn[d]
        first = x
        while True:
            walk.append(x)
            x = self.rn[x ^ 1]
            if x == first:
                break
        return walk

    def _splice_after(self, new_dart: int, after: int, v: int) -> None:
        self.tail[new_dart] = v
        if after < 0:
            if self.vertex_dart[v] >= 0:
                raise EmbeddingViolation(f"vertex {v} already has darts; corner required")
            self.rn[new_dart] = new_dart
            self.rp[new_dart] = new_dart
            self.vertex_dart[v] = new_dart
            return
        nxt = self.rn[after]
        self.rn[after] = new_dart
        self.rp[new_dart] = after
        self.rn[new_dart] = nxt
        self.rp[nxt] = new_dart

    def _unlink(self, d: int) -> None:
        v = self.tail[d]
        if self.rn[d] == d:
            self.vertex_dart[v] = -1
        else:
            self.rn[self.rp[d]] = self.rn[d]
            self.rp[self.rn[d]] = self.rp[d]
            if self.vertex_dart[v] == d:
                self.vertex_dart[v] = self.rn[d]

    def insert_edge(self, x: int, y: int, w: Weight, after_x: int, after_y: int) -> int:
        """Public insert: embedding-checked, structures maintained."""
        if x == y:
            raise EmbeddingViolation("self-loop insertion is not supported")
        for after, v in ((after_x, x), (after_y, y)):
            if after >= 0 and (after >= len(self.tail) or not self.alive[after >> 1] or self.tail[after] != v):
                raise EmbeddingViolation(f"dart {after} is not a live outgoing dart of vertex {v}")
        if after_x >= 0 and after_y >= 0:
            if self.rn[after_y] not in self._corner_face(after_x):
                raise EmbeddingViolation("insertion corners lie on different faces")
        e = len(self.weight)
        self.tail.extend((-1, -1))
        self.rn.extend((-1, -1))
        self.rp.extend((-1, -1))
        self.weight.append(w)
        self.label.append(LABEL_REAL)
        self.alive.append(1)
        self._splice_after(2 * e, after_x, x)
        self._splice_after(2 * e + 1, after_y, y)
        self.generation += 1
        homes = {}
        for sub in (self.A, self.B):
            home = None
            if after_x >= 0:
                home = sub.piece_of_edge.get(after_x >> 1)
            if home is None and after_y >= 0:
                home = sub.piece_of_edge.get(after_y >> 1)
            homes[sub.name] = home
        self._refresh((x, y), new_edge=e, removed_edge=None, homes=homes)
        self._maybe_rebuild()
        return e

    def delete_edge(self, x: int, y: int) -> None:
        self.delete_edge_id(self.find_edge(x, y))

    def delete_edge_id(self, e: int) -> None:
        if not (0 <= e < len(self.alive)) or not self.alive[e]:
            raise NoSuchEdge(f"edge {e} is not present")
        x, y = self.tail[2 * e], self.tail[2 * e + 1]
        self._detach(e)
        self.generation += 1
        self._refresh((x, y), new_edge=None, removed_edge=e, homes={})
        self._maybe_rebuild()

    def find_edge(self, x: int, y: int) -> int:
        best = -1
        for d in self.rotation(x):
            if self.tail[d ^ 1] == y:
                e = d >> 1
                if best < 0 or e < best:
                    best = e
        if best < 0:
            raise NoSuchEdge(f"no edge between {x} and {y}")
        return best

    def _detach(self, e: int) -> tuple[int, int]:
        """Unlink an edge keeping its slot; returns the restore anchors."""
        ax = self.rp[2 * e]
        ay = self.rp[2 * e + 1]
        if ax == 2 * e:
            ax = -1
        if ay == 2 * e + 1:
            ay = -1
        self._unlink(2 * e)
        self._unlink(2 * e + 1)
        self.alive[e] = 0
        return ax, ay

    def _reattach(self, e: int, ax: int, ay: int) -> None:
        self.alive[e] = 1
        self._splice_after(2 * e, ax, self.tail[2 * e])
        self._splice_after(2 * e + 1, ay, self.tail[2 * e + 1])

    # -- structure maintenance ----------------------------------------------

    def _build_all(self) -> None:
        cur = self.current()
        self.built_edges = max(1, cur.m)
        for sub in (self.A, self.B):
            div = r_division(cur, min(sub.r, max(cur.n, 4)))
            sub.piece_edges = [set(self._cur_emap[e] for e in p.edges) for p in div.pieces]
            sub.piece_of_edge = {}
            for i, edges in enumerate(sub.piece_edges):
                for e in edges:
                    sub.piece_of_edge[e] = i
            sub.boundary = [list(p.boundary) for p in div.pieces]
            sub.ddg = []
            sub.arcs = []
            for i in range(len(sub.piece_edges)):
                sub.ddg.append(self._stable_ddg(sub, i))
                sub.arcs.append(self._piece_arcs(sub, i))
            sub.cache = [INF] * len(sub.piece_edges)
        for i in range(len(self.A.piece_edges)):
            self._refresh_cache(i)
        self.stats.bump("full_builds")

    def _compact_piece(self, sub: _Substructure, i: int) -> Piece:
        cur = self.current()
        edges = frozenset(self._cur_einv[e] for e in sub.piece_edges[i] if e in self._cur_einv)
        bnd, inter = piece_boundary(cur, edges)
        sub.boundary[i] = bnd
        return Piece(i, edges, bnd, inter, 0)

    def _stable_ddg(self, sub: _Substructure, i: int) -> DenseDistanceGraph:
        """DDG of a piece with predecessor darts rebased to stable ids, so
        expansions stay valid across later unrelated updates."""
        ddg = build_ddg(self.current(), self._compact_piece(sub, i))
        emap = self._cur_emap
        pred = {}
        for root, par in ddg.pred.items():
            pred[root] = {v: 2 * emap[dd >> 1] + (dd & 1) for v, dd in par.items()}
        return DenseDistanceGraph(_StableHost(self), ddg.piece, ddg.boundary, ddg.table, pred)

    def _piece_arcs(self, sub: _Substructure, i: int) -> list[tuple[int, int, tuple[int, ...]]]:
        """Skeleton arcs of one piece: walks between consecutive boundary
        vertices around every face of the piece that is not a face of the
        current graph, recorded as stable darts."""
        from .partition import _face_is_host

        cur = self.current()
        edges = sorted(self._cur_einv[e] for e in sub.piece_edges[i] if e in self._cur_einv)
        if not edges:
            return []
        piece_sub, es, vs = _subgraph(cur, edges)
        bset = set(sub.boundary[i])
        out = []
        for f in range(piece_sub.nfaces):
            if _face_is_host(cur, piece_sub, es, vs, f) is not None:
                continue
            walk = piece_sub.face_walk(f)
            host_walk = [2 * es[dd >> 1] + (dd & 1) for dd in walk]
            stable_walk = [2 * self._cur_emap[dd >> 1] + (dd & 1) for dd in host_walk]
            idx = [k for k, dd in enumerate(host_walk) if cur.tail[dd] in bset]
            for k, a in enumerate(idx):
                b = idx[(k + 1) % len(idx)]
                seg = stable_walk[a:b] if b > a else stable_walk[a:] + stable_walk[:b]
                if not seg:
                    seg = stable_walk[a:] + stable_walk[:a]
                u = cur.tail[host_walk[a]]
                v = cur.tail[host_walk[b]]
                out.append((u, v, tuple(seg)))
        return out

    def _refresh_cache(self, i: int) -> None:
        cur = self.current()
        edges = sorted(self._cur_einv[e] for e in self.A.piece_edges[i] if e in self._cur_einv)
        if not edges:
            self.A.cache[i] = INF
            return
        piece, _es, _ = _subgraph(cur, edges)
        val, _ = _per_edge_solve(piece)
        self.A.cache[i] = val

    def _refresh(self, touched: Sequence[int], new_edge: Optional[int], removed_edge: Optional[int], homes: dict) -> None:
        self.current()
        for sub in (self.A, self.B):
            affected: set[int] = set()
            for v in touched:
                for dd in self.rotation(v):
                    pe = sub.piece_of_edge.get(dd >> 1)
                    if pe is not None:
                        affected.add(pe)
            if removed_edge is not None and removed_edge in sub.piece_of_edge:
                home = sub.piece_of_edge.pop(removed_edge)
                sub.piece_edges[home].discard(removed_edge)
                affected.add(home)
            if new_edge is not None:
                home = homes.get(sub.name)
                if home is None:
                    home = min(affected) if affected else 0
                sub.piece_edges[home].add(new_edge)
                sub.piece_of_edge[new_edge] = home
                affected.add(home)
            for i in sorted(affected):
                if sub.piece_edges[i]:
                    sub.ddg[i] = self._stable_ddg(sub, i)
                    sub.arcs[i] = self._piece_arcs(sub, i)
                else:
                    sub.ddg[i] = None
                    sub.arcs[i] = []
                    sub.boundary[i] = []
                self.stats.bump(f"ddg_rebuilds_{sub.name}")
                if sub is self.A:
                    self._refresh_cache(i)

    def _maybe_rebuild(self) -> None:
        m = self.alive_m()
        if m > 2 * self.built_edges or 2 * m < self.built_edges:
            self._build_all()

    # -- queries -------------------------------------------------------------

    def cycle_through_edge(self, x: int, y: int) -> Weight:
        """Shortest cycle through edge (x, y): delete it, measure the exact
        x-to-y distance on structure B, add the weight back, reinsert. The
        temporary removal restores the edge into its own slot, so no DDG
        rebuild is needed: the endpoint pieces are expanded explicitly and
        only the untouched pieces contribute table distances."""
        e = self.find_edge(x, y)
        self.stats.bump("edge_queries")
        return self._cycle_through_slot(e)

    def cycle_through_edge_id(self, e: int) -> Weight:
        if not (0 <= e < len(self.alive)) or not self.alive[e]:
            raise NoSuchEdge(f"edge {e} is not present")
        self.stats.bump("edge_queries")
        return self._cycle_through_slot(e)

    def _cycle_through_slot(self, e: int, limit: Weight = INF) -> Weight:
        x, y = self.tail[2 * e], self.tail[2 * e + 1]
        w = self.weight[e]
        home = self.B.piece_of_edge.get(e)
        ax, ay = self._detach(e)
        try:
            lim = limit if limit == INF else max(0, limit - w)
            dist = self._b_distance(x, y, force_expand={home} if home is not None else set(), limit=lim)
        finally:
            self._reattach(e, ax, ay)
        return dist + w

    def _b_table_adj(self) -> dict:
        """Piece-tagged adjacency over all B DDG tables, cached per
        generation so per-edge dispatches can share it."""
        if self._b_adj is None or self._b_adj_gen != self.generation:
            adj: dict = {}
            for i, ddg in enumerate(self.B.ddg):
                if ddg is None:
                    continue
                for (u, v), w in ddg.table.items():
                    adj.setdefault(u, []).append((v, w, i))
            self._b_adj = adj
            self._b_adj_gen = self.generation
        return self._b_adj

    def _b_distance(self, x: int, y: int, force_expand: set, limit: Weight = INF) -> Weight:
        """Exact current distance: the endpoint pieces (and any piece with a
        stale table) are expanded edge by edge; the others contribute their
        exact boundary-to-boundary tables; stops beyond ``limit``."""
        sub = self.B
        expand: set[int] = set(force_expand)
        for v in (x, y):
            for dd in self.rotation(v):
                pe = sub.piece_of_edge.get(dd >> 1)
                if pe is not None:
                    expand.add(pe)
        overlay: dict = {}
        for i in sorted(expand):
            for e in sub.piece_edges[i]:
                if self.alive[e]:
                    u, v, w = self.tail[2 * e], self.tail[2 * e + 1], self.weight[e]
                    overlay.setdefault(u, []).append((v, w))
                    overlay.setdefault(v, []).append((u, w))
        table = self._b_table_adj()
        dist = {x: 0}
        done: set = set()
        heap: list = [(0, x)]
        while heap:
            dv, v = heappop(heap)
            if v in done:
                continue
            if dv > limit:
                return INF
            if v == y:
                return dv
            done.add(v)
            for u, w in overlay.get(v, ()):
                du = dv + w
                if u not in done and du <= limit and du < dist.get(u, INF):
                    dist[u] = du
                    heappush(heap, (du, u))
            for u, w, i in table.get(v, ()):
                if i in expand:
                    continue
                du = dv + w
                if u not in done and du <= limit and du < dist.get(u, INF):
                    dist[u] = du
                    heappush(heap, (du, u))
        return INF

    def shortest_cycle(self) -> Weight:
        self.stats.bump("queries")
        best: Weight = INF
        for val in self.A.cache:
            best = min(best, val)
        return min(best, _query_recursion(self, best))


# ---------------------------------------------------------------------------
# Query recursion


@dataclass
class _QRegion:
    faces: frozenset
    verts: frozenset


def _query_recursion(dyn: DynamicStructure, start_best: Weight = INF) -> Weight:
    cur = dyn.current()
    boundary_all: set[int] = set()
    for bnd in dyn.A.boundary:
        boundary_all.update(bnd)
    if not boundary_all:
        return INF  # single piece; the cache covers it
    ctx = {"best": start_best, "dispatched": set()}
    stack = [_QRegion(frozenset(range(cur.nfaces)), frozenset(boundary_all))]
    # terminal regions are finished by a limit-pruned per-edge scan, which is
    # cheap, so they can stay fairly large
    term_faces = max(8, 4 * dyn.A.r, cur.nfaces // 8)
    guard = 0
    while stack:
        region = stack.pop()
        guard += 1
        if guard > 4 * cur.nfaces + 64:
            raise InternalInvariantError("dynamic query recursion failed to shrink")
        if not region.faces:
            continue
        if len(region.faces) <= term_faces or len(region.verts) < 2:
            ctx["best"] = min(ctx["best"], _solve_region_content(dyn, cur, region, ctx["best"]))
            continue
        out = _divide_query_region(dyn, cur, region, ctx)
        if out is None:
            ctx["best"] = min(ctx["best"], _solve_region_content(dyn, cur, region, ctx["best"]))
            continue
        conquer, children = out
        ctx["best"] = min(ctx["best"], conquer)
        stack.extend(children)
    return ctx["best"]


def _region_edges(cur: PlanarGraph, faces: frozenset) -> list[int]:
    out: set[int] = set()
    for f in faces:
        for dd in cur.face_walk(f):
            out.add(dd >> 1)
    return sorted(out)


def _solve_region_content(dyn: DynamicStructure, cur: PlanarGraph, region: _QRegion, limit: Weight = INF) -> Weight:
    """Exact (up to ``limit``) shortest cycle within the region's content:
    one pruned per-edge pass over the materialized subgraph."""
    edges = _region_edges(cur, region.faces)
    if not edges:
        return INF
    dyn.stats.bump("query_terminals")
    eset = set(edges)
    adj: dict[int, list[int]] = {}
    for e in edges:
        for dd in (2 * e, 2 * e + 1):
            adj.setdefault(cur.tail[dd], []).append(dd)
    best: Weight = limit
    for e in edges:
        w = cur.weight[e]
        if w == INF:
            continue
        u, v = cur.tail[2 * e], cur.tail[2 * e + 1]
        if u == v:
            best = min(best, w)
            continue
        lim = best - w
        if lim < 0:
            continue
        dist = {u: 0}
        done = set()
        heap = [(0, u)]
        du: Weight = INF
        while heap:
            dv, a = heappop(heap)
            if a in done:
                continue
            if dv > lim:
                break
            if a == v:
                du = dv
                break
            done.add(a)
            for dd in adj[a]:
                e2 = dd >> 1
                if e2 == e:
                    continue
                w2 = cur.weight[e2]
                if w2 == INF:
                    continue
                b = cur.tail[dd ^ 1]
                nd = dv + w2
                if b not in done and nd <= lim and nd < dist.get(b, INF):
                    dist[b] = nd
                    heappush(heap, (nd, b))
        if du != INF:
            best = min(best, du + w)
    return best


def _filtered_tree(dyn: DynamicStructure, allowed: frozenset) -> tuple[dict, dict]:
    """Dijkstra over side-filtered DDG edges; parents carry the owning DDG
    so tree edges can be expanded to host walks."""
    sub = dyn.A
    adj: dict[int, list[tuple[int, Weight, DenseDistanceGraph]]] = {}
    for ddg in sub.ddg:
        if ddg is None:
            continue
        present = [b for b in ddg.boundary if b in allowed]
        if len(present) < 2:
            continue
        for (u, v), w in ddg.table.items():
            if u in allowed and v in allowed:
                adj.setdefault(u, []).append((v, w, ddg))
    root = min(allowed)
    dist: dict = {root: 0}
    parent: dict = {}
    done: set = set()
    heap: list = [(0, root)]
    while heap:
        dv, v = heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u, w, ddg in adj.get(v, ()):
            if u in done:
                continue
            du = dv + w
            if du < dist.get(u, INF):
                dist[u] = du
                parent[u] = (v, ddg)
                heappush(heap, (du, u))
    return dist, parent


def _divide_query_region(dyn: DynamicStructure, cur: PlanarGraph, region: _QRegion, ctx: dict):
    from .divide import DualTree
    from .errors import NoNonTreeEdge

    sub = dyn.A
    _dist, parent = _filtered_tree(dyn, region.verts)
    union_stable: set[int] = set()
    for v, (u, ddg) in parent.items():
        try:
            for dd in ddg.expand(u, v):
                union_stable.add(dd >> 1)
        except InternalInvariantError:
            continue
    # skeleton arcs close the cycles the tree alone cannot provide
    arc_stable: set[int] = set()
    for i, arcs in enumerate(sub.arcs):
        for (u, v, seg) in arcs:
            if u in region.verts and v in region.verts:
                for dd in seg:
                    arc_stable.add(dd >> 1)
    union_cur = set()
    for e in union_stable | arc_stable:
        ce = dyn._cur_einv.get(e)
        if ce is not None:
            union_cur.add(ce)
    if len(union_cur) < 3:
        return None
    U, es, _vs = _subgraph(cur, sorted(union_cur))
    if not U.is_connected():
        U, es = _largest_component(cur, U, es)
        if U is None:
            return None
    t = sssp(U, 0)
    weights, comp_of_face = _owned_flood(cur, U, es, region.faces)
    try:
        dt = DualTree(U, t, weights)
    except (NoNonTreeEdge, InternalInvariantError):
        return None
    if dt.total < 2:
        return None
    bc, enclosed = dt.balanced_edge()
    if min(enclosed, dt.total - enclosed) < 1:
        return None
    cyc = fundamental_cycle(t, bc)
    dyn.stats.bump("query_divides")
    host_cyc = [2 * es[dd >> 1] + (dd & 1) for dd in cyc.darts]
    cyc_edges = {dd >> 1 for dd in host_cyc}

    # children: components of the owned faces with the cycle as a wall
    comps = _owned_components(cur, region.faces, cyc_edges)
    if len(comps) < 2:
        return None

    conquer: Weight = INF
    # separating query on the whole-graph scope (cached per generation;
    # a superset scope only shrinks answers and returns real cycles)
    d_in = host_cyc[next(i for i, dd in enumerate(cyc.darts) if dd >> 1 == bc)]
    f_e_host = cur.face_of[d_in]
    f_a_host = cur.face_of[d_in ^ 1]
    if f_a_host != f_e_host:
        ans = dyn.flow_scope().query(f_a_host, f_e_host, limit=ctx["best"])
        dyn.stats.bump("query_flow")
        conquer = min(conquer, ans.length)
        ctx["best"] = min(ctx["best"], conquer)
    # exact per-edge dispatches where the cycle runs along skeleton arcs
    expansion_cur = {dyn._cur_einv[e] for e in union_stable if e in dyn._cur_einv}
    arc_cur = {dyn._cur_einv[e] for e in arc_stable if e in dyn._cur_einv}
    arc_only = arc_cur - expansion_cur
    arc_touch = {cur.tail[dd] for dd in host_cyc if (dd >> 1) in arc_only}
    dispatched: set[int] = ctx["dispatched"]
    for v in sorted(arc_touch):
        for dd in cur.rotation(v):
            se = dyn._cur_emap[dd >> 1]
            if se in dispatched or dyn.weight[se] == INF:
                continue
            dispatched.add(se)
            got = dyn._cycle_through_slot(se, limit=ctx["best"])
            conquer = min(conquer, got)
            ctx["best"] = min(ctx["best"], got)
            dyn.stats.bump("query_edge_dispatch")

    cyc_verts = {cur.tail[dd] for dd in host_cyc}
    children = []
    for comp in comps:
        verts = set()
        for hf in comp:
            for dd in cur.face_walk(hf):
                v = cur.tail[dd]
                if v in region.verts:
                    verts.add(v)
        verts |= cyc_verts & region.verts
        children.append(_QRegion(frozenset(comp), frozenset(verts)))
    return conquer, children


def _owned_flood(cur: PlanarGraph, U: PlanarGraph, es: list[int], owned: frozenset):
    """Weights of U's faces as counts of owned faces inside them, computed
    by flooding owned faces with U's edges as walls."""
    blocked = set(es)
    weights = [0] * U.nfaces
    local = {e: i for i, e in enumerate(es)}
    comp_of = {}
    seen: set[int] = set()
    for hf0 in owned:
        if hf0 in seen:
            continue
        comp = [hf0]
        seen.add(hf0)
        stack = [hf0]
        uface = -1
        while stack:
            hf = stack.pop()
            for dd in cur.face_walk(hf):
                e = dd >> 1
                if e in blocked:
                    if uface < 0:
                        uface = U.face_of[2 * local[e] + (dd & 1)]
                    continue
                nf = cur.face_of[dd ^ 1]
                if nf in owned and nf not in seen:
                    seen.add(nf)
                    comp.append(nf)
                    stack.append(nf)
        if uface < 0:
            uface = 0
        weights[uface] += len(comp)
        for hf in comp:
            comp_of[hf] = uface
    return weights, comp_of


def _owned_components(cur: PlanarGraph, owned: frozenset, walls: set[int]) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    for hf0 in owned:
        if hf0 in seen:
            continue
        comp = {hf0}
        seen.add(hf0)
        stack = [hf0]
        while stack:
            hf = stack.pop()
            for dd in cur.face_walk(hf):
                if (dd >> 1) in walls:
                    continue
                nf = cur.face_of[dd ^ 1]
                if nf in owned and nf not in seen:
                    seen.add(nf)
                    comp.add(nf)
                    stack.append(nf)
        comps.append(comp)
    return comps


def cyc_edges_host(host_cyc: list[int]) -> set[int]:
    return {dd >> 1 for dd in host_cyc}


def union_stable_cur(dyn: DynamicStructure, union_stable: set[int]) -> set[int]:
    out = set()
    for e in union_stable:
        ce = dyn._cur_einv.get(e)
        if ce is not None:
            out.add(2 * ce)
    return out


def _largest_component(cur: PlanarGraph, U: PlanarGraph, es: list[int]):
    from .ddg_solver import _component_edge_groups

    groups = _component_edge_groups(U, es)
    if not groups:
        return None, None
    grp = max(groups, key=len)
    if len(grp) < 3:
        return None, None
    U2, es2, _ = _subgraph(cur, grp)
    return U2, es2


def _outside_face(cur, t, cyc, bc, es, in_left, host_cyc) -> Optional[int]:
    b_local = None
    for dd in cyc.darts:
        if dd >> 1 == bc:
            b_local = t.graph.tail[dd]
            break
    if b_local is None:
        return None
    try:
        path = t.path_darts(b_local)
    except Exception:
        path = []
    for dd in path:
        host = 2 * es[dd >> 1] + (dd & 1)
        if not in_left[cur.face_of[host]]:
            return cur.face_of[host]
        if not in_left[cur.face_of[host ^ 1]]:
            return cur.face_of[host ^ 1]
    for hd in host_cyc:
        if not in_left[cur.face_of[hd ^ 1]]:
            return cur.face_of[hd ^ 1]
    return None


def _flood_weights(cur: PlanarGraph, U: PlanarGraph, es: list[int], owned: frozenset) -> list[int]:
    blocked = set(es)
    claimed = [False] * cur.nfaces
    weights = [0] * U.nfaces
    for f in range(U.nfaces):
        d0 = U.face_dart[f]
        seed = cur.face_of[2 * es[d0 >> 1] + (d0 & 1)]
        if claimed[seed]:
            continue
        stack = [seed]
        claimed[seed] = True
        while stack:
            hf = stack.pop()
            if hf in owned:
                weights[f] += 1
            for dd in cur.face_walk(hf):
                if (dd >> 1) in blocked:
                    continue
                nf = cur.face_of[dd ^ 1]
                if not claimed[nf]:
                    claimed[nf] = True
                    stack.append(nf)
    return weights


def _side_fill(cur: PlanarGraph, host_cyc: list[int], cyc_edges: set[int]) -> list[bool]:
    in_left = [False] * cur.nfaces
    seed = cur.face_of[host_cyc[0]]
    in_left[seed] = True
    stack = [seed]
    while stack:
        f = stack.pop()
        for dd in cur.face_walk(f):
            if (dd >> 1) in cyc_edges:
                continue
            f2 = cur.face_of[dd ^ 1]
            if not in_left[f2]:
                in_left[f2] = True
                stack.append(f2)
    return in_left


# ---------------------------------------------------------------------------
# Module-level operation wrappers


def normalize_for_dynamic(g: PlanarGraph) -> tuple[PlanarGraph, list[int]]:
    """Degree-reduced copy of a graph with the INF triangulation edges
    stripped again: insertions legal in the input stay legal here, because
    faces are only threaded with zero edges, never subdivided. Real edges
    keep their ids and dart orientations."""
    from .core import normalize
    from .partition import _subgraph

    nr = normalize(g)
    ng = nr.graph
    keep = [e for e in range(ng.m) if ng.label[e] != 2]  # drop artificial-inf
    sub, es, vs = _subgraph(ng, keep)
    nreal = ng.label.count(0)
    if es[:nreal] != list(range(nreal)):
        raise InternalInvariantError("normalization reordered real edges")
    vertex_origin = [nr.vertex_origin[v] for v in vs]
    return sub, vertex_origin


def dyn_new(g: PlanarGraph) -> DynamicStructure:
    return DynamicStructure(g)


def dyn_insert(dyn: DynamicStructure, x: int, y: int, w: Weight, after_x: int, after_y: int) -> int:
    return dyn.insert_edge(x, y, w, after_x, after_y)


def dyn_delete(dyn: DynamicStructure, x: int, y: int) -> None:
    dyn.delete_edge(x, y)


def dyn_cycle_through_edge(dyn: DynamicStructure, x: int, y: int) -> Weight:
    return dyn.cycle_through_edge(x, y)


def dyn_shortest_cycle(dyn: DynamicStructure) -> Weight:
    return dyn.shortest_cycle()
