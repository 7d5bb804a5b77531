"""r-divisions, skeleton graphs, dense distance graphs, and Dijkstra over
collections of dense distance graphs.

The r-division is built by recursive balanced fundamental-cycle splitting
of explicit piece subgraphs, followed by a post-pass that further splits
pieces with too many holes or boundary vertices. The constants below are
artifact constants, frozen after calibration and asserted by the
acceptance suite; the underlying theory only promises their existence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import Iterable, Optional, Sequence

from .core import INF, PlanarGraph, Weight, triangulate
from .divide import DualTree
from .errors import BadR, InternalInvariantError, NoNonTreeEdge
from .paths import fundamental_cycle, sssp

DIVISION_CONSTANTS = {
    "c1_pieces": 40.0,  # piece count <= c1 * n / r + 1
    "c2_vertices": 4.0,  # piece vertices <= c2 * r (tiny r cannot split below ~16)
    "c3_boundary": 6.0,  # piece boundary <= c3 * sqrt(r)
    "c4_holes": 12,  # holes per piece
    "c5_terminal_total": 12.0,  # sum |V(G_R)| <= c5 * n
    "c6_terminal_each": 8.0,  # |V(G_R)| <= c6 * r^2
    "c7_region_level": 24.0,  # per-level sum of region vertices <= c7 * n / sqrt(r)
}


@dataclass
class Piece:
    index: int
    edges: frozenset[int]
    boundary: list[int]
    interior: list[int]
    holes: int

    @property
    def vertex_count(self) -> int:
        return len(self.boundary) + len(self.interior)


@dataclass
class RDivision:
    graph: PlanarGraph
    r: int
    pieces: list[Piece]

    def all_boundary(self) -> set[int]:
        out: set[int] = set()
        for p in self.pieces:
            out.update(p.boundary)
        return out

    def stats(self) -> dict:
        return {
            "pieces": len(self.pieces),
            "max_vertices": max((p.vertex_count for p in self.pieces), default=0),
            "max_boundary": max((len(p.boundary) for p in self.pieces), default=0),
            "max_holes": max((p.holes for p in self.pieces), default=0),
        }


def _piece_vertices(g: PlanarGraph, edges: Iterable[int]) -> set[int]:
    out = set()
    for e in edges:
        out.add(g.tail[2 * e])
        out.add(g.tail[2 * e + 1])
    return out


def _subgraph(g: PlanarGraph, edges: Sequence[int]) -> tuple[PlanarGraph, list[int], list[int]]:
    """Embedding-restricted subgraph; returns (graph, edge ids, vertex ids)."""
    es = sorted(edges)
    eid = {e: i for i, e in enumerate(es)}
    vs = sorted(_piece_vertices(g, es))
    vid = {v: i for i, v in enumerate(vs)}
    tails = []
    for e in es:
        tails.extend((vid[g.tail[2 * e]], vid[g.tail[2 * e + 1]]))
    rotations = []
    for v in vs:
        rotations.append([2 * eid[d >> 1] + (d & 1) for d in g.rotation(v) if (d >> 1) in eid])
    weights = [g.weight[e] for e in es]
    labels = [g.label[e] for e in es]
    return PlanarGraph(tails, rotations, weights, labels), es, vs


def _components(sub: PlanarGraph, es: list[int]) -> list[list[int]]:
    """Connected components of a subgraph as host-edge lists."""
    comp = [-1] * sub.n
    out: list[list[int]] = []
    for s in range(sub.n):
        if comp[s] >= 0:
            continue
        cid = len(out)
        comp[s] = cid
        stack = [s]
        while stack:
            v = stack.pop()
            for d in sub.rotation(v):
                u = sub.tail[d ^ 1]
                if comp[u] < 0:
                    comp[u] = cid
                    stack.append(u)
        out.append([])
    for i in range(sub.m):
        out[comp[sub.tail[2 * i]]].append(es[i])
    return [c for c in out if c]


def _balanced_edge_split(g: PlanarGraph, edges: list[int]) -> Optional[tuple[list[int], list[int]]]:
    """Split a connected edge set along a balanced fundamental cycle of its
    triangulated subgraph. Returns None when no productive split exists."""
    sub, es, _vs = _subgraph(g, edges)
    tri, _ = triangulate(sub)
    try:
        t = sssp(tri, 0)
        dt = DualTree(tri, t)
    except NoNonTreeEdge:
        return None
    bc, _ = dt.balanced_edge()
    cyc = fundamental_cycle(t, bc)
    cyc_edges = {d >> 1 for d in cyc.darts}
    # flood triangulated faces off one side of the cycle
    in_left = [False] * tri.nfaces
    seed = tri.face_of[cyc.darts[0]]
    in_left[seed] = True
    stack = [seed]
    while stack:
        f = stack.pop()
        d0 = tri.face_dart[f]
        d = d0
        while True:
            if (d >> 1) not in cyc_edges:
                f2 = tri.face_of[d ^ 1]
                if not in_left[f2]:
                    in_left[f2] = True
                    stack.append(f2)
            d = tri.rot_next[d ^ 1]
            if d == d0:
                break
    left: list[int] = []
    right: list[int] = []
    for i in range(sub.m):  # host edges only; chords are search scaffolding
        fa, fb = tri.face_of[2 * i], tri.face_of[2 * i + 1]
        host = es[i]
        if in_left[fa] or in_left[fb]:
            left.append(host)  # cycle edges bound the left side and live there
        else:
            right.append(host)
    if len(left) >= len(edges) or len(right) >= len(edges):
        return None
    if not left or not right:
        return None
    return left, right


def _subtree_edge_split(g: PlanarGraph, edges: list[int]) -> Optional[tuple[list[int], list[int]]]:
    """Fallback splitter for pieces with no balancing cycle (filaments and
    trees): partition the edges by the most balanced BFS subtree."""
    sub, es, _vs = _subgraph(g, edges)
    if sub.m < 2:
        return None
    parent = [-2] * sub.n
    order = [0]
    parent[0] = -1
    depth = [0] * sub.n
    for v in order:
        for d in sub.rotation(v):
            u = sub.tail[d ^ 1]
            if parent[u] == -2:
                parent[u] = v
                depth[u] = depth[v] + 1
                order.append(u)
    if len(order) != sub.n:
        return None  # disconnected; the component pass handles it
    owner = [0] * sub.m
    cnt = [0] * sub.n
    for i in range(sub.m):
        a, b = sub.tail[2 * i], sub.tail[2 * i + 1]
        v = a if (depth[a], a) >= (depth[b], b) else b
        owner[i] = v
        cnt[v] += 1
    subcnt = list(cnt)
    for v in reversed(order):
        if parent[v] >= 0:
            subcnt[parent[v]] += subcnt[v]
    best_v = -1
    best_key = None
    half = sub.m / 2
    for v in order[1:]:
        if subcnt[v] == 0 or subcnt[v] == sub.m:
            continue
        key = (abs(subcnt[v] - half), v)
        if best_key is None or key < best_key:
            best_key = key
            best_v = v
    if best_v < 0:
        return None
    # descendants of best_v
    mark = bytearray(sub.n)
    mark[best_v] = 1
    for v in order:
        if parent[v] >= 0 and mark[parent[v]] and v != best_v:
            mark[v] = 1
    left = [es[i] for i in range(sub.m) if mark[owner[i]]]
    right = [es[i] for i in range(sub.m) if not mark[owner[i]]]
    if not left or not right:
        return None
    return left, right


def _face_is_host(g: PlanarGraph, sub: PlanarGraph, es: list[int], vs: list[int], f: int) -> Optional[int]:
    """Host face id if the subgraph face is exactly a host face, else None."""
    walk = sub.face_walk(f)
    d0 = walk[0]
    host_d0 = 2 * es[d0 >> 1] + (d0 & 1)
    hf = g.face_of[host_d0]
    if g.face_size[hf] != len(walk):
        return None
    for d in walk:
        if g.face_of[2 * es[d >> 1] + (d & 1)] != hf:
            return None
    return hf


def count_holes(g: PlanarGraph, edges: Iterable[int]) -> int:
    """Finite faces of the piece that are not faces of the host graph."""
    sub, es, vs = _subgraph(g, sorted(edges))
    non_host = 0
    contains_outer = False
    outer = g.outer_face
    for f in range(sub.nfaces):
        hf = _face_is_host(g, sub, es, vs, f)
        if hf is None:
            non_host += 1
        elif hf == outer:
            contains_outer = True
    if non_host == 0:
        return 0
    return non_host if contains_outer else non_host - 1


def piece_boundary(g: PlanarGraph, edges: frozenset[int]) -> tuple[list[int], list[int]]:
    boundary = []
    interior = []
    for v in sorted(_piece_vertices(g, edges)):
        if all((d >> 1) in edges for d in g.rotation(v)):
            interior.append(v)
        else:
            boundary.append(v)
    return boundary, interior


def r_division(g: PlanarGraph, r: int) -> RDivision:
    """Partition the edges into pieces of at most r vertices, each with few
    boundary vertices and holes (post-pass enforced, constants recorded)."""
    if r < 4:
        raise BadR(f"r must be at least 4; got {r}")
    r = min(r, max(g.n, 4))  # r beyond n is a single-piece division
    c3 = DIVISION_CONSTANTS["c3_boundary"] * math.sqrt(r)
    c4 = DIVISION_CONSTANTS["c4_holes"]

    final: list[list[int]] = []
    work: list[list[int]] = [list(range(g.m))]
    while work:
        edges = work.pop()
        if not edges:
            continue
        sub, es, _ = _subgraph(g, edges)
        comps = _components(sub, es)
        if len(comps) > 1:
            work.extend(comps)
            continue
        nverts = sub.n
        needs_split = nverts > r
        if not needs_split and len(edges) > 3:
            bnd, _ = piece_boundary(g, frozenset(edges))
            if len(bnd) > c3 or count_holes(g, edges) > c4:
                needs_split = True
        if needs_split:
            parts = _balanced_edge_split(g, edges)
            if parts is None:
                parts = _subtree_edge_split(g, edges)
            if parts is not None:
                work.extend(parts)
                continue
        final.append(edges)

    # deterministic order: by smallest contained edge id
    final.sort(key=min)
    pieces = []
    for i, edges in enumerate(final):
        fs = frozenset(edges)
        bnd, inter = piece_boundary(g, fs)
        pieces.append(Piece(i, fs, bnd, inter, count_holes(g, edges)))
    covered = sorted(e for p in pieces for e in p.edges)
    if covered != list(range(g.m)):
        raise InternalInvariantError("pieces do not partition the edge set")
    return RDivision(g, r, pieces)


# ---------------------------------------------------------------------------
# Skeleton graph


@dataclass
class SkeletonEdge:
    u: int
    v: int
    piece: int
    walk: list[int]  # host darts of the face walk from u to v


@dataclass
class SkeletonGraph:
    vertices: list[int]
    edges: list[SkeletonEdge]  # all INF weight


def skeleton(d: RDivision) -> SkeletonGraph:
    """INF edges joining consecutive boundary vertices around every hole
    and every piece's outer boundary (every non-host face of each piece)."""
    g = d.graph
    edges: list[SkeletonEdge] = []
    allb: set[int] = set()
    for p in d.pieces:
        allb.update(p.boundary)
        bset = set(p.boundary)
        sub, es, vs = _subgraph(g, sorted(p.edges))
        for f in range(sub.nfaces):
            if _face_is_host(g, sub, es, vs, f) is not None:
                continue
            walk = sub.face_walk(f)
            host_walk = [2 * es[dd >> 1] + (dd & 1) for dd in walk]
            idx = [i for i, dd in enumerate(host_walk) if g.tail[dd] in bset]
            for k, i in enumerate(idx):
                j = idx[(k + 1) % len(idx)]
                seg = host_walk[i:j] if j > i else host_walk[i:] + host_walk[:j]
                u = g.tail[host_walk[i]]
                v = g.tail[host_walk[j]]
                if u == v and len(idx) == 1:
                    seg = host_walk[i:] + host_walk[:i]
                edges.append(SkeletonEdge(u, v, p.index, seg))
    return SkeletonGraph(sorted(allb), edges)


# ---------------------------------------------------------------------------
# Dense distance graphs


@dataclass
class DenseDistanceGraph:
    host: PlanarGraph = field(repr=False)
    piece: int = 0
    boundary: list[int] = field(default_factory=list)
    table: dict = field(default_factory=dict)  # (u, v) -> in-piece distance; symmetric
    pred: dict = field(repr=False, default_factory=dict)  # root -> {vertex: dart into vertex}

    def distance(self, u: int, v: int) -> Weight:
        if u == v:
            return 0
        return self.table.get((u, v), INF)

    def expand(self, u: int, v: int) -> list[int]:
        """Host darts of the stored shortest u-to-v path inside the piece."""
        if u == v:
            return []
        preds = self.pred[u]
        out = []
        x = v
        while x != u:
            dd = preds.get(x)
            if dd is None:
                raise InternalInvariantError(f"no stored path {u}->{v}")
            out.append(dd)
            x = self.host.tail[dd]
        out.reverse()
        return out


def build_ddg(g: PlanarGraph, piece: Piece) -> DenseDistanceGraph:
    """Per-boundary-vertex Dijkstra restricted to the piece; exact table
    plus predecessor trees for path expansion."""
    verts = sorted(_piece_vertices(g, piece.edges))
    lid = {v: i for i, v in enumerate(verts)}
    nloc = len(verts)
    adj: list[list[tuple[int, Weight, int]]] = [[] for _ in range(nloc)]
    for e in sorted(piece.edges):
        w = g.weight[e]
        a, b = lid[g.tail[2 * e]], lid[g.tail[2 * e + 1]]
        adj[a].append((b, w, 2 * e))
        adj[b].append((a, w, 2 * e + 1))
    table: dict = {}
    pred: dict = {}
    bset = piece.boundary
    for root in bset:
        rloc = lid[root]
        dist: list[Weight] = [INF] * nloc
        par: list[int] = [-1] * nloc
        done = bytearray(nloc)
        dist[rloc] = 0
        heap: list[tuple[Weight, int, int]] = [(0, rloc, -1)]
        while heap:
            dv, v, via = heappop(heap)
            if done[v]:
                continue
            done[v] = 1
            par[v] = via
            for u, w, dd in adj[v]:
                if done[u]:
                    continue
                du = dv + w
                if du <= dist[u]:
                    dist[u] = du
                    heappush(heap, (du, u, dd))
        for v in bset:
            if v != root and dist[lid[v]] != INF:
                table[(root, v)] = dist[lid[v]]
        pred[root] = {verts[i]: par[i] for i in range(nloc) if par[i] >= 0}
    return DenseDistanceGraph(g, piece.index, list(bset), table, pred)


# ---------------------------------------------------------------------------
# Dijkstra over dense distance graphs plus explicit edges


@dataclass
class MultipartResult:
    dist: dict
    parent: dict  # vertex -> ("ddg", ddg, u) | ("edge", (u, v, w))

    def path_exists(self, v: int) -> bool:
        return v in self.dist


def multipart_dijkstra(
    ddgs: Sequence[DenseDistanceGraph],
    extra_edges: Sequence[tuple[int, int, Weight]],
    sources: dict,
    target: Optional[int] = None,
    limit: Weight = INF,
) -> MultipartResult:
    """Exact distances in the union graph of all DDG tables (as explicit
    edges) and the extra edge set, from multiple offset sources. With a
    target the search stops once it settles; distances beyond ``limit``
    are not explored (the target's entry is then absent)."""
    adj: dict[int, list[tuple[int, Weight, tuple]]] = {}

    def add(u: int, v: int, w: Weight, tag: tuple) -> None:
        adj.setdefault(u, []).append((v, w, tag))

    for ddg in ddgs:
        for (u, v), w in ddg.table.items():
            add(u, v, w, ("ddg", ddg, u))
    for u, v, w in extra_edges:
        add(u, v, w, ("edge", (u, v, w)))
        add(v, u, w, ("edge", (v, u, w)))
    dist: dict = {}
    parent: dict = {}
    done: set = set()
    heap: list = []
    for v, off in sorted(sources.items()):
        dist[v] = off
        heappush(heap, (off, v, None))
    while heap:
        dv, v, tag = heappop(heap)
        if v in done:
            continue
        if dv > limit:
            dist.pop(target, None) if target is not None and dist.get(target, INF) > limit else None
            break
        done.add(v)
        if tag is not None:
            parent[v] = tag
        if target is not None and v == target:
            break
        for u, w, tg in adj.get(v, ()):
            if u in done:
                continue
            du = dv + w
            if du <= limit and du < dist.get(u, INF):
                dist[u] = du
                heappush(heap, (du, u, tg))
    return MultipartResult(dist, parent)
