"""Static shortest-cycle solvers and global min-cut via duality.

Three algorithms share one recursion: reduce (degree-2 contraction with
candidate extraction), divide (balanced fundamental cycle from the dual
tree), conquer (minimum cycle separating a face inside the dividing cycle
from one outside, by dual max-flow), and recurse on both sides. They
differ in how the conquering queries are served:

* ``shortest_cycle_cfn`` builds a fresh flow scope per recursion node;
* ``shortest_cycle_batched`` rebuilds one FlowStructure per branch every
  ceil(log log n) levels and lets deeper nodes query the larger scope
  (answers only shrink and stay real cycles, so the minimum is exact);
* ``shortest_cycle_ddg`` runs the same recursion on an r-division's
  compressed recursion graph and finishes small regions with the batched
  solver (see ddg_solver.py).

Every subproblem is re-triangulated with INF edges before dividing; INF
edges never lie on finite cycles, so answers are unaffected while the
floor(W/4) balance guarantee of the dual-tree walk stays available.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    INF,
    LABEL_REAL,
    ContractResult,
    Cycle,
    PlanarGraph,
    Weight,
    contract_degree2,
    dual,
    normalize,
    split_by_cycle,
    side_faces,
    triangulate,
    walk_is_closed,
)
from .divide import DualTree
from .errors import InternalInvariantError, NoNonTreeEdge, RootNotInScope
from .flowcut import FlowStructure, min_separating_cycle
from array import array as _array


def _array_i(vals):
    return _array("i", vals)


from .paths import ShortestPathTree, fundamental_cycle, sssp, walk_sum

try:  # scipy backs the shortest-path tree on large inputs only
    import numpy as _np
    from scipy.sparse import csr_matrix as _csr
    from scipy.sparse.csgraph import dijkstra as _scipy_dijkstra
except ImportError:  # pragma: no cover
    _np = None
    _scipy_dijkstra = None

BASE_FACES = 64
_SCIPY_DART_THRESHOLD = 24_000


@dataclass
class RunStats:
    """Per-run instrumentation counters and structural measurements."""

    counters: dict = field(default_factory=dict)
    balances: list = field(default_factory=list)  # (min side faces, total faces)
    region_balances: list = field(default_factory=list)  # ddg divide accounting
    region_level_verts: dict = field(default_factory=dict)  # level -> sum |V(region)|
    terminal_sizes: list = field(default_factory=list)  # |V(G_R)| per terminal region

    def bump(self, key: str, n: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + n

    def emit(self, out=sys.stderr) -> None:
        for key in sorted(self.counters):
            print(f"counter {key}={self.counters[key]}", file=out)
        if self.terminal_sizes:
            print(f"counter terminal_vertices_total={sum(self.terminal_sizes)}", file=out)
            print(f"counter terminal_vertices_max={max(self.terminal_sizes)}", file=out)
        if self.region_level_verts:
            worst = max(self.region_level_verts.values())
            print(f"counter region_level_vertices_max={worst}", file=out)


class _Node:
    """A solver subproblem: a graph plus per-edge provenance in its parent.

    ``single`` maps edge -> parent dart of dart 2e (-1 when created here);
    ``multi`` overrides it with full chains for merged edges.
    """

    __slots__ = ("g", "parent", "single", "multi")

    def __init__(self, g: PlanarGraph, parent: Optional["_Node"], single, multi=None):
        self.g = g
        self.parent = parent
        self.single = single
        self.multi = multi

    def dart_origin(self, d: int):
        e = d >> 1
        if self.multi is not None:
            seq = self.multi.get(e)
            if seq is not None:
                return seq if d & 1 == 0 else tuple(x ^ 1 for x in reversed(seq))
        pd = self.single[e]
        if pd < 0:
            return None
        return (pd,) if d & 1 == 0 else (pd ^ 1,)

    def has_origin(self, e: int) -> bool:
        return self.single[e] >= 0 or (self.multi is not None and e in self.multi)


def _expand_to_root(node: _Node, darts: Sequence[int]) -> list[int]:
    cur = list(darts)
    while node.parent is not None:
        out: list[int] = []
        for d in cur:
            seq = node.dart_origin(d)
            if seq is None:
                raise InternalInvariantError("finite cycle uses an edge with no provenance")
            out.extend(seq)
        cur = out
        node = node.parent
    return cur


def _resolve_face_up(node: _Node, face: int, ancestor: _Node) -> int:
    """Ancestor face whose region contains the given face.

    Splits keep whole faces and triangulation only subdivides them, so
    chasing any resolvable boundary dart upward preserves containment;
    faces bounded purely by locally-created edges borrow a witness from a
    neighboring fragment of the same subdivided face.
    """
    cur, f = node, face
    while cur is not ancestor:
        d = _find_resolvable_dart(cur, f)
        pd = cur.dart_origin(d)[0]
        cur = cur.parent
        f = cur.g.face_of[pd]
    return f


def _find_resolvable_dart(node: _Node, face: int) -> int:
    g = node.g
    seen = {face}
    queue = [face]
    while queue:
        f = queue.pop()
        for d in g.face_walk(f):
            if node.has_origin(d >> 1):
                return d
            f2 = g.face_of[d ^ 1]
            if f2 not in seen:
                seen.add(f2)
                queue.append(f2)
    raise InternalInvariantError("no resolvable dart around face")


def _sssp_tree(g: PlanarGraph, root: int) -> ShortestPathTree:
    """Shortest-path tree; scipy-backed above the size threshold."""
    if _scipy_dijkstra is None or 2 * g.m < _SCIPY_DART_THRESHOLD:
        return sssp(g, root)
    us, vs, ws = [], [], []
    for e in range(g.m):
        w = g.weight[e]
        if w != INF:
            us.append(g.tail[2 * e])
            vs.append(g.tail[2 * e + 1])
            ws.append(w)
    row = _np.fromiter(us + vs, dtype=_np.int64, count=2 * len(us))
    col = _np.fromiter(vs + us, dtype=_np.int64, count=2 * len(us))
    dat = _np.fromiter(ws + ws, dtype=_np.float64, count=2 * len(ws))
    mat = _csr((dat, (row, col)), shape=(g.n, g.n))
    ds, pred = _scipy_dijkstra(mat, indices=root, return_predecessors=True)
    dist: list[Weight] = [INF] * g.n
    parent = [-1] * g.n
    for v in range(g.n):
        dv = ds[v]
        if not math.isinf(dv):
            dist[v] = int(dv)
    for v in range(g.n):
        p = pred[v]
        if p < 0 or dist[v] == INF:
            continue
        need = dist[v] - dist[p]
        best = -1
        for d in g.rotation(v):
            if g.tail[d ^ 1] == p and g.weight[d >> 1] == need:
                if best < 0 or (d ^ 1) < best:
                    best = d ^ 1
        if best < 0:
            raise InternalInvariantError("scipy tree edge not found")
        parent[v] = best
    # attach finitely-unreachable vertices through INF edges
    frontier = [v for v in range(g.n) if dist[v] != INF or v == root]
    reached = bytearray(g.n)
    for v in frontier:
        reached[v] = 1
    qi = 0
    while qi < len(frontier):
        v = frontier[qi]
        qi += 1
        for d in g.rotation(v):
            u = g.tail[d ^ 1]
            if not reached[u]:
                reached[u] = 1
                parent[u] = d
                frontier.append(u)
    return ShortestPathTree(g, root, dist, parent)


def divide_balanced(g: PlanarGraph, t: ShortestPathTree) -> tuple[int, Cycle, tuple[int, int]]:
    """Non-tree edge whose fundamental cycle balances the face count.

    Walk-down of the dual spanning tree (heaviest subtree first, ties to
    the smaller face id, returned edge ties to the smaller edge id); falls
    back to the globally best dual edge if the walk misses floor(W/4).
    """
    dt = DualTree(g, t)
    bc, enclosed = dt.balanced_edge()
    cyc = fundamental_cycle(t, bc)
    return bc, cyc, (enclosed, dt.total - enclosed)


def _conquer_faces(
    g: PlanarGraph, t: ShortestPathTree, cyc: Cycle, bc: int
) -> tuple[int, int, set[int], set[int]]:
    left, right = side_faces(g, cyc.darts)
    d_bc = next(d for d in cyc.darts if d >> 1 == bc)
    f_inside = g.face_of[d_bc]
    if f_inside not in left:
        raise InternalInvariantError("cycle orientation broke side bookkeeping")
    f_outside = -1
    b, c = g.tail[2 * bc], g.tail[2 * bc + 1]
    for endpoint in (b, c):
        for d in t.path_darts(endpoint):
            if g.face_of[d] in right:
                f_outside = g.face_of[d]
                break
            if g.face_of[d ^ 1] in right:
                f_outside = g.face_of[d ^ 1]
                break
        if f_outside >= 0:
            break
    if f_outside < 0:
        raise InternalInvariantError("no exterior face adjacent to the dividing paths")
    return f_outside, f_inside, left, right


def _lightest_edge_candidate(g: PlanarGraph) -> tuple[Weight, Optional[list[int]]]:
    """Best cycle through the lightest finite edge: one target Dijkstra."""
    best_e = -1
    for e in range(g.m):
        w = g.weight[e]
        if w != INF and g.tail[2 * e] != g.tail[2 * e + 1]:
            if best_e < 0 or w < g.weight[best_e]:
                best_e = e
    if best_e < 0:
        return INF, None
    from heapq import heappop, heappush

    e = best_e
    u, v = g.tail[2 * e], g.tail[2 * e + 1]
    dist = {u: 0}
    parent: dict = {}
    done = set()
    heap: list = [(0, u, -1)]
    du: Weight = INF
    while heap:
        dv, a, via = heappop(heap)
        if a in done:
            continue
        done.add(a)
        if via >= 0:
            parent[a] = via
        if a == v:
            du = dv
            break
        for dd in g.rotation(a):
            e2 = dd >> 1
            if e2 == e or g.weight[e2] == INF:
                continue
            b = g.tail[dd ^ 1]
            nd = dv + g.weight[e2]
            if b not in done and nd < dist.get(b, INF):
                dist[b] = nd
                heappush(heap, (nd, b, dd))
    if du == INF:
        return INF, None
    darts = []
    x = v
    while x != u:
        dd = parent[x]
        darts.append(dd)
        x = g.tail[dd]
    darts.reverse()
    return du + g.weight[e], darts + [2 * e + 1]


def _per_edge_solve(g: PlanarGraph, prune_at: Weight = INF) -> tuple[Weight, Optional[list[int]]]:
    """Exact small-case solver: remove each finite edge, connect its ends
    with a target Dijkstra pruned at the best candidate seen so far.

    Candidates at or above ``prune_at`` are not reported (callers fold the
    result into a minimum that already holds a candidate of that length).
    """
    from heapq import heappop, heappush

    best: Weight = INF
    cap: Weight = prune_at
    best_darts: Optional[list[int]] = None
    tail = g.tail
    weight = g.weight
    rot = [g.rotation(v) for v in range(g.n)]
    for e in range(g.m):
        w = weight[e]
        bound = min(best, cap)
        if w == INF or w >= bound:
            continue
        u, v = tail[2 * e], tail[2 * e + 1]
        if u == v:
            if w < best:
                best, best_darts = w, [2 * e]
            continue
        lim = bound - w  # only distances strictly below this can improve
        dist = {u: 0}
        parent: dict[int, int] = {}
        done = set()
        heap: list[tuple[Weight, int, int]] = [(0, u, -1)]
        du: Weight = INF
        while heap:
            dv, a, via = heappop(heap)
            if a in done:
                continue
            if dv >= lim:
                break
            done.add(a)
            if via >= 0:
                parent[a] = via
            if a == v:
                du = dv
                break
            for dd in rot[a]:
                e2 = dd >> 1
                if e2 == e:
                    continue
                w2 = weight[e2]
                if w2 == INF:
                    continue
                b = tail[dd ^ 1]
                nd = dv + w2
                if b not in done and nd < lim and nd < dist.get(b, INF):
                    dist[b] = nd
                    heappush(heap, (nd, b, dd))
        if du != INF and du + w < best:
            best = du + w
            darts = []
            x = v
            while x != u:
                dd = parent[x]
                darts.append(dd)
                x = tail[dd]
            darts.reverse()
            best_darts = darts + [2 * e + 1]
    return best, best_darts


def _solve_engine(
    g0: PlanarGraph, checkpoints: bool, stats: RunStats
) -> tuple[Weight, Optional[_Node], Optional[list[int]]]:
    root = _Node(g0, None, None)
    best: list = [INF, None, None]

    def offer(length: Weight, node: _Node, darts: Optional[list[int]]) -> None:
        if length < best[0]:
            best[0], best[1], best[2] = length, node, darts

    k_refresh = 1
    if checkpoints:
        n0 = max(g0.n, 4)
        k_refresh = max(1, math.ceil(math.log2(max(2.0, math.log2(n0)))))
        stats.counters.setdefault("fs_refresh_levels", k_refresh)

    # seed one cheap candidate (best cycle through the lightest edge) so
    # every conquering flow query runs with a finite limit
    seed_val, seed_darts = _lightest_edge_candidate(g0)
    if seed_val < INF:
        offer(seed_val, root, seed_darts)

    def rec(
        node: _Node,
        fs: Optional[FlowStructure],
        fs_node: Optional[_Node],
        fs_age: int,
        prev_faces: Optional[int],
        streak: int,
    ) -> None:
        stats.bump("nodes")
        cres = contract_degree2(node.g, validate=False)
        offer(cres.candidate, node, cres.candidate_darts)
        h = cres.graph
        if h.m == 0:
            return
        hnode = _Node(h, node, cres.origin_single, cres.origin_multi)
        if h.nfaces <= BASE_FACES:
            stats.bump("base_solves")
            val, darts = _per_edge_solve(h, best[0])
            offer(val, hnode, darts)
            return
        tri, _ = triangulate(h, validate=False)
        tri_single = _array_i([2 * e for e in range(h.m)] + [-1] * (tri.m - h.m))
        tnode = _Node(tri, hnode, tri_single)
        if prev_faces is not None and tri.nfaces >= prev_faces:
            # the bounding-face re-triangulation outgrew the split; near the
            # bottom this is common and the exact small solver is cheap
            if tri.nfaces <= 256:
                stats.bump("nonshrink_fallback")
                val, darts = _per_edge_solve(tri, best[0])
                offer(val, tnode, darts)
                return
            stats.bump("nonshrink_recurse")
            streak += 1
            if streak > 30:
                raise InternalInvariantError("recursion stopped shrinking on a large subproblem")
        else:
            streak = 0
        t = _sssp_tree(tri, 0)
        try:
            bc, cyc, _sides = divide_balanced(tri, t)
        except NoNonTreeEdge:
            return
        stats.bump("divides")
        f_out, f_in, left, right = _conquer_faces(tri, t, cyc, bc)
        if checkpoints:
            if fs is None or fs_age >= k_refresh:
                fs = FlowStructure(tri)
                fs_node = tnode
                fs_age = 0
                stats.bump("fs_builds")
            qa = _resolve_face_up(tnode, f_out, fs_node)
            qe = _resolve_face_up(tnode, f_in, fs_node)
            if qa != qe:
                stats.bump("flow_queries")
                ans = fs.query(qa, qe, limit=best[0])
                if ans.length < best[0]:
                    offer(ans.length, fs_node, ans.cycle.darts)
        else:
            stats.bump("flow_queries")
            ans = FlowStructure(tri).query(f_out, f_in, limit=best[0])
            if ans.length < best[0]:
                offer(ans.length, tnode, ans.cycle.darts)
        sp = split_by_cycle(tri, cyc, validate=False, sides=(left, right))
        stats.balances.append((min(len(sp.interior_faces), len(sp.exterior_faces)), tri.nfaces))
        children = [
            _Node(sp.interior, tnode, _array_i([2 * pe for pe in sp.interior_edge_map])),
            _Node(sp.exterior, tnode, _array_i([2 * pe for pe in sp.exterior_edge_map])),
        ]
        faces_here = tri.nfaces
        del cres, sp, t, cyc, left, right, tri, h
        for cnode in children:
            rec(cnode, fs, fs_node, fs_age + 1, faces_here, streak)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        rec(root, None, None, 0, None, 0)
    finally:
        sys.setrecursionlimit(old_limit)
    return best[0], best[1], best[2]


def _finish(g: PlanarGraph, length: Weight, node: Optional[_Node], darts: Optional[list[int]]) -> tuple[Weight, Optional[Cycle]]:
    if length == INF or node is None or darts is None:
        return INF, None
    expanded = _expand_to_root(node, darts)
    if not walk_is_closed(g, expanded):
        raise InternalInvariantError("winning cycle failed to expand to a closed walk")
    if walk_sum(g, expanded) != length:
        raise InternalInvariantError("winning cycle re-sums to a different length")
    if not any(g.label[d >> 1] == LABEL_REAL for d in expanded):
        raise InternalInvariantError("winning cycle has no real edge")
    return length, Cycle(expanded, length, len({g.tail[d] for d in expanded}) == len(expanded))


def shortest_cycle_cfn(g: PlanarGraph, stats: Optional[RunStats] = None) -> tuple[Weight, Optional[Cycle]]:
    """Divide-and-conquer shortest cycle with a fresh flow scope per node."""
    stats = stats if stats is not None else RunStats()
    length, node, darts = _solve_engine(g, False, stats)
    return _finish(g, length, node, darts)


def shortest_cycle_batched(g: PlanarGraph, stats: Optional[RunStats] = None) -> tuple[Weight, Optional[Cycle]]:
    """Same recursion, flow structures rebuilt only every ceil(log log n)
    levels per branch and shared by the levels in between."""
    stats = stats if stats is not None else RunStats()
    length, node, darts = _solve_engine(g, True, stats)
    return _finish(g, length, node, darts)


def min_cut(g: PlanarGraph, algo: str = "cfn", stats: Optional[RunStats] = None) -> tuple[Weight, list[int]]:
    """Global minimum cut: shortest cycle in the dual; the cut is the set
    of primal edges dual to the cycle's edges."""
    from . import oracles

    dm = dual(g)
    dg = dm.graph
    if algo == "oracle":
        val, cyc = oracles.oracle_shortest_cycle(dg)
        if cyc is None:
            return INF, []
        return val, sorted({d >> 1 for d in cyc.darts})
    solver = {
        "cfn": shortest_cycle_cfn,
        "batched": shortest_cycle_batched,
        "ddg": None,  # bound below once the ddg solver is defined
    }.get(algo)
    if algo == "ddg":
        from .ddg_solver import shortest_cycle_ddg as solver  # local import; no cycle at module load
    if solver is None:
        raise ValueError(f"unknown algorithm {algo!r}")
    nr = normalize(dg)
    val, cyc = solver(nr.graph, stats=stats) if stats is not None else solver(nr.graph)
    if cyc is None:
        return INF, []
    back = nr.map_cycle(cyc.darts)
    return val, sorted({d >> 1 for d in back})
