"""Shortest cycles over an r-division: the compressed-recursion solver.

The recursion state is a tree of Regions. Each region owns a set of host
faces, a compressed graph over boundary vertices (skeleton arcs, division
edges, super edges; every edge expandable to a host walk), and explicit
piece fragments with dense distance graphs. Dividing picks a balanced
fundamental cycle in the region's explicit subgraph, inserts division
edges, rebuilds the DDG of every fragment the cycle intersects, and
recurses on both sides. Conquering queries one FlowStructure built over
the whole host graph: a superset scope only shrinks answers and every
answer is a real host cycle, so the global minimum is exact. Regions
below r vertices are materialized and finished by the batched solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import INF, LABEL_REAL, Cycle, PlanarGraph, Weight, triangulate, walk_is_closed
from .divide import DualTree
from .errors import InternalInvariantError, NoNonTreeEdge, RegionTooSmall
from .flowcut import FlowStructure
from .partition import (
    DenseDistanceGraph,
    Piece,
    RDivision,
    _subgraph,
    build_ddg,
    r_division,
    skeleton,
)
from .paths import fundamental_cycle, sssp, walk_sum
from .static_solver import RunStats, _conquer_faces, _expand_to_root, _solve_engine

SKEL = "skel"
DIV = "div"
SUPER = "super"


@dataclass(eq=False)
class CEdge:
    """Compressed recursion-graph edge; identity semantics on purpose."""

    u: int
    v: int
    weight: Weight
    kind: str
    piece: int
    walk: tuple[int, ...]  # host darts u -> v; -1 marks a synthetic barrier step
    children: tuple["CEdge", ...] = ()

    def expand(self) -> list[int]:
        """Real host darts along the edge (synthetic steps dropped)."""
        if self.kind == SUPER:
            out: list[int] = []
            for c in self.children:
                out.extend(c.expand())
            return out
        return [d for d in self.walk if d >= 0]


@dataclass
class Fragment:
    pid: int
    edges: frozenset[int]
    boundary: list[int]
    ddg: Optional[DenseDistanceGraph]


@dataclass
class Region:
    rid: int
    verts: list[int]
    redges: list[CEdge]
    fragments: list[Fragment]
    faces: frozenset[int]  # owned host faces


@dataclass
class DivideResult:
    cycle: Cycle  # real host darts of the dividing cycle (gaps possible)
    inner: Region
    outer: Region
    query_faces: Optional[tuple[int, int]]  # host faces for the conquering query


@dataclass
class RecursionGraph:
    """Bookkeeping shared by every region of one solver run."""

    host: PlanarGraph
    division: RDivision
    flow: FlowStructure
    stats: RunStats
    r: int
    next_rid: int = 1
    next_pid: int = 0

    def fresh_rid(self) -> int:
        self.next_rid += 1
        return self.next_rid - 1

    def fresh_pid(self) -> int:
        self.next_pid += 1
        return self.next_pid - 1


# ---------------------------------------------------------------------------
# Noncrossing tree (public contract; built by compressing a host SPT)


@dataclass
class NCTreeEdge:
    child: int
    parent: int
    weight: Weight
    piece: int
    walk: tuple[int, ...]  # host darts parent -> child


@dataclass
class NoncrossingTree:
    root: int
    dist: dict
    edges: dict  # child boundary vertex -> NCTreeEdge


def build_noncrossing_tree(
    d: RDivision, ddgs: Sequence[DenseDistanceGraph], root: int
) -> NoncrossingTree:
    """Compress one host shortest-path tree at piece boundaries. Every tree
    edge is an in-piece shortest subpath realized inside a single tree, so
    no two underlying paths cross."""
    g = d.graph
    piece_of_edge = {}
    for p in d.pieces:
        for e in p.edges:
            piece_of_edge[e] = p.index
    t = sssp(g, root)
    boundary = d.all_boundary()
    edges: dict = {}
    dist: dict = {root: 0}
    for v in sorted(boundary):
        if v == root or t.parent_dart[v] < 0:
            continue
        walk: list[int] = []
        x = v
        while True:
            dd = t.parent_dart[x]
            walk.append(dd)
            x = g.tail[dd]
            if x in boundary or x == root:
                break
        walk.reverse()
        edges[v] = NCTreeEdge(v, x, walk_sum(g, walk), piece_of_edge[walk[0] >> 1], tuple(walk))
        dist[v] = t.dist[v]
    return NoncrossingTree(root, dist, edges)


# ---------------------------------------------------------------------------
# Region helpers


def _region_edge_ids(region: Region) -> set[int]:
    """Host edges backing a region: fragment contents plus division and
    super edge expansions. Skeleton arcs hug foreign piece boundaries and
    carry no content of their own."""
    out: set[int] = set()
    for fr in region.fragments:
        out |= fr.edges
    for ce in region.redges:
        if ce.kind == SKEL:
            continue
        for dd in ce.expand():
            out.add(dd >> 1)
    return out


def _fragment_boundary(g: PlanarGraph, edges: frozenset[int]) -> list[int]:
    verts = set()
    for e in edges:
        verts.add(g.tail[2 * e])
        verts.add(g.tail[2 * e + 1])
    return sorted(v for v in verts if any((dd >> 1) not in edges for dd in g.rotation(v)))


def _tri_face_to_host_face(g: PlanarGraph, tri: PlanarGraph, es: list[int], f: int) -> int:
    """Host face containing a face of the triangulated region subgraph."""
    nreal = len(es)
    seen = {f}
    stack = [f]
    while stack:
        cur = stack.pop()
        for dd in tri.face_walk(cur):
            if (dd >> 1) < nreal:
                return g.face_of[2 * es[dd >> 1] + (dd & 1)]
            f2 = tri.face_of[dd ^ 1]
            if f2 not in seen:
                seen.add(f2)
                stack.append(f2)
    raise InternalInvariantError("region face with no real boundary dart")


# ---------------------------------------------------------------------------
# Dividing step


def divide_region(rg: RecursionGraph, region: Region) -> DivideResult:
    """One balanced division of a region: find the cycle, insert division
    edges, rebuild intersected fragments' DDGs, reduce both children."""
    if len(region.verts) < rg.r:
        raise RegionTooSmall(f"region {region.rid}: {len(region.verts)} vertices")
    if len(region.faces) < 2:
        raise RegionTooSmall(f"region {region.rid}: face weight {len(region.faces)}")
    g = rg.host
    edge_ids = sorted(_region_edge_ids(region))
    exp, es, vs = _subgraph(g, edge_ids)
    local_v = {v: i for i, v in enumerate(vs)}
    local_dart: dict[int, int] = {}
    for i, e in enumerate(es):
        local_dart[2 * e] = 2 * i
        local_dart[2 * e + 1] = 2 * i + 1
    tri, _ = triangulate(exp)

    # weight 1 on the canonical fragment of every owned host face: the tri
    # face holding the host face's representative dart (stable under nesting)
    weights = [0] * tri.nfaces
    canon: dict = {}
    for hf in region.faces:
        ld = local_dart.get(g.face_dart[hf])
        if ld is None:
            raise InternalInvariantError("owned host face lost its representative dart")
        f = tri.face_of[ld]
        weights[f] += 1
        canon[hf] = f

    present = [v for v in region.verts if v in local_v]
    if not present or not exp.is_connected():
        raise RegionTooSmall(f"region {region.rid}: content detached from its boundary")
    root_local = local_v[min(present)]
    t = sssp(tri, root_local)
    try:
        dt = DualTree(tri, t, weights)
    except NoNonTreeEdge:
        raise RegionTooSmall(f"region {region.rid} has no cycle") from None
    if dt.total < 2:
        raise RegionTooSmall(f"region {region.rid}: weight {dt.total}")
    bc, enclosed = dt.balanced_edge()
    cyc = fundamental_cycle(t, bc)
    rg.stats.bump("region_divides")
    rg.stats.region_balances.append((min(enclosed, dt.total - enclosed), dt.total))

    f_out, f_in, left, _right = _conquer_faces(tri, t, cyc, bc)
    host_fa = _tri_face_to_host_face(g, tri, es, f_out)
    host_fe = _tri_face_to_host_face(g, tri, es, f_in)
    query = (host_fa, host_fe) if host_fa != host_fe else None

    # host walk of the cycle; synthetic chords become barrier steps
    host_cyc: list[int] = []
    for dd in cyc.darts:
        i = dd >> 1
        host_cyc.append(2 * es[i] + (dd & 1) if i < exp.m else -1)
    if all(dd < 0 for dd in host_cyc):
        raise RegionTooSmall(f"region {region.rid}: synthetic-only divide")

    cyc_local_edges = {dd >> 1 for dd in cyc.darts}
    in_left = [f in left for f in range(tri.nfaces)]
    side_of_host_edge: dict[int, int] = {}  # 0 left, 1 right, 2 on-cycle
    for i, e in enumerate(es):
        if i in cyc_local_edges:
            side_of_host_edge[e] = 2
        else:
            fa, fb = tri.face_of[2 * i], tri.face_of[2 * i + 1]
            if in_left[fa] and in_left[fb]:
                side_of_host_edge[e] = 0
            elif not in_left[fa] and not in_left[fb]:
                side_of_host_edge[e] = 1
            else:
                side_of_host_edge[e] = 2

    owned_left: set[int] = set()
    owned_right: set[int] = set()
    for hf in region.faces:
        (owned_left if in_left[canon[hf]] else owned_right).add(hf)
    if len(owned_left) + len(owned_right) != len(region.faces):
        raise InternalInvariantError("face ownership not conserved across a division")

    def fragment_alive(eset, owned: set[int]) -> bool:
        face_of = g.face_of
        return any(face_of[2 * e] in owned or face_of[2 * e + 1] in owned for e in eset)

    def split_fragment(fr: Fragment) -> tuple[list[Fragment], list[Fragment]]:
        sides = {side_of_host_edge[e] for e in fr.edges}
        if sides <= {0}:
            return ([fr] if fragment_alive(fr.edges, owned_left) else []), []
        if sides <= {1}:
            return [], ([fr] if fragment_alive(fr.edges, owned_right) else [])
        out: tuple[list[Fragment], list[Fragment]] = ([], [])
        for k, owned in ((0, owned_left), (1, owned_right)):
            eset = frozenset(e for e in fr.edges if side_of_host_edge[e] != 1 - k)
            if not eset or not fragment_alive(eset, owned):
                # boundary-only leftovers carry no content of this region;
                # their paths survive through the division-edge expansions
                continue
            rg.stats.bump("ddg_rebuilds")
            bnd = _fragment_boundary(g, eset)
            piece = Piece(rg.fresh_pid(), eset, bnd, [], 0)
            out[k].append(Fragment(piece.index, eset, bnd, build_ddg(g, piece)))
        return out

    frag_left: list[Fragment] = []
    frag_right: list[Fragment] = []
    for fr in region.fragments:
        a, b = split_fragment(fr)
        frag_left.extend(a)
        frag_right.extend(b)

    def edge_touches(ce: CEdge, owned: set[int]) -> bool:
        face_of = g.face_of
        for dd in ce.expand():
            if face_of[dd] in owned or face_of[dd ^ 1] in owned:
                return True
        return False

    red_left: list[CEdge] = []
    red_right: list[CEdge] = []
    for ce in region.redges:
        expansion = ce.expand()
        sides = {side_of_host_edge.get(dd >> 1, 2) for dd in expansion}
        want_left = bool(sides & {0, 2}) or not expansion
        want_right = bool(sides & {1, 2}) or not expansion
        # retire boundary structure that no longer borders owned territory
        if want_left and (not expansion or edge_touches(ce, owned_left)):
            red_left.append(ce)
        if want_right and (not expansion or edge_touches(ce, owned_right)):
            red_right.append(ce)

    frag_of_edge: dict[int, int] = {}
    for fr in region.fragments:
        for e in fr.edges:
            frag_of_edge[e] = fr.pid
    for u, v, walk, pid in _cycle_runs(g, host_cyc, frag_of_edge):
        w: Weight = 0
        for dd in walk:
            w = w + (INF if dd < 0 else g.weight[dd >> 1])
        ce = CEdge(u, v, w, DIV, pid, tuple(walk))
        red_left.append(ce)
        red_right.append(ce)
        rg.stats.bump("division_edges")

    inner = _make_child(rg, red_left, frag_left, owned_left)
    outer = _make_child(rg, red_right, frag_right, owned_right)
    host_cycle = Cycle([dd for dd in host_cyc if dd >= 0], cyc.total_length, False)
    return DivideResult(host_cycle, inner, outer, query)


def _cycle_runs(g: PlanarGraph, host_cyc: list[int], frag_of_edge: dict[int, int]):
    """Maximal subwalks of the dividing cycle inside one fragment; the run
    endpoints are existing boundary vertices, so the recursion graph never
    gains vertices."""
    k = len(host_cyc)
    owner: list[Optional[int]] = [
        (frag_of_edge.get(dd >> 1, -1) if dd >= 0 else None) for dd in host_cyc
    ]
    for rounds in range(2):  # circular fill of synthetic steps
        for i in range(k):
            if owner[i] is None:
                owner[i] = owner[i - 1]
    if any(o is None for o in owner):
        raise InternalInvariantError("cycle owners undefined")
    if all(o == owner[0] for o in owner):
        u = _step_tail(g, host_cyc, 0)
        return [(u, u, list(host_cyc), owner[0])]
    start = next(i for i in range(k) if owner[i] != owner[i - 1])
    rot = host_cyc[start:] + host_cyc[:start]
    own = owner[start:] + owner[:start]
    runs = []
    i = 0
    while i < k:
        j = i
        while j < k and own[j] == own[i]:
            j += 1
        runs.append((i, j, own[i]))
        i = j
    out = []
    for idx, (i, j, pid) in enumerate(runs):
        u = g.tail[rot[i]]  # run starts are owner changes, hence real darts
        nxt = runs[(idx + 1) % len(runs)][0]
        v = g.tail[rot[nxt]] if rot[nxt] >= 0 else g.tail[rot[i]]
        out.append((u, v, rot[i:j], pid))
    return out


def _step_tail(g: PlanarGraph, walk: list[int], i: int) -> int:
    k = len(walk)
    dd = walk[i]
    if dd >= 0:
        return g.tail[dd]
    j = (i - 1) % k
    while walk[j] < 0:
        j = (j - 1) % k
    return g.head(walk[j])


def _make_child(rg: RecursionGraph, redges: list[CEdge], fragments: list[Fragment], faces: set[int]) -> Region:
    # merge duplicate division edges per (piece, endpoints) keeping the
    # lightest, and drop exact repeats of any compressed edge
    by_key: dict = {}
    by_walk: set = set()
    merged: list[CEdge] = []
    for ce in redges:
        wkey = (ce.kind, ce.u, ce.v, ce.walk, tuple(map(id, ce.children)))
        if wkey in by_walk:
            continue
        by_walk.add(wkey)
        if ce.kind == DIV:
            key = (ce.piece, min(ce.u, ce.v), max(ce.u, ce.v))
            old = by_key.get(key)
            if old is not None:
                if ce.weight < old.weight:
                    merged[merged.index(old)] = ce
                    by_key[key] = ce
                continue
            by_key[key] = ce
        merged.append(ce)
    region = Region(rg.fresh_rid(), [], merged, fragments, frozenset(faces))
    reduce_region(rg, region)
    verts = set()
    for ce in region.redges:
        verts.add(ce.u)
        verts.add(ce.v)
    region.verts = sorted(verts)
    return region


def reduce_region(rg: RecursionGraph, region: Region) -> Region:
    """Bypass vertices that touch no internal face and have exactly two
    incident division/super edges, chaining them into super edges."""
    g = rg.host
    internal_verts: set[int] = set()
    for hf in region.faces:
        for dd in g.face_walk(hf):
            internal_verts.add(g.tail[dd])
    alive: set[int] = set(map(id, region.redges))
    incident: dict[int, list[CEdge]] = {}
    for ce in region.redges:
        incident.setdefault(ce.u, []).append(ce)
        incident.setdefault(ce.v, []).append(ce)
    changed = True
    while changed:
        changed = False
        for v in sorted(incident):
            ces = [ce for ce in incident[v] if id(ce) in alive]
            if v in internal_verts or len(ces) != 2:
                continue
            e1, e2 = ces
            if e1 is e2:
                continue
            u = e1.u if e1.v == v else e1.v
            w = e2.v if e2.u == v else e2.u
            o1 = e1 if e1.v == v else CEdge(e1.v, e1.u, e1.weight, e1.kind, e1.piece, _rev_walk(e1.walk), e1.children)
            o2 = e2 if e2.u == v else CEdge(e2.v, e2.u, e2.weight, e2.kind, e2.piece, _rev_walk(e2.walk), e2.children)
            sup = CEdge(u, w, e1.weight + e2.weight, SUPER, -1, (), (o1, o2))
            alive.discard(id(e1))
            alive.discard(id(e2))
            alive.add(id(sup))
            incident.setdefault(u, []).append(sup)
            incident.setdefault(w, []).append(sup)
            region.redges.append(sup)
            rg.stats.bump("super_edges")
            changed = True
            break
    region.redges = [ce for ce in region.redges if id(ce) in alive]
    return region


def _rev_walk(walk: tuple[int, ...]) -> tuple[int, ...]:
    return tuple((dd ^ 1 if dd >= 0 else -1) for dd in reversed(walk))


# ---------------------------------------------------------------------------
# Terminal step


def terminal_solve(rg: RecursionGraph, region: Region) -> tuple[Weight, Optional[list[int]]]:
    """Materialize the region's content and finish it with the batched
    solver; the answer comes back as host darts."""
    from .core import contract_degree2

    g = rg.host
    edge_ids = sorted(_region_edge_ids(region))
    if not edge_ids:
        return INF, None
    exp, es, _vs = _subgraph(g, edge_ids)
    rg.stats.bump("terminal_regions")
    best: Weight = INF
    best_darts: Optional[list[int]] = None
    compressed_n = 0
    for host_group in _component_edge_groups(exp, es):
        sub, sub_es, _ = _subgraph(g, host_group)
        # G_R is materialized with maximal degree-2 runs contracted; that
        # compressed size is the monitored quantity
        compressed_n += contract_degree2(sub, validate=False).graph.n
        tstats = RunStats()
        length, node, darts = _solve_engine(sub, True, tstats)
        rg.stats.bump("terminal_batched_nodes", tstats.counters.get("nodes", 0))
        if length < best:
            local = _expand_to_root(node, darts)
            best = length
            best_darts = [2 * sub_es[dd >> 1] + (dd & 1) for dd in local]
    rg.stats.terminal_sizes.append(max(compressed_n, 1))
    return best, best_darts


def _component_edge_groups(sub: PlanarGraph, es: list[int]) -> list[list[int]]:
    comp = [-1] * sub.n
    ncomp = 0
    for s in range(sub.n):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        stack = [s]
        while stack:
            v = stack.pop()
            for d in sub.rotation(v):
                u = sub.tail[d ^ 1]
                if comp[u] < 0:
                    comp[u] = ncomp
                    stack.append(u)
        ncomp += 1
    groups: list[list[int]] = [[] for _ in range(ncomp)]
    for i in range(sub.m):
        groups[comp[sub.tail[2 * i]]].append(es[i])
    return [grp for grp in groups if grp]


# ---------------------------------------------------------------------------
# Top-level solver


def default_r(n: int) -> int:
    return max(16, min(math.ceil(math.log2(max(n, 4)) ** 8), max(n, 4)))


def shortest_cycle_ddg(
    g: PlanarGraph, r: Optional[int] = None, stats: Optional[RunStats] = None
) -> tuple[Weight, Optional[Cycle]]:
    """Exact shortest cycle via r-division, dense distance graphs, and the
    compressed divide-and-conquer recursion."""
    stats = stats if stats is not None else RunStats()
    if r is None:
        r = default_r(g.n)
    r = max(16, min(r, max(g.n, 4)))
    stats.counters.setdefault("r", r)
    if g.m == 0:
        return INF, None
    division = r_division(g, r)
    if len(division.pieces) == 1 and not division.pieces[0].boundary:
        # single piece: the whole graph is one terminal region
        stats.terminal_sizes.append(g.n)
        stats.bump("terminal_regions")
        length, node, darts = _solve_engine(g, True, stats)
        if length == INF:
            return INF, None
        return length, _checked_cycle(g, length, _expand_to_root(node, darts))
    ddgs = [build_ddg(g, p) for p in division.pieces]
    stats.bump("ddg_builds", len(ddgs))
    sk = skeleton(division)
    flow = FlowStructure(g)
    stats.bump("fs_builds")
    rg = RecursionGraph(g, division, flow, stats, r)
    redges = [CEdge(se.u, se.v, INF, SKEL, se.piece, tuple(se.walk)) for se in sk.edges]
    fragments = [
        Fragment(rg.fresh_pid(), p.edges, list(p.boundary), ddgs[i])
        for i, p in enumerate(division.pieces)
    ]
    region0 = Region(0, list(sk.vertices), redges, fragments, frozenset(range(g.nfaces)))

    best: Weight = INF
    best_darts: Optional[list[int]] = None

    def offer(length: Weight, darts: Optional[list[int]]) -> None:
        nonlocal best, best_darts
        if length < best:
            best = length
            best_darts = darts

    stack: list[tuple[Region, int]] = [(region0, 0)]
    while stack:
        region, level = stack.pop()
        stats.region_level_verts[level] = stats.region_level_verts.get(level, 0) + len(region.verts)
        try:
            res = divide_region(rg, region)
        except RegionTooSmall:
            val, darts = terminal_solve(rg, region)
            offer(val, darts)
            continue
        if res.query_faces is not None:
            stats.bump("flow_queries")
            ans = rg.flow.query(*res.query_faces)
            if ans.length != INF:
                offer(ans.length, ans.cycle.darts)
        stack.append((res.inner, level + 1))
        stack.append((res.outer, level + 1))

    if best == INF:
        return INF, None
    return best, _checked_cycle(g, best, best_darts)


def _checked_cycle(g: PlanarGraph, length: Weight, darts: list[int]) -> Cycle:
    if not walk_is_closed(g, darts):
        raise InternalInvariantError("ddg winner is not a closed walk")
    if walk_sum(g, darts) != length:
        raise InternalInvariantError("ddg winner re-sums to a different length")
    if not any(g.label[dd >> 1] == LABEL_REAL for dd in darts):
        raise InternalInvariantError("ddg winner has no real edge")
    return Cycle(darts, length, len({g.tail[dd] for dd in darts}) == len(darts))
