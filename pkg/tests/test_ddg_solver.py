"""The compressed-recursion solver: noncrossing trees, region dividing,
super-edge reduction, terminal expansion, and end-to-end equality."""

from __future__ import annotations

import pytest

from plancut.core import INF, generate, normalize
from plancut.ddg_solver import (
    DIV,
    SUPER,
    CEdge,
    Fragment,
    Region,
    RecursionGraph,
    build_noncrossing_tree,
    divide_region,
    reduce_region,
    shortest_cycle_ddg,
    terminal_solve,
)
from plancut.errors import RegionTooSmall
from plancut.flowcut import FlowStructure
from plancut.oracles import oracle_shortest_cycle
from plancut.partition import build_ddg, multipart_dijkstra, r_division
from plancut.static_solver import RunStats

from conftest import corpus


def _setup(g0, r):
    g = normalize(g0).graph
    division = r_division(g, r)
    ddgs = [build_ddg(g, p) for p in division.pieces]
    return g, division, ddgs


class TestNoncrossingTree:
    def test_single_piece_tree(self, grid3):
        g = normalize(grid3).graph
        d = r_division(g, max(32, g.n))
        t = build_noncrossing_tree(d, [], 0)
        assert t.dist == {0: 0}

    def test_distances_match_multipart(self):
        g, division, ddgs = _setup(generate("grid", rows=8, cols=8, weights="uniform:1:9", seed=4), 24)
        boundary = sorted(division.all_boundary())
        root = boundary[0]
        t = build_noncrossing_tree(division, ddgs, root)
        res = multipart_dijkstra(ddgs, [], {root: 0})
        for v in boundary:
            assert t.dist.get(v, INF) == res.dist.get(v, INF)

    def test_edges_are_in_piece_paths(self):
        g, division, ddgs = _setup(generate("random_maximal", n=60, weights="uniform:1:30", seed=8), 16)
        boundary = sorted(division.all_boundary())
        t = build_noncrossing_tree(division, ddgs, boundary[0])
        piece_edges = {p.index: p.edges for p in division.pieces}
        for v, te in t.edges.items():
            assert sum(g.weight[dd >> 1] for dd in te.walk) == te.weight
            assert all((dd >> 1) in piece_edges[te.piece] for dd in te.walk)
            assert g.tail[te.walk[0]] == te.parent
            assert g.head(te.walk[-1]) == te.child

    def test_paths_do_not_cross(self):
        # all tree paths come from a single shortest-path tree, so within a
        # piece any two either share a subpath or are edge-disjoint; a
        # crossing would need two paths entering and leaving a shared vertex
        # in interleaved rotation order
        g, division, ddgs = _setup(generate("random_maximal", n=80, weights="uniform:1:50", seed=9), 16)
        boundary = sorted(division.all_boundary())
        t = build_noncrossing_tree(division, ddgs, boundary[0])
        by_piece: dict = {}
        for v, te in t.edges.items():
            by_piece.setdefault(te.piece, []).append(te.walk)
        for piece, walks in by_piece.items():
            # shared darts must appear with identical orientation (shared
            # subpaths), never reversed (head-on crossings)
            seen: dict = {}
            for w in walks:
                for dd in w:
                    seen.setdefault(dd >> 1, set()).add(dd & 1)
            for e, orients in seen.items():
                assert len(orients) == 1


def _region_zero(g, division, ddgs, stats=None):
    from plancut.ddg_solver import SKEL
    from plancut.partition import skeleton

    stats = stats or RunStats()
    sk = skeleton(division)
    rg = RecursionGraph(g, division, FlowStructure(g), stats, 16)
    redges = [CEdge(se.u, se.v, INF, SKEL, se.piece, tuple(se.walk)) for se in sk.edges]
    frags = [Fragment(rg.fresh_pid(), p.edges, list(p.boundary), ddgs[i]) for i, p in enumerate(division.pieces)]
    return rg, Region(0, sorted(division.all_boundary()), redges, frags, frozenset(range(g.nfaces)))


class TestDivideRegion:
    def test_balance_and_conservation(self):
        g, division, ddgs = _setup(generate("grid", rows=8, cols=8), 16)
        rg, region = _region_zero(g, division, ddgs)
        res = divide_region(rg, region)
        w = len(region.faces)
        assert len(res.inner.faces) + len(res.outer.faces) == w
        mn, total = rg.stats.region_balances[-1]
        assert mn >= total // 4

    def test_division_edges_expand(self):
        g, division, ddgs = _setup(generate("grid", rows=8, cols=8, weights="uniform:1:9", seed=2), 16)
        rg, region = _region_zero(g, division, ddgs)
        res = divide_region(rg, region)
        for child in (res.inner, res.outer):
            for ce in child.redges:
                if ce.kind == DIV and ce.weight != INF:
                    darts = ce.expand()
                    assert sum(g.weight[dd >> 1] for dd in darts) == ce.weight
                    assert g.tail[darts[0]] == ce.u and g.head(darts[-1]) == ce.v

    def test_children_vertices_never_grow(self):
        g, division, ddgs = _setup(generate("random_maximal", n=80, weights="uniform:1:20", seed=3), 16)
        rg, region = _region_zero(g, division, ddgs)
        res = divide_region(rg, region)
        parent = set(region.verts)
        assert set(res.inner.verts) <= parent
        assert set(res.outer.verts) <= parent

    def test_too_small_signals_terminal(self, grid3):
        g, division, ddgs = _setup(grid3, 16)
        rg, region = _region_zero(g, division, ddgs)
        rg.r = 10 ** 9
        with pytest.raises(RegionTooSmall):
            divide_region(rg, region)


class TestReduceRegion:
    def test_chain_collapses_to_single_super_edge(self, grid3):
        g = normalize(grid3).graph
        stats = RunStats()
        rg = RecursionGraph(g, None, None, stats, 16)
        chain = [
            CEdge(0, 1, 2, DIV, 0, ()),
            CEdge(1, 2, 3, DIV, 0, ()),
            CEdge(2, 3, 4, DIV, 0, ()),
        ]
        # anchor the endpoints with extra edges so only the two middle
        # vertices are bypassable
        anchors = [
            CEdge(0, 10, 1, DIV, 1, ()),
            CEdge(0, 11, 1, DIV, 1, ()),
            CEdge(3, 12, 1, DIV, 1, ()),
            CEdge(3, 13, 1, DIV, 1, ()),
        ]
        region = Region(1, [0, 1, 2, 3, 10, 11, 12, 13], chain + anchors, [], frozenset())
        reduce_region(rg, region)
        supers = [ce for ce in region.redges if ce.kind == SUPER]
        assert len(supers) == 1
        assert {supers[0].u, supers[0].v} == {0, 3}
        assert supers[0].weight == 9
        assert len(region.redges) == 5

    def test_internal_face_vertex_never_bypassed(self, grid3):
        g = normalize(grid3).graph
        stats = RunStats()
        rg = RecursionGraph(g, None, None, stats, 16)
        v_internal = g.tail[g.face_dart[0]]
        chain = [CEdge(0 if v_internal != 0 else 5, v_internal, 2, DIV, 0, ()),
                 CEdge(v_internal, 7 if v_internal != 7 else 3, 3, DIV, 0, ())]
        region = Region(2, sorted({ce.u for ce in chain} | {ce.v for ce in chain}), list(chain), [], frozenset([0]))
        reduce_region(rg, region)
        assert all(ce.kind == DIV for ce in region.redges)

    def test_reduction_does_not_change_answers(self):
        for _n, _seed, g0 in corpus(4, hi=70, seed0=8800):
            g = normalize(g0).graph
            want, _ = oracle_shortest_cycle(g)
            got, _ = shortest_cycle_ddg(g, r=16)
            assert got == want


class TestTerminal:
    def test_tri_region(self, tri):
        g = normalize(tri).graph
        division = r_division(g, max(16, g.n))
        ddgs = [build_ddg(g, p) for p in division.pieces]
        rg, region = _region_zero(g, division, ddgs)
        val, darts = terminal_solve(rg, region)
        assert val == 6

    def test_stats_recorded(self):
        g = normalize(generate("grid", rows=12, cols=12)).graph
        stats = RunStats()
        val, _ = shortest_cycle_ddg(g, r=24, stats=stats)
        assert val == 4
        assert stats.terminal_sizes
        assert sum(stats.terminal_sizes) > 0
        assert max(stats.terminal_sizes) <= 8.0 * 24 * 24  # c6 * r^2


class TestEndToEnd:
    def test_trivial_graphs(self, tri, grid3):
        for g0, want in ((tri, 6), (grid3, 4)):
            g = normalize(g0).graph
            got, cyc = shortest_cycle_ddg(g)
            assert got == want
            assert cyc is not None and cyc.total_length == want

    def test_matches_oracle_with_forced_r(self):
        for _n, _seed, g0 in corpus(12, hi=150, seed0=8900):
            g = normalize(g0).graph
            want, _ = oracle_shortest_cycle(g)
            for r in (16, 48):
                got, cyc = shortest_cycle_ddg(g, r=r)
                assert got == want, (_seed, r)

    def test_matches_batched_on_grid(self):
        from plancut.static_solver import shortest_cycle_batched

        g = normalize(generate("grid", rows=16, cols=16, weights="uniform:1:9", seed=6)).graph
        want, _ = shortest_cycle_batched(g)
        got, _ = shortest_cycle_ddg(g, r=32)
        assert got == want

    def test_forest(self):
        from plancut.core import build_graph

        g = build_graph([[1], [0, 2], [1]], [2, 3])
        got, cyc = shortest_cycle_ddg(g)
        assert got == INF and cyc is None

    def test_region_level_statistics(self):
        import math

        g = normalize(generate("grid", rows=16, cols=16)).graph
        stats = RunStats()
        shortest_cycle_ddg(g, r=32, stats=stats)
        worst = max(stats.region_level_verts.values())
        assert worst <= 24.0 * g.n / math.sqrt(32)  # c7
