"""Shortest-path trees and fundamental cycles."""

from __future__ import annotations

import pytest

from plancut.core import INF, generate
from plancut.errors import RootNotInScope
from plancut.paths import bellman_ford, fundamental_cycle, sssp, tree_meet, walk_sum

from conftest import corpus


class TestSssp:
    def test_grid3_corner_to_corner(self, grid3):
        t = sssp(grid3, 0)
        assert t.dist[8] == 4

    def test_tri(self, tri):
        t = sssp(tri, 0)
        assert t.dist[1] == 1
        assert t.dist[2] == 3  # min(3, 1+2)

    def test_matches_bellman_ford(self):
        g = generate("random_maximal", n=30, weights="uniform:1:9", seed=7)
        t = sssp(g, 0)
        assert t.dist == bellman_ford(g, 0)

    def test_matches_bellman_ford_corpus(self):
        for _n, _seed, g in corpus(6, hi=60):
            t = sssp(g, 0)
            assert t.dist == bellman_ford(g, 0)

    def test_tree_invariants(self):
        for _n, _seed, g in corpus(4, hi=50):
            t = sssp(g, 0)
            assert t.dist[0] == 0
            for v in range(g.n):
                d = t.parent_dart[v]
                if d >= 0:
                    assert g.head(d) == v
                    assert t.dist[v] == t.dist[g.tail[d]] + g.weight[d >> 1]
            for e in range(g.m):
                u, v = g.tail[2 * e], g.tail[2 * e + 1]
                assert t.dist[v] <= t.dist[u] + g.weight[e]
                assert t.dist[u] <= t.dist[v] + g.weight[e]

    def test_deterministic_tie_breaking(self):
        # two equal-length routes: the parent must be the smaller edge id
        g = generate("grid", rows=2, cols=2)
        t = sssp(g, 0)
        # vertex 3 reachable via (edge to 1 then up) or (edge to 2 then right)
        assert t.dist[3] == 2
        t2 = sssp(g, 0)
        assert t.parent_dart == t2.parent_dart

    def test_scope_restriction(self, grid3):
        full = set(range(grid3.m))
        t = sssp(grid3, 0, scope=full - {0})
        assert t.dist[1] >= 2

    def test_root_not_in_scope(self, grid3):
        with pytest.raises(RootNotInScope):
            sssp(grid3, 0, scope={11})


class TestFundamentalCycle:
    def test_tri(self, tri):
        t = sssp(tri, 0)
        nontree = [e for e in range(3) if all((t.parent_dart[v] >> 1 if t.parent_dart[v] >= 0 else -1) != e for v in range(3))]
        cyc = fundamental_cycle(t, nontree[0])
        assert cyc.total_length == 6
        assert len(cyc.darts) == 3

    def test_k4(self, k4):
        t = sssp(k4, 0)
        # edge between b=1 and c=2
        e_bc = next(e for e in range(6) if {k4.tail[2 * e], k4.tail[2 * e + 1]} == {1, 2})
        cyc = fundamental_cycle(t, e_bc)
        assert cyc.total_length == 3
        assert {k4.tail[d] for d in cyc.darts} == {0, 1, 2}

    def test_length_formula(self):
        for _n, _seed, g in corpus(6, hi=60):
            t = sssp(g, 0)
            tree_edges = {t.parent_dart[v] >> 1 for v in range(g.n) if t.parent_dart[v] >= 0}
            for e in range(g.m):
                if e in tree_edges:
                    continue
                cyc = fundamental_cycle(t, e)
                b, c = g.tail[2 * e], g.tail[2 * e + 1]
                meet = tree_meet(t, b, c)
                assert cyc.total_length == t.dist[b] + t.dist[c] + g.weight[e] - 2 * t.dist[meet]
                assert cyc.total_length == walk_sum(g, cyc.darts)
                # closed walk
                for i, d in enumerate(cyc.darts):
                    assert g.head(d) == g.tail[cyc.darts[(i + 1) % len(cyc.darts)]]

    def test_both_endpoints_on_root_path(self):
        # triangle with a heavy chord: both chord endpoints lie on one root
        # path, the meet is the nearer endpoint, and there is no tail
        from plancut.core import build_graph

        g = build_graph(
            [[(1, 0), (2, 2)], [(2, 1), (0, 0)], [(0, 2), (1, 1)]],
            [1, 1, 5],
        )
        t = sssp(g, 0)
        assert t.dist[2] == 2  # via the two cheap edges
        cyc = fundamental_cycle(t, 2)
        assert cyc.total_length == 7
        assert len(cyc.darts) == 3 and not cyc.tail_darts
