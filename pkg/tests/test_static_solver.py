"""Static solvers: CFN, batched, divide balance, and min-cut duality."""

from __future__ import annotations

import pytest

from plancut.core import INF, LABEL_REAL, generate, normalize, walk_is_closed
from plancut.oracles import oracle_min_cut, oracle_shortest_cycle
from plancut.paths import walk_sum
from plancut.static_solver import (
    RunStats,
    divide_balanced,
    min_cut,
    shortest_cycle_batched,
    shortest_cycle_cfn,
)

from conftest import corpus


def check_cycle(g, val, cyc):
    if val == INF:
        assert cyc is None
        return
    assert walk_is_closed(g, cyc.darts)
    assert walk_sum(g, cyc.darts) == val == cyc.total_length
    assert any(g.label[d >> 1] == LABEL_REAL for d in cyc.darts)


class TestCfn:
    def test_tri(self, tri):
        g = normalize(tri).graph
        val, cyc = shortest_cycle_cfn(g)
        assert val == 6
        check_cycle(g, val, cyc)

    def test_k4(self, k4):
        g = normalize(k4).graph
        val, cyc = shortest_cycle_cfn(g)
        assert val == 3
        check_cycle(g, val, cyc)

    def test_grid3(self, grid3):
        g = normalize(grid3).graph
        val, cyc = shortest_cycle_cfn(g)
        assert val == 4
        check_cycle(g, val, cyc)

    def test_forest(self):
        from plancut.core import build_graph

        g = build_graph([[1], [0, 2], [1]], [2, 3])
        val, cyc = shortest_cycle_cfn(g)
        assert val == INF and cyc is None

    def test_matches_oracle_small_corpus(self):
        for _n, _seed, g in corpus(25, hi=120):
            want, _ = oracle_shortest_cycle(g)
            norm = normalize(g).graph
            got, cyc = shortest_cycle_cfn(norm)
            assert got == want
            check_cycle(norm, got, cyc)

    def test_grids(self):
        for rows, cols, seed in ((4, 7, 1), (8, 8, 2), (5, 12, 3)):
            g = generate("grid", rows=rows, cols=cols, weights="uniform:1:9", seed=seed)
            want, _ = oracle_shortest_cycle(g)
            norm = normalize(g).graph
            got, cyc = shortest_cycle_cfn(norm)
            assert got == want
            check_cycle(norm, got, cyc)


class TestBatched:
    def test_tri(self, tri):
        g = normalize(tri).graph
        val, cyc = shortest_cycle_batched(g)
        assert val == 6
        check_cycle(g, val, cyc)

    def test_matches_cfn_corpus(self):
        for _n, _seed, g in corpus(25, hi=120, seed0=2000):
            norm = normalize(g).graph
            stats_b = RunStats()
            got_b, cyc_b = shortest_cycle_batched(norm, stats=stats_b)
            got_c, _ = shortest_cycle_cfn(norm)
            assert got_b == got_c
            check_cycle(norm, got_b, cyc_b)

    def test_build_count_bound(self):
        g = generate("random_maximal", n=150, weights="uniform:1:50", seed=77)
        norm = normalize(g).graph
        stats = RunStats()
        shortest_cycle_batched(norm, stats=stats)
        k = stats.counters["fs_refresh_levels"]
        builds = stats.counters.get("fs_builds", 0)
        nodes = stats.counters.get("nodes", 1)
        # every branch rebuilds at most once per k levels; nodes bound branches
        assert builds <= nodes / k + nodes / 2 + 1


class TestDivideBalance:
    def test_balance_recorded(self):
        for _n, _seed, g in corpus(10, hi=100, seed0=3000):
            norm = normalize(g).graph
            stats = RunStats()
            shortest_cycle_cfn(norm, stats=stats)
            for mn, total in stats.balances:
                assert mn >= total // 4, (mn, total)

    def test_no_large_nonshrink(self):
        # small fallbacks are expected near the recursion bottom; large
        # subproblems must keep shrinking
        for _n, _seed, g in corpus(10, hi=100, seed0=4000):
            stats = RunStats()
            shortest_cycle_cfn(normalize(g).graph, stats=stats)
            assert stats.counters.get("nonshrink_recurse", 0) == 0

    def test_k4_direct(self, k4):
        from plancut.core import triangulate
        from plancut.paths import sssp

        tri, _ = triangulate(k4)
        t = sssp(tri, 0)
        bc, cyc, (a, b) = divide_balanced(tri, t)
        assert sorted((a, b)) == [1, 3]
        assert min(a, b) >= tri.nfaces // 4


class TestMinCut:
    def test_tri(self, tri):
        val, cut = min_cut(tri)
        assert val == 3
        assert len(cut) == 2  # the two light edges isolate a vertex

    def test_grid3(self, grid3):
        val, cut = min_cut(grid3)
        assert val == 2 and len(cut) == 2

    def test_k4(self, k4):
        val, _ = min_cut(k4)
        assert val == 3

    def test_matches_stoer_wagner(self):
        for _n, _seed, g in corpus(10, hi=80, seed0=5000):
            val, cut = min_cut(g)
            assert val == oracle_min_cut(g)

    def test_cut_disconnects(self):
        for _n, _seed, g in corpus(5, hi=60, seed0=6000):
            val, cut = min_cut(g)
            cut_set = set(cut)
            assert sum(g.weight[e] for e in cut) == val
            # removing the cut edges disconnects g
            seen = {0}
            stack = [0]
            while stack:
                v = stack.pop()
                for d in g.rotation(v):
                    if (d >> 1) in cut_set:
                        continue
                    u = g.head(d)
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            assert len(seen) < g.n
