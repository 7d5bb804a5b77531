"""Max flow, separating cycles, and the reusable flow structure."""

from __future__ import annotations

import random

import pytest

from plancut.core import INF, build_graph, dual, generate, normalize
from plancut.errors import SameFace, SameVertex
from plancut.flowcut import (
    FlowStructure,
    build_flow_structure,
    fs_query,
    max_flow_value,
    min_separating_cycle,
)
from plancut.oracles import oracle_separating_cycle

from conftest import corpus


def _outer(g):
    return max(range(g.nfaces), key=lambda f: (g.face_size[f], -f))


class TestMaxFlow:
    def test_dual_tri(self, tri):
        d = dual(tri).graph
        assert max_flow_value(d, 0, 1) == 6

    def test_single_edge(self):
        g = build_graph([[1], [0]], [5])
        assert max_flow_value(g, 0, 1) == 5

    def test_dual_grid3_corner(self, grid3):
        d = dual(grid3).graph
        outer = _outer(grid3)
        # corner inner face: exactly two of its edges border the outer face
        corner = next(
            f
            for f in range(grid3.nfaces)
            if f != outer
            and sum(1 for dd in grid3.face_walk(f) if grid3.face_of[dd ^ 1] == outer) == 2
        )
        assert max_flow_value(d, corner, outer) == 4

    def test_same_vertex(self, tri):
        with pytest.raises(SameVertex):
            max_flow_value(dual(tri).graph, 0, 0)

    def test_inf_edges_uncuttable(self, grid3):
        g = normalize(grid3).graph
        d = dual(g).graph
        # cutting around a face bounded by INF edges costs INF unless a
        # finite cut exists; a global corner cut of weight 2 always does
        assert max_flow_value(d, 0, _outer(g)) != INF


class TestMinSeparatingCycle:
    def test_tri(self, tri):
        ans = min_separating_cycle(tri, 0, 1)
        assert ans.length == 6
        assert ans.cycle.edge_set() == {0, 1, 2}

    def test_grid3_corner(self, grid3):
        outer = _outer(grid3)
        corner = next(
            f
            for f in range(grid3.nfaces)
            if f != outer
            and sum(1 for dd in grid3.face_walk(f) if grid3.face_of[dd ^ 1] == outer) == 2
        )
        ans = min_separating_cycle(grid3, corner, outer)
        assert ans.length == 4
        assert len(ans.cycle.darts) == 4

    def test_same_face(self, tri):
        with pytest.raises(SameFace):
            min_separating_cycle(tri, 0, 0)

    def test_enclosure_and_resum(self):
        rng = random.Random(42)
        for _n, _seed, g in corpus(10, hi=80):
            f1 = rng.randrange(g.nfaces)
            f2 = rng.randrange(g.nfaces)
            if f1 == f2:
                continue
            ans = min_separating_cycle(g, f1, f2)
            assert sum(g.weight[d >> 1] for d in ans.cycle.darts) == ans.length
            assert (f1 in ans.enclosed_faces) != (f2 in ans.enclosed_faces)

    def test_against_cut_open_oracle(self):
        rng = random.Random(7)
        for _n, _seed, g in corpus(12, hi=80):
            for _ in range(3):
                f1 = rng.randrange(g.nfaces)
                f2 = rng.randrange(g.nfaces)
                if f1 == f2:
                    continue
                ans = min_separating_cycle(g, f1, f2)
                assert ans.length == oracle_separating_cycle(g, f1, f2)

    def test_duality_with_max_flow(self):
        rng = random.Random(9)
        for _n, _seed, g in corpus(8, hi=60):
            d = dual(g).graph
            f1 = rng.randrange(g.nfaces)
            f2 = (f1 + 1 + rng.randrange(g.nfaces - 1)) % g.nfaces
            assert min_separating_cycle(g, f1, f2).length == max_flow_value(d, f1, f2)


class TestFlowStructure:
    def test_tri_scope(self, tri):
        fs = build_flow_structure(tri)
        assert fs_query(fs, 0, 1).length == 6

    def test_repeat_queries_identical(self, grid3):
        fs = build_flow_structure(grid3)
        a1 = fs_query(fs, 0, 4)
        a2 = fs_query(fs, 0, 4)
        assert a1.length == a2.length and a1.cycle.darts == a2.cycle.darts

    def test_many_queries_match_fresh(self, grid3):
        fs = build_flow_structure(grid3)
        pairs = [(f1, f2) for f1 in range(grid3.nfaces) for f2 in range(grid3.nfaces) if f1 < f2][:10]
        for f1, f2 in pairs:
            assert fs_query(fs, f1, f2).length == min_separating_cycle(grid3, f1, f2).length

    def test_superset_scope_only_shrinks(self):
        for _n, _seed, g in corpus(6, hi=50):
            walk = g.face_walk(0)
            if len({g.tail[d] for d in walk}) != len(walk):
                continue
            from plancut.core import split_by_cycle

            sp = split_by_cycle(g, walk)
            sub = sp.exterior if sp.exterior.m > sp.interior.m else sp.interior
            emap = (
                sp.exterior_edge_map if sp.exterior.m > sp.interior.m else sp.interior_edge_map
            )
            if sub.nfaces < 3 or sub.m < 4:
                continue
            big = FlowStructure(g)
            small = FlowStructure(sub)
            # map two faces of the subgraph into g by a shared dart
            got = 0
            for fa in range(sub.nfaces):
                for fb in range(fa + 1, sub.nfaces):
                    da = sub.face_dart[fa]
                    db = sub.face_dart[fb]
                    ga = g.face_of[2 * emap[da >> 1] + (da & 1)]
                    gb = g.face_of[2 * emap[db >> 1] + (db & 1)]
                    if ga == gb:
                        continue
                    big_ans = big.query(ga, gb)
                    small_ans = small.query(fa, fb)
                    assert big_ans.length <= small_ans.length
                    got += 1
                    if got >= 5:
                        break
                if got >= 5:
                    break
