"""Dynamic structure: updates, cycle-through-edge, and query exactness."""

from __future__ import annotations

import heapq
import random

import pytest

from plancut.core import INF, generate, normalize
from plancut.dynamic_solver import (
    DynamicStructure,
    dyn_cycle_through_edge,
    dyn_delete,
    dyn_insert,
    dyn_new,
    dyn_shortest_cycle,
    normalize_for_dynamic,
)
from plancut.errors import EmbeddingViolation, NoSuchEdge


def exact_shortest_cycle(dyn: DynamicStructure):
    """Test-local expected value: pruned per-edge removal on the current
    graph (independent of the solver code paths)."""
    cur = dyn.current()
    best = INF
    for e in range(cur.m):
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
        du = INF
        while heap:
            dv, x = heapq.heappop(heap)
            if x in done:
                continue
            if dv > lim:
                break
            if x == v:
                du = dv
                break
            done.add(x)
            for dd in cur.rotation(x):
                if (dd >> 1) == e or cur.weight[dd >> 1] == INF:
                    continue
                y = cur.tail[dd ^ 1]
                nd = dv + cur.weight[dd >> 1]
                if y not in done and nd <= lim and nd < dist.get(y, INF):
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        if du != INF:
            best = min(best, du + w)
    return best


def exact_cycle_through(dyn: DynamicStructure, x: int, y: int):
    """Delete-then-Dijkstra reference for the cycle through one edge."""
    cur = dyn.current()
    e = min(
        dd >> 1 for dd in cur.rotation(x) if cur.tail[dd ^ 1] == y
    )
    w = cur.weight[e]
    dist = {x: 0}
    done = set()
    heap = [(0, x)]
    while heap:
        dv, a = heapq.heappop(heap)
        if a in done:
            continue
        done.add(a)
        if a == y:
            return dv + w
        for dd in cur.rotation(a):
            if (dd >> 1) == e or cur.weight[dd >> 1] == INF:
                continue
            b = cur.tail[dd ^ 1]
            nd = dv + cur.weight[dd >> 1]
            if b not in done and nd < dist.get(b, INF):
                dist[b] = nd
                heapq.heappush(heap, (nd, b))
    return INF


def random_op(dyn: DynamicStructure, rng: random.Random, wmax: int = 40):
    """One random embedding-preserving update; returns a description."""
    cur = dyn.current()
    real = [e for e in range(len(dyn.alive)) if dyn.alive[e] and dyn.weight[e] != INF]
    if rng.random() < 0.5 and len(real) > cur.n:
        e = real[rng.randrange(len(real))]
        x, y = dyn.tail[2 * e], dyn.tail[2 * e + 1]
        dyn.delete_edge(x, y)
        return ("delete", x, y)
    for _ in range(10):
        f = rng.randrange(cur.nfaces)
        walk = cur.face_walk(f)
        if len(walk) < 2:
            continue
        d1, d2 = rng.sample(walk, 2)
        x, y = cur.tail[d1], cur.tail[d2]
        if x == y:
            continue
        sx = 2 * dyn._cur_emap[d1 >> 1] + (d1 & 1)
        sy = 2 * dyn._cur_emap[d2 >> 1] + (d2 & 1)
        w = rng.randint(1, wmax)
        dyn.insert_edge(x, y, w, dyn.rp[sx], dyn.rp[sy])
        return ("insert", x, y, w)
    return ("noop",)


class TestBasics:
    def test_tri_lifecycle(self, tri):
        dyn = dyn_new(tri)
        assert dyn_shortest_cycle(dyn) == 6
        dyn_delete(dyn, 1, 2)  # edge bc
        assert dyn_shortest_cycle(dyn) == INF
        # reinsert weight 2 in the merged face: corners after the darts at b and c
        cur = dyn.current()
        f = 0
        walk = cur.face_walk(f)
        db = next(d for d in walk if cur.tail[d] == 1)
        dc = next(d for d in walk if cur.tail[d] == 2)
        sb = 2 * dyn._cur_emap[db >> 1] + (db & 1)
        sc = 2 * dyn._cur_emap[dc >> 1] + (dc & 1)
        dyn_insert(dyn, 1, 2, 2, dyn.rp[sb], dyn.rp[sc])
        assert dyn_shortest_cycle(dyn) == 6

    def test_grid3_insert_diagonal(self, grid3):
        g, _vo = normalize_for_dynamic(grid3)
        dyn = dyn_new(g)
        assert dyn_shortest_cycle(dyn) == 4
        cur = dyn.current()
        # two consecutive unit steps of a quad: the weight-1 chord closes a
        # triangle of total length 3
        pick = None
        for f in range(cur.nfaces):
            walk = cur.face_walk(f)
            k = len(walk)
            if k < 4:
                continue
            for i in range(k):
                d0, d1, d2 = walk[i], walk[(i + 1) % k], walk[(i + 2) % k]
                if (
                    cur.weight[d0 >> 1] == 1
                    and cur.weight[d1 >> 1] == 1
                    and cur.tail[d0] != cur.tail[d2]
                ):
                    pick = (d0, d2)
                    break
            if pick:
                break
        d0, d2 = pick
        s0 = 2 * dyn._cur_emap[d0 >> 1] + (d0 & 1)
        s2 = 2 * dyn._cur_emap[d2 >> 1] + (d2 & 1)
        dyn_insert(dyn, cur.tail[d0], cur.tail[d2], 1, dyn.rp[s0], dyn.rp[s2])
        assert dyn_shortest_cycle(dyn) == 3

    def test_forest_cache_inf(self):
        from plancut.core import build_graph

        g = build_graph([[1], [0, 2], [1]], [2, 3])
        dyn = dyn_new(g)
        assert dyn_shortest_cycle(dyn) == INF

    def test_delete_missing(self, tri):
        dyn = dyn_new(tri)
        with pytest.raises(NoSuchEdge):
            dyn_delete(dyn, 0, 0)

    def test_insert_across_faces_rejected(self, grid3):
        g, _vo = normalize_for_dynamic(grid3)
        dyn = dyn_new(g)
        cur = dyn.current()
        inner = sorted(range(cur.nfaces), key=lambda f: cur.face_size[f])
        w1 = cur.face_walk(inner[0])
        w2 = cur.face_walk(inner[1])
        shared = {d >> 1 for d in w1} & {d >> 1 for d in w2}
        d1 = next(d for d in w1 if (d >> 1) not in shared)
        d2 = next(d for d in w2 if (d >> 1) not in shared and cur.tail[d] != cur.tail[d1])
        s1 = 2 * dyn._cur_emap[d1 >> 1] + (d1 & 1)
        s2 = 2 * dyn._cur_emap[d2 >> 1] + (d2 & 1)
        with pytest.raises(EmbeddingViolation):
            dyn_insert(dyn, cur.tail[d1], cur.tail[d2], 1, dyn.rp[s1], dyn.rp[s2])


class TestCycleThroughEdge:
    def test_tri(self, tri):
        dyn = dyn_new(tri)
        assert dyn_cycle_through_edge(dyn, 0, 1) == 6

    def test_grid3_inner_edge(self, grid3):
        g, vo = normalize_for_dynamic(grid3)
        dyn = dyn_new(g)
        cur = dyn.current()
        # an edge of an inner quad not on the outer face
        outer = max(range(cur.nfaces), key=lambda f: cur.face_size[f])
        e = next(
            e
            for e in range(cur.m)
            if cur.weight[e] == 1 and outer not in (cur.face_of[2 * e], cur.face_of[2 * e + 1])
        )
        assert dyn_cycle_through_edge(dyn, cur.tail[2 * e], cur.tail[2 * e + 1]) == 4

    def test_matches_reference_on_random(self):
        g, _ = normalize_for_dynamic(generate("random_maximal", n=40, weights="uniform:1:20", seed=3))
        dyn = dyn_new(g)
        cur = dyn.current()
        rng = random.Random(1)
        for _ in range(15):
            e = rng.randrange(cur.m)
            x, y = cur.tail[2 * e], cur.tail[2 * e + 1]
            assert dyn_cycle_through_edge(dyn, x, y) == exact_cycle_through(dyn, x, y)

    def test_leaves_graph_unchanged(self, tri):
        dyn = dyn_new(tri)
        before = (list(dyn.tail), list(dyn.rn), list(dyn.rp), bytes(dyn.alive))
        dyn_cycle_through_edge(dyn, 0, 1)
        after = (list(dyn.tail), list(dyn.rn), list(dyn.rp), bytes(dyn.alive))
        assert before == after


class TestScriptedReplay:
    def test_oracle_replay_small(self):
        g, _ = normalize_for_dynamic(generate("random_maximal", n=50, weights="uniform:1:30", seed=9))
        dyn = dyn_new(g)
        rng = random.Random(17)
        for op in range(40):
            random_op(dyn, rng, wmax=30)
            assert dyn_shortest_cycle(dyn) == exact_shortest_cycle(dyn), f"op {op}"

    def test_insert_delete_restores_answers(self):
        g, _ = normalize_for_dynamic(generate("random_maximal", n=40, weights="uniform:1:20", seed=21))
        dyn = dyn_new(g)
        rng = random.Random(5)
        baseline = dyn_shortest_cycle(dyn)
        probes = []
        cur = dyn.current()
        for _ in range(10):
            e = rng.randrange(cur.m)
            probes.append((cur.tail[2 * e], cur.tail[2 * e + 1]))
        base_edge = [dyn_cycle_through_edge(dyn, x, y) for x, y in probes]
        # insert then delete the same edge (endpoints not already adjacent,
        # so the delete removes exactly the inserted edge)
        done = False
        for f in range(cur.nfaces):
            walk = cur.face_walk(f)
            for i in range(len(walk)):
                d1, d2 = walk[i], walk[(i + 2) % len(walk)]
                x, y = cur.tail[d1], cur.tail[d2]
                if x == y or any(cur.tail[dd ^ 1] == y for dd in cur.rotation(x)):
                    continue
                s1 = 2 * dyn._cur_emap[d1 >> 1] + (d1 & 1)
                s2 = 2 * dyn._cur_emap[d2 >> 1] + (d2 & 1)
                dyn_insert(dyn, x, y, 7, dyn.rp[s1], dyn.rp[s2])
                dyn_delete(dyn, x, y)
                done = True
                break
            if done:
                break
        assert done
        assert dyn_shortest_cycle(dyn) == baseline
        assert [dyn_cycle_through_edge(dyn, x, y) for x, y in probes] == base_edge

    def test_monotone_under_cycle_deletion(self):
        g, _ = normalize_for_dynamic(generate("random_maximal", n=30, weights="uniform:1:9", seed=2))
        dyn = dyn_new(g)
        prev = dyn_shortest_cycle(dyn)
        for _ in range(12):
            if prev == INF:
                break
            # delete one lightest real edge on some shortest cycle: removing
            # any edge cannot decrease the shortest cycle length
            cur = dyn.current()
            want = exact_shortest_cycle(dyn)
            assert prev == want
            e = min(
                (e for e in range(cur.m) if cur.weight[e] != INF),
                key=lambda e: cur.weight[e],
            )
            dyn_delete(dyn, cur.tail[2 * e], cur.tail[2 * e + 1])
            nxt = dyn_shortest_cycle(dyn)
            assert nxt == exact_shortest_cycle(dyn)
            assert nxt >= prev
            prev = nxt
