"""Shared fixtures: the TRI / K4 / GRID3 / PATH-P graphs and corpus helpers."""

from __future__ import annotations

import pytest

from plancut.core import PlanarGraph, build_graph, generate


@pytest.fixture
def tri() -> PlanarGraph:
    # 3-cycle a-b-c with w(ab)=1, w(bc)=2, w(ca)=3; edge ids 0, 1, 2
    return build_graph(
        [[(1, 0), (2, 2)], [(2, 1), (0, 0)], [(0, 2), (1, 1)]],
        [1, 2, 3],
    )


@pytest.fixture
def k4() -> PlanarGraph:
    return build_graph([[1, 2, 3], [2, 0, 3], [0, 1, 3], [0, 2, 1]], [1] * 6)


@pytest.fixture
def grid3() -> PlanarGraph:
    return generate("grid", rows=3, cols=3)


@pytest.fixture
def path_p() -> PlanarGraph:
    # piece with edges a-b (2), b-c (3); boundary {a, c}
    return build_graph([[1], [0, 2], [1]], [2, 3])


def corpus(count: int, lo: int = 4, hi: int = 200, weights: str = "uniform:1:100", seed0: int = 1000):
    """Deterministic random_maximal corpus used across the test modules."""
    out = []
    for i in range(count):
        seed = seed0 + i
        n = lo + (seed * 2654435761) % (hi - lo + 1)
        out.append((n, seed, generate("random_maximal", n=n, weights=weights, seed=seed)))
    return out
