"""Balanced fundamental-cycle selection via the dual spanning tree.

Given a spanning tree T of a connected embedded graph, the duals of the
non-tree edges form a spanning tree of the dual. Assigning weights to
faces, the classic walk (descend into the heaviest subtree while it holds
at least half the weight) lands on a vertex whose child edges offer a
balanced split; cutting the chosen dual edge corresponds to the
fundamental cycle of its primal edge.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .core import PlanarGraph
from .errors import InternalInvariantError, NoNonTreeEdge
from .paths import ShortestPathTree


class DualTree:
    """Rooted spanning tree of the dual induced by non-tree primal edges."""

    def __init__(self, g: PlanarGraph, tree: ShortestPathTree, face_weights: Optional[Sequence[int]] = None):
        self.g = g
        nf = g.nfaces
        tree_edges = bytearray(g.m)
        for v in range(g.n):
            d = tree.parent_dart[v]
            if d >= 0:
                tree_edges[d >> 1] = 1
        self.nontree = [e for e in range(g.m) if not tree_edges[e]]
        if not self.nontree:
            raise NoNonTreeEdge("spanning tree uses every edge; no cycle exists")
        if len(self.nontree) != nf - 1:
            raise InternalInvariantError(
                f"{len(self.nontree)} non-tree edges for {nf} faces; graph or tree not spanning"
            )
        adj: list[list[tuple[int, int]]] = [[] for _ in range(nf)]
        for e in self.nontree:
            fa, fb = g.face_of[2 * e], g.face_of[2 * e + 1]
            adj[fa].append((fb, e))
            adj[fb].append((fa, e))
        parent = [-2] * nf
        parent_edge = [-1] * nf
        order = [0]
        parent[0] = -1
        for f in order:
            for f2, e in adj[f]:
                if parent[f2] == -2:
                    parent[f2] = f
                    parent_edge[f2] = e
                    order.append(f2)
        if len(order) != nf:
            raise InternalInvariantError("dual of non-tree edges is not spanning")
        self.parent = parent
        self.parent_edge = parent_edge
        self.order = order
        self.children: list[list[int]] = [[] for _ in range(nf)]
        for f in order[1:]:
            self.children[parent[f]].append(f)
        w = list(face_weights) if face_weights is not None else [1] * nf
        self.weights = w
        sub = list(w)
        for f in reversed(order):
            p = parent[f]
            if p >= 0:
                sub[p] += sub[f]
        self.subtree = sub
        self.total = sub[0]

    def walk_down(self) -> int:
        """Face whose subtree holds at least half the weight while every
        child subtree holds less. Ties go to the smaller face id."""
        half = self.total / 2
        cur = 0
        while True:
            best = -1
            for c in self.children[cur]:
                if best < 0 or self.subtree[c] > self.subtree[best] or (
                    self.subtree[c] == self.subtree[best] and c < best
                ):
                    best = c
            if best < 0 or self.subtree[best] < half:
                return cur
            cur = best

    def split_sides(self, f: int) -> tuple[int, int]:
        s = self.subtree[f]
        return s, self.total - s

    def balanced_edge(self) -> tuple[int, int]:
        """Dividing primal edge and the weight of the enclosed side.

        Walk-down choice first; if it misses floor(W/4) on a side, fall back
        to scanning every dual tree edge for the best min-side.
        """
        w = self.walk_down()
        best_child = -1
        for c in self.children[w]:
            if best_child < 0 or self.subtree[c] > self.subtree[best_child] or (
                self.subtree[c] == self.subtree[best_child]
                and self.parent_edge[c] < self.parent_edge[best_child]
            ):
                best_child = c
        candidates = []
        if best_child >= 0:
            candidates.append(best_child)
        elif w != 0:
            candidates.append(w)  # leaf: cut its parent edge
        if not candidates:
            # single-face graph cannot happen here (nontree nonempty => nf >= 2)
            raise InternalInvariantError("no dual edge to cut")
        f = candidates[0]
        s = self.subtree[f]
        if min(s, self.total - s) < max(1, self.total // 4):
            f = self._global_best()
            s = self.subtree[f]
        return self.parent_edge[f], s

    def _global_best(self) -> int:
        best_f = -1
        best_key = None
        for f in self.order[1:]:
            s = self.subtree[f]
            key = (min(s, self.total - s), -self.parent_edge[f])
            if best_key is None or key > best_key:
                best_key = key
                best_f = f
        return best_f
