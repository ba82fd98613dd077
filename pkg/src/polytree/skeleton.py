"""Skeleton recovery: pairwise pruning followed by a maximal spanning forest.

Step 1 keeps the undirected edge {i, j} iff no third vertex k satisfies
``entry(k,i) >= entry(j,i) and entry(k,j) >= entry(i,j)`` (such a k lies
"between" i and j in dependence terms and witnesses that {i, j} is not a
tree edge).  Step 2 takes the spanning forest of the surviving graph that
maximizes total weight ``w_ij = min(entry(i,j), entry(j,i))``, via Kruskal
with a deterministic tie rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import SampleMatrix
from .seeding import SeedPolicy
from .xicor import XiMatrix, xi_matrix

__all__ = [
    "PrunedGraph",
    "SkeletonForest",
    "UnionFind",
    "prune",
    "mwsf",
    "estimate_skeleton",
]


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class PrunedGraph:
    """Undirected graph surviving Step 1, with symmetric min-based weights."""

    p: int
    edges: tuple[tuple[int, int], ...]  # (i, j) with i < j, sorted
    weights: tuple[float, ...]  # aligned with edges

    def weight_of(self, i: int, j: int) -> float:
        key = (i, j) if i < j else (j, i)
        return self.weights[self.edges.index(key)]


def _component_labels(p: int, edges) -> tuple[int, ...]:
    uf = UnionFind(p)
    for i, j in edges:
        uf.union(i, j)
    roots = [uf.find(v) for v in range(p)]
    # label each component by its smallest vertex
    smallest: dict[int, int] = {}
    for v in range(p):
        r = roots[v]
        if r not in smallest or v < smallest[r]:
            smallest[r] = v
    return tuple(smallest[r] for r in roots)


@dataclass(frozen=True)
class SkeletonForest:
    """An undirected forest over p vertices (the skeleton estimate)."""

    p: int
    edges: tuple[tuple[int, int], ...]  # (i, j) with i < j, sorted
    components: tuple[int, ...]  # per-vertex label, smallest vertex in component

    def __post_init__(self) -> None:
        edges = tuple(sorted((min(i, j), max(i, j)) for i, j in self.edges))
        if len(edges) != len(set(edges)):
            raise ValueError("duplicate edges in forest")
        if len(edges) > max(self.p - 1, 0):
            raise ValueError(f"{len(edges)} edges cannot form a forest on {self.p} vertices")
        uf = UnionFind(self.p)
        for i, j in edges:
            if not (0 <= i < self.p and 0 <= j < self.p) or i == j:
                raise ValueError(f"edge {(i, j)} out of range for p={self.p}")
            if not uf.union(i, j):
                raise ValueError(f"edge {(i, j)} closes a cycle")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "components", _component_labels(self.p, edges))

    @classmethod
    def from_edges(cls, p: int, edges) -> "SkeletonForest":
        return cls(p=p, edges=tuple(edges), components=())

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.p)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(nb) for nb in adj]


def prune(xi: XiMatrix) -> PrunedGraph:
    """Step 1: drop every pair {i, j} witnessed by some third vertex k.

    The comparison uses >= exactly as stated, so equality counts as a
    witness.  NaN diagonal entries never witness (NaN >= x is False),
    which conveniently excludes k == i; k == j is masked explicitly.
    Runs in O(p^3) with vectorized inner loops.
    """
    a = xi.entries
    p = xi.p
    if p < 2:
        return PrunedGraph(p=p, edges=(), weights=())

    removed = np.zeros((p, p), dtype=bool)
    for j in range(p):
        # witness[k, i] for the pair (i, j): a[k,i] >= a[j,i] and a[k,j] >= a[i,j]
        ge_target = a >= a[j, :][None, :]
        col = a[:, j]
        ge_cross = col[:, None] >= col[None, :]
        witness = ge_target & ge_cross
        np.fill_diagonal(witness, False)  # k == i
        witness[j, :] = False  # k == j
        removed[:, j] = witness.any(axis=0)

    edges = []
    weights = []
    for i in range(p):
        for j in range(i + 1, p):
            if not removed[i, j] and not removed[j, i]:
                edges.append((i, j))
                weights.append(float(min(a[i, j], a[j, i])))
    return PrunedGraph(p=p, edges=tuple(edges), weights=tuple(weights))


def mwsf(g: PrunedGraph) -> SkeletonForest:
    """Step 2: maximal weighted spanning forest of the pruned graph.

    Kruskal over edges ordered by (descending weight, ascending (i, j));
    an edge joins the forest iff it connects two components, regardless of
    the sign of its weight, so the output spans exactly like the input.
    """
    order = sorted(
        range(len(g.edges)), key=lambda k: (-g.weights[k], g.edges[k])
    )
    uf = UnionFind(g.p)
    kept = []
    for k in order:
        i, j = g.edges[k]
        if uf.union(i, j):
            kept.append((i, j))
    return SkeletonForest.from_edges(g.p, kept)


def estimate_skeleton(
    data: SampleMatrix, policy: SeedPolicy
) -> tuple[XiMatrix, PrunedGraph, SkeletonForest]:
    """Full skeleton pipeline; returns all intermediates for inspection."""
    xi = xi_matrix(data, policy)
    g = prune(xi)
    forest = mwsf(g)
    return xi, g, forest
