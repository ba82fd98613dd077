"""Edge orientation for an estimated skeleton.

Directions are assigned by comparing the conditional dependence statistic
``tau(col_k, col_j | col_i)`` against the pairwise coefficient between
columns j and k, for j, k neighbors of i:

  Step 1, per vertex i in ascending order:
    Case 1 (no incoming edge known): scan neighbor pairs {j, k}, j < k,
      in lexicographic order, testing tau_kji >= xi_jk once per pair; the
      first passing pair marks i as a collider, directing both (j, i) and
      (k, i) towards i.
    Case 2 (some incoming edge known): fix the smallest such neighbor j;
      every other neighbor k points into i iff tau_kji >= xi_jk, else away.
  Step 2: repeat Step 1 until a full pass assigns nothing new.
  Step 3: any vertex with a known incoming edge sends every still-undecided
      incident edge outward.  Step 4: repeat Step 3 to fixpoint.
  Step 5: each remaining undecided subtree is oriented away from its
      smallest-index vertex.

The first assignment to an edge wins; a later contradicting indication
only increments ``conflict_count`` (and is logged).  All statistics are
memoized, so repeated passes never recompute them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .cond_dep import tau
from .data import SampleMatrix
from .seeding import SeedPolicy
from .skeleton import SkeletonForest, UnionFind
from .xicor import XiMatrix, xi_coefficient

__all__ = [
    "Provenance",
    "DirectedPolytree",
    "TraceEvent",
    "orient",
    "orient_fixpoint_trace",
    "orient_from_stats",
]


class Provenance(Enum):
    """How an edge received its direction."""

    COLLIDER = "collider"
    PROPAGATED = "propagated"
    ARBITRARY_ROOT = "arbitrary_root"


@dataclass(frozen=True)
class TraceEvent:
    """One logged decision: kind is 'directed' or 'conflict'."""

    step: int
    pass_index: int
    vertex: int
    edge: tuple[int, int]  # (source, target) as declared
    kind: str
    reason: str


@dataclass(frozen=True)
class DirectedPolytree:
    """An oriented forest: every skeleton edge carries exactly one direction."""

    p: int
    edges: tuple[tuple[int, int], ...]  # (source, target)
    provenance: dict[tuple[int, int], Provenance]
    conflict_count: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        undirected = [(min(s, t), max(s, t)) for s, t in self.edges]
        if len(set(undirected)) != len(undirected):
            raise ValueError("an undirected edge appears with two directions")

    def as_skeleton(self) -> SkeletonForest:
        return SkeletonForest.from_edges(
            self.p, [(min(s, t), max(s, t)) for s, t in self.edges]
        )

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)


class _OrientationState:
    """Monotone per-edge direction store: undecided -> directed, never back."""

    def __init__(self, skeleton: SkeletonForest) -> None:
        self.skeleton = skeleton
        self.adj = skeleton.adjacency()
        self.direction: dict[tuple[int, int], tuple[int, int] | None] = {
            e: None for e in skeleton.edges
        }
        self.provenance: dict[tuple[int, int], Provenance] = {}
        self.incoming_count = [0] * skeleton.p
        self.conflict_count = 0
        self.events: list[TraceEvent] = []

    @staticmethod
    def _key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def directed_as(self, src: int, dst: int) -> bool:
        return self.direction[self._key(src, dst)] == (src, dst)

    def undecided(self, a: int, b: int) -> bool:
        return self.direction[self._key(a, b)] is None

    def incoming_neighbors(self, i: int) -> list[int]:
        return [j for j in self.adj[i] if self.directed_as(j, i)]

    def declare(
        self,
        src: int,
        dst: int,
        prov: Provenance,
        step: int,
        pass_index: int,
        vertex: int,
        reason: str,
    ) -> bool:
        """Direct src -> dst unless already decided; returns True if new."""
        key = self._key(src, dst)
        current = self.direction[key]
        if current is None:
            self.direction[key] = (src, dst)
            self.provenance[(src, dst)] = prov
            self.incoming_count[dst] += 1
            self.events.append(
                TraceEvent(step, pass_index, vertex, (src, dst), "directed", reason)
            )
            return True
        if current == (src, dst):
            return False
        self.conflict_count += 1
        self.events.append(
            TraceEvent(step, pass_index, vertex, (src, dst), "conflict", reason)
        )
        return False

    def finish(self) -> DirectedPolytree:
        edges = tuple(self.direction[e] for e in self.skeleton.edges)
        assert all(e is not None for e in edges)
        return DirectedPolytree(
            p=self.skeleton.p,
            edges=edges,
            provenance=dict(self.provenance),
            conflict_count=self.conflict_count,
        )


def _case1_pairs(nbrs: list[int]):
    # Each unordered pair is tested once, as tau(k, j, i) vs xi(j, k) with
    # j < k.  Testing both orders doubles the false-collider rate on
    # collider-free trees and measurably drags directed accuracy below the
    # benchmark targets; the single-test reading reproduces them.
    for a in range(len(nbrs)):
        for b in range(a + 1, len(nbrs)):
            yield nbrs[a], nbrs[b]


def _collider_pass(
    state: _OrientationState,
    tau_fn: Callable[[int, int, int], float],
    xi_fn: Callable[[int, int], float],
    pass_index: int,
) -> int:
    new = 0
    for i in range(state.skeleton.p):
        nbrs = state.adj[i]
        incoming = state.incoming_neighbors(i)
        if not incoming:
            # Case 1: look for a pair of neighbors jointly pointing at i
            for j, k in _case1_pairs(nbrs):
                if tau_fn(k, j, i) >= xi_fn(j, k):
                    reason = f"pair ({j},{k}) at {i}: tau >= xi"
                    new += state.declare(
                        j, i, Provenance.COLLIDER, 1, pass_index, i, reason
                    )
                    new += state.declare(
                        k, i, Provenance.COLLIDER, 1, pass_index, i, reason
                    )
                    break
        else:
            # Case 2: classify the remaining neighbors against a known parent
            j = min(incoming)
            for k in nbrs:
                if k == j:
                    continue
                if tau_fn(k, j, i) >= xi_fn(j, k):
                    new += state.declare(
                        k, i, Provenance.PROPAGATED, 1, pass_index, i,
                        f"against parent {j} of {i}: tau >= xi",
                    )
                else:
                    new += state.declare(
                        i, k, Provenance.PROPAGATED, 1, pass_index, i,
                        f"against parent {j} of {i}: tau < xi",
                    )
    return new


def _outgoing_pass(state: _OrientationState, pass_index: int) -> int:
    new = 0
    for i in range(state.skeleton.p):
        if state.incoming_count[i] == 0:
            continue
        for k in state.adj[i]:
            if state.undecided(i, k):
                new += state.declare(
                    i, k, Provenance.PROPAGATED, 3, pass_index, i,
                    f"{i} has an incoming edge",
                )
    return new


def _root_remaining(state: _OrientationState) -> None:
    undecided = [e for e in state.skeleton.edges if state.direction[e] is None]
    if not undecided:
        return
    uf = UnionFind(state.skeleton.p)
    for i, j in undecided:
        uf.union(i, j)
    members: dict[int, list[int]] = {}
    seen = set()
    for i, j in undecided:
        for v in (i, j):
            if v not in seen:
                seen.add(v)
                members.setdefault(uf.find(v), []).append(v)
    adj: dict[int, list[int]] = {v: [] for v in seen}
    for i, j in undecided:
        adj[i].append(j)
        adj[j].append(i)
    for comp in sorted(members.values(), key=min):
        root = min(comp)
        stack = [root]
        visited = {root}
        while stack:
            v = stack.pop()
            for w in sorted(adj[v]):
                if w in visited:
                    continue
                visited.add(w)
                state.declare(
                    v, w, Provenance.ARBITRARY_ROOT, 5, 1, root,
                    f"outgoing tree rooted at {root}",
                )
                stack.append(w)


def orient_from_stats(
    skeleton: SkeletonForest,
    tau_fn: Callable[[int, int, int], float],
    xi_fn: Callable[[int, int], float],
    initial_directions: tuple[tuple[int, int], ...] = (),
    collect_trace: bool = False,
):
    """Run the orientation procedure against arbitrary statistic lookups.

    ``tau_fn(k, j, i)`` and ``xi_fn(j, k)`` supply the two statistics; this
    is the seam used to drive the procedure with exact population-style
    values in tests.  ``initial_directions`` optionally pre-seeds known
    (source, target) edge directions, as if decided in an earlier step.
    """
    state = _OrientationState(skeleton)
    for (src, dst) in initial_directions:
        state.declare(src, dst, Provenance.PROPAGATED, 0, 0, src, "preset")

    pass_index = 1
    while True:
        if _collider_pass(state, tau_fn, xi_fn, pass_index) == 0:
            break
        pass_index += 1
    pass_index = 1
    while True:
        if _outgoing_pass(state, pass_index) == 0:
            break
        pass_index += 1
    _root_remaining(state)
    result = state.finish()
    if collect_trace:
        return result, tuple(state.events)
    return result


def _data_backed_stats(
    skeleton: SkeletonForest,
    data: SampleMatrix,
    policy: SeedPolicy,
    xi: XiMatrix | None,
) -> tuple[Callable[[int, int, int], float], Callable[[int, int], float]]:
    if skeleton.p != data.p:
        raise ValueError(
            f"skeleton has {skeleton.p} vertices but data has {data.p} columns"
        )
    data.require_min_rows(2)
    values = data.values

    tau_cache: dict[tuple[int, int, int], float] = {}
    xi_cache: dict[tuple[int, int], float] = {}

    def tau_fn(k: int, j: int, i: int) -> float:
        key = (k, j, i)
        if key not in tau_cache:
            result = tau(
                values[:, k], values[:, j], values[:, i],
                rng=policy.stream("tau", k, j, i),
            )
            tau_cache[key] = result.value
        return tau_cache[key]

    if xi is not None:
        entries = xi.entries

        def xi_fn(j: int, k: int) -> float:
            return float(entries[j, k])

    else:

        def xi_fn(j: int, k: int) -> float:
            key = (j, k)
            if key not in xi_cache:
                xi_cache[key] = xi_coefficient(
                    values[:, j], values[:, k], rng=policy.stream("xi", j, k)
                )
            return xi_cache[key]

    return tau_fn, xi_fn


def orient(
    skeleton: SkeletonForest,
    data: SampleMatrix,
    policy: SeedPolicy,
    xi: XiMatrix | None = None,
) -> DirectedPolytree:
    """Assign a direction to every skeleton edge from the data.

    Pass the pairwise matrix from the skeleton step as ``xi`` to reuse its
    entries; otherwise the needed pairs are recomputed from the identical
    per-pair streams, giving the same values.
    """
    tau_fn, xi_fn = _data_backed_stats(skeleton, data, policy, xi)
    return orient_from_stats(skeleton, tau_fn, xi_fn)


def orient_fixpoint_trace(
    skeleton: SkeletonForest,
    data: SampleMatrix,
    policy: SeedPolicy,
    xi: XiMatrix | None = None,
) -> tuple[DirectedPolytree, tuple[TraceEvent, ...]]:
    """Same execution as ``orient`` but also returns the decision log."""
    tau_fn, xi_fn = _data_backed_stats(skeleton, data, policy, xi)
    return orient_from_stats(skeleton, tau_fn, xi_fn, collect_trace=True)
