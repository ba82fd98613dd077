"""Accuracy scoring against ground truth and the Monte Carlo harness.

Both scores divide by p - 1 (every spanning tree on p vertices has p - 1
edges).  Directed scoring is strict: an estimated edge counts only if both
its skeleton membership and its direction match the generative tree, with
no credit for equivalent re-rootings.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt

from .models import TreeKind, TreeModel, ground_truth, sample
from .orientation import DirectedPolytree, orient
from .seeding import SeedPolicy
from .skeleton import SkeletonForest, estimate_skeleton

__all__ = ["AccuracyReport", "skeleton_accuracy", "directed_accuracy", "run_benchmark"]


def skeleton_accuracy(est: SkeletonForest, truth: SkeletonForest) -> float:
    """Fraction of the truth's p - 1 undirected edges present in est."""
    if est.p != truth.p:
        raise ValueError(f"vertex counts differ: {est.p} vs {truth.p}")
    if len(truth.edges) != truth.p - 1:
        raise ValueError("ground truth must be a spanning tree (p - 1 edges)")
    hits = len(set(est.edges) & set(truth.edges))
    return hits / (truth.p - 1)


def directed_accuracy(est: DirectedPolytree, truth: DirectedPolytree) -> float:
    """Fraction of the truth's directed edges matched exactly by est."""
    if est.p != truth.p:
        raise ValueError(f"vertex counts differ: {est.p} vs {truth.p}")
    if len(truth.edges) != truth.p - 1:
        raise ValueError("ground truth must be a spanning tree (p - 1 edges)")
    hits = len(est.edge_set() & truth.edge_set())
    return hits / (truth.p - 1)


@dataclass(frozen=True)
class AccuracyReport:
    kind: TreeKind
    p: int
    n: int
    reps: int
    skeleton_scores: tuple[float, ...]
    directed_scores: tuple[float, ...]

    @property
    def skeleton_mean(self) -> float:
        return sum(self.skeleton_scores) / self.reps

    @property
    def directed_mean(self) -> float:
        return sum(self.directed_scores) / self.reps

    @property
    def skeleton_se(self) -> float:
        return _std_error(self.skeleton_scores)

    @property
    def directed_se(self) -> float:
        return _std_error(self.directed_scores)


def _std_error(values: tuple[float, ...]) -> float:
    if len(values) < 2:
        return 0.0
    m = sum(values) / len(values)
    var = sum((v - m) ** 2 for v in values) / (len(values) - 1)
    return sqrt(var) / sqrt(len(values))


def run_benchmark(
    kind: TreeKind,
    p: int,
    n: int,
    reps: int,
    policy: SeedPolicy,
    threads: int = 1,
) -> AccuracyReport:
    """Monte Carlo accuracy of the full pipeline on one (kind, p, n) cell.

    Replication r draws everything from the sub-policy ('rep', r), so the
    report is identical for any thread count and any execution order.
    """
    if reps < 1:
        raise ValueError(f"need reps >= 1, got {reps}")
    model = TreeModel(kind=TreeKind(kind), p=p)
    truth = ground_truth(model)

    def one(r: int) -> tuple[float, float]:
        rep_policy = policy.child("rep", r)
        data = sample(model, n, rep_policy)
        xi, _, forest = estimate_skeleton(data, rep_policy)
        directed = orient(forest, data, rep_policy, xi=xi)
        return (
            skeleton_accuracy(forest, truth.skeleton),
            directed_accuracy(directed, truth.directed),
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(one, range(reps)))
    else:
        scores = [one(r) for r in range(reps)]
    return AccuracyReport(
        kind=model.kind,
        p=p,
        n=n,
        reps=reps,
        skeleton_scores=tuple(s for s, _ in scores),
        directed_scores=tuple(d for _, d in scores),
    )
