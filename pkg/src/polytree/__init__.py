"""Causal polytree estimation from small i.i.d. samples.

The pipeline has two halves: skeleton recovery (pairwise rank-based
dependence coefficients, a pruning rule, and a maximal weighted spanning
forest) and edge orientation (collider detection via a nearest-neighbor
conditional dependence statistic, followed by fixpoint propagation and
arbitrary rooting of whatever remains).  Everything is deterministic given
a 64-bit master seed; see ``seeding.SeedPolicy``.
"""

from .cond_dep import NeighborAssignment, TauResult, tau, tau_oracle
from .data import SampleMatrix
from .metrics import (
    AccuracyReport,
    directed_accuracy,
    run_benchmark,
    skeleton_accuracy,
)
from .models import GroundTruth, TreeKind, TreeModel, ground_truth, sample
from .orientation import (
    DirectedPolytree,
    Provenance,
    TraceEvent,
    orient,
    orient_fixpoint_trace,
    orient_from_stats,
)
from .seeding import DEFAULT_SEED, SeedPolicy
from .skeleton import PrunedGraph, SkeletonForest, estimate_skeleton, mwsf, prune
from .xicor import (
    RankProfile,
    XiMatrix,
    rank_profile,
    sort_permutation,
    xi_coefficient,
    xi_coefficient_oracle,
    xi_matrix,
)

__all__ = [
    "AccuracyReport",
    "DEFAULT_SEED",
    "DirectedPolytree",
    "GroundTruth",
    "NeighborAssignment",
    "Provenance",
    "PrunedGraph",
    "RankProfile",
    "SampleMatrix",
    "SeedPolicy",
    "SkeletonForest",
    "TauResult",
    "TraceEvent",
    "TreeKind",
    "TreeModel",
    "XiMatrix",
    "directed_accuracy",
    "estimate_skeleton",
    "ground_truth",
    "mwsf",
    "orient",
    "orient_fixpoint_trace",
    "orient_from_stats",
    "prune",
    "rank_profile",
    "run_benchmark",
    "sample",
    "skeleton_accuracy",
    "sort_permutation",
    "tau",
    "tau_oracle",
    "xi_coefficient",
    "xi_coefficient_oracle",
    "xi_matrix",
]

__version__ = "0.1.0"
