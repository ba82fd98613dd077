"""Accuracy metrics and the Monte Carlo benchmark harness."""

import numpy as np
import pytest

from polytree.metrics import (
    directed_accuracy,
    run_benchmark,
    skeleton_accuracy,
)
from polytree.models import TreeKind, TreeModel, ground_truth
from polytree.orientation import DirectedPolytree
from polytree.seeding import SeedPolicy
from polytree.skeleton import SkeletonForest


def _forest(p, edges):
    return SkeletonForest.from_edges(p, edges)


def _tree(p, edges):
    return DirectedPolytree(p=p, edges=tuple(edges), provenance={})


class TestSkeletonAccuracy:
    def test_identical_is_one(self):
        t = _forest(4, [(0, 1), (1, 2), (2, 3)])
        assert skeleton_accuracy(t, t) == 1.0

    def test_disjoint_is_zero(self):
        truth = _forest(4, [(0, 1), (1, 2), (2, 3)])
        est = _forest(4, [(0, 2), (1, 3)])
        assert skeleton_accuracy(est, truth) == 0.0

    def test_half_overlap(self):
        truth = _forest(3, [(0, 1), (1, 2)])
        est = _forest(3, [(0, 1), (0, 2)])
        assert skeleton_accuracy(est, truth) == 0.5

    def test_requires_matching_p(self):
        with pytest.raises(ValueError, match="vertex counts"):
            skeleton_accuracy(_forest(3, [(0, 1)]), _forest(4, [(0, 1), (1, 2), (2, 3)]))

    def test_requires_spanning_truth(self):
        with pytest.raises(ValueError, match="spanning"):
            skeleton_accuracy(_forest(3, [(0, 1)]), _forest(3, [(0, 1)]))


class TestDirectedAccuracy:
    def test_identical_is_one(self):
        t = _tree(3, [(0, 1), (1, 2)])
        assert directed_accuracy(t, t) == 1.0

    def test_flipped_direction_scores_half(self):
        truth = _tree(3, [(0, 1), (1, 2)])
        est = _tree(3, [(0, 1), (2, 1)])
        assert directed_accuracy(est, truth) == 0.5

    def test_disjoint_skeleton_scores_zero(self):
        truth = _tree(3, [(0, 1), (1, 2)])
        est = _tree(3, [(0, 2)])  # skeleton shares no edge with the truth
        assert directed_accuracy(est, truth) == 0.0

    def test_directed_never_exceeds_skeleton(self):
        rng = np.random.default_rng(60)
        for _ in range(30):
            p = int(rng.integers(2, 10))
            parent = [int(rng.integers(0, v)) for v in range(1, p)]
            truth_edges = [(u, v) for v, u in enumerate(parent, start=1)]
            truth = _tree(p, truth_edges)
            parent2 = [int(rng.integers(0, v)) for v in range(1, p)]
            est_edges = [
                (u, v) if rng.integers(2) else (v, u)
                for v, u in enumerate(parent2, start=1)
            ]
            est = _tree(p, est_edges)
            d = directed_accuracy(est, truth)
            s = skeleton_accuracy(est.as_skeleton(), truth.as_skeleton())
            assert d <= s + 1e-12

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(61)
        p = 7
        truth_edges = [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6)]
        est_edges = [(1, 0), (1, 2), (3, 1), (3, 4), (0, 5), (6, 5)]
        base_d = directed_accuracy(_tree(p, est_edges), _tree(p, truth_edges))
        base_s = skeleton_accuracy(
            _tree(p, est_edges).as_skeleton(), _tree(p, truth_edges).as_skeleton()
        )
        for _ in range(10):
            sigma = rng.permutation(p)
            relabeled_truth = [(sigma[a], sigma[b]) for a, b in truth_edges]
            relabeled_est = [(sigma[a], sigma[b]) for a, b in est_edges]
            assert directed_accuracy(
                _tree(p, relabeled_est), _tree(p, relabeled_truth)
            ) == pytest.approx(base_d)
            assert skeleton_accuracy(
                _tree(p, relabeled_est).as_skeleton(),
                _tree(p, relabeled_truth).as_skeleton(),
            ) == pytest.approx(base_s)


class TestRunBenchmark:
    def test_aggregates_are_means(self):
        report = run_benchmark(TreeKind.LINEAR, 5, 100, 4, SeedPolicy(62))
        assert report.skeleton_mean == pytest.approx(
            sum(report.skeleton_scores) / 4
        )
        assert report.directed_mean == pytest.approx(
            sum(report.directed_scores) / 4
        )
        assert 0.0 <= report.skeleton_mean <= 1.0
        assert 0.0 <= report.directed_mean <= 1.0

    def test_standard_error_formula(self):
        report = run_benchmark(TreeKind.LINEAR, 4, 80, 5, SeedPolicy(63))
        scores = np.array(report.skeleton_scores)
        expected = scores.std(ddof=1) / np.sqrt(len(scores)) if len(scores) > 1 else 0.0
        assert report.skeleton_se == pytest.approx(expected)

    def test_single_rep_has_zero_se(self):
        report = run_benchmark(TreeKind.STAR, 4, 60, 1, SeedPolicy(64))
        assert report.skeleton_se == 0.0

    def test_thread_count_does_not_change_results(self):
        a = run_benchmark(TreeKind.STAR, 6, 120, 6, SeedPolicy(65), threads=1)
        b = run_benchmark(TreeKind.STAR, 6, 120, 6, SeedPolicy(65), threads=4)
        assert a.skeleton_scores == b.skeleton_scores
        assert a.directed_scores == b.directed_scores

    def test_rejects_zero_reps(self):
        with pytest.raises(ValueError, match="reps"):
            run_benchmark(TreeKind.LINEAR, 4, 50, 0, SeedPolicy(0))

    def test_high_n_linear_is_exact(self):
        report = run_benchmark(TreeKind.LINEAR, 6, 1200, 3, SeedPolicy(66))
        assert report.skeleton_mean == 1.0
