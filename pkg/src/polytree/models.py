"""Synthetic tree models: generators and their ground-truth polytrees.

Four families, all with unit-variance Gaussian columns (vertices 0-based,
heap numbering for the binary variants: children of v are 2v+1, 2v+2):

  linear          X_0 = e_0,  X_i = (X_{i-1} + e_i) / sqrt(2)
  binary          X_v = (X_parent + e_v) / sqrt(2), edges parent -> child
  star            X_0 = e_0,  X_i = (X_0 + e_i) / sqrt(2) for i >= 1
  reverse_binary  leaves are independent N(0,1); internal
                  X_v = (X_{2v+1} + X_{2v+2} + e_v) / sqrt(3),
                  edges child -> parent

with e ~ N(0,1) i.i.d.  Binary kinds require p = 2^k - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import sqrt

import numpy as np

from .data import SampleMatrix
from .orientation import DirectedPolytree
from .seeding import SeedPolicy
from .skeleton import SkeletonForest

__all__ = ["TreeKind", "TreeModel", "GroundTruth", "ground_truth", "sample"]


class TreeKind(str, Enum):
    LINEAR = "linear"
    BINARY = "binary"
    STAR = "star"
    REVERSE_BINARY = "reverse_binary"


_BINARY_KINDS = (TreeKind.BINARY, TreeKind.REVERSE_BINARY)


@dataclass(frozen=True)
class TreeModel:
    kind: TreeKind
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TreeKind(self.kind))
        if self.p < 1:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.kind in _BINARY_KINDS and (self.p + 1) & self.p != 0:
            raise ValueError(
                f"{self.kind.value} trees require p = 2^k - 1, got p={self.p}"
            )


@dataclass(frozen=True)
class GroundTruth:
    skeleton: SkeletonForest
    directed: DirectedPolytree


def _directed_edges(model: TreeModel) -> list[tuple[int, int]]:
    p = model.p
    if model.kind is TreeKind.LINEAR:
        return [(i - 1, i) for i in range(1, p)]
    if model.kind is TreeKind.STAR:
        return [(0, i) for i in range(1, p)]
    if model.kind is TreeKind.BINARY:
        return [((v - 1) // 2, v) for v in range(1, p)]
    # reverse binary: same skeleton, arrows child -> parent
    return [(v, (v - 1) // 2) for v in range(1, p)]


def ground_truth(model: TreeModel) -> GroundTruth:
    edges = _directed_edges(model)
    directed = DirectedPolytree(p=model.p, edges=tuple(edges), provenance={})
    return GroundTruth(skeleton=directed.as_skeleton(), directed=directed)


def sample(model: TreeModel, n: int, policy: SeedPolicy) -> SampleMatrix:
    """n i.i.d. rows from the model, driven by stream ('sample',)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    p = model.p
    rng = policy.stream("sample")
    eps = rng.standard_normal((n, p))
    x = np.empty((n, p))
    if model.kind is TreeKind.LINEAR:
        x[:, 0] = eps[:, 0]
        for i in range(1, p):
            x[:, i] = (x[:, i - 1] + eps[:, i]) / sqrt(2.0)
    elif model.kind is TreeKind.STAR:
        x[:, 0] = eps[:, 0]
        for i in range(1, p):
            x[:, i] = (x[:, 0] + eps[:, i]) / sqrt(2.0)
    elif model.kind is TreeKind.BINARY:
        x[:, 0] = eps[:, 0]
        for v in range(1, p):
            x[:, v] = (x[:, (v - 1) // 2] + eps[:, v]) / sqrt(2.0)
    else:  # reverse binary, computed leaves-upward
        for v in range(p - 1, -1, -1):
            left, right = 2 * v + 1, 2 * v + 2
            if left >= p:  # leaf
                x[:, v] = eps[:, v]
            else:
                x[:, v] = (x[:, left] + x[:, right] + eps[:, v]) / sqrt(3.0)
    names = tuple(f"X{i + 1}" for i in range(p))
    return SampleMatrix(values=x, names=names)
