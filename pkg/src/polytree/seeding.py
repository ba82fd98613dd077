"""Deterministic seed derivation for every random choice in the pipeline.

All randomness in this package (tie-breaking permutations, nearest-neighbor
tie draws, synthetic samples, benchmark replications) is drawn from streams
derived from a single 64-bit master seed.  The derivation is a pure function
of ``(master_seed, lineage, role, index...)``, so results never depend on
evaluation order, chunking, or thread count: two tasks never share a stream,
and re-running any task re-creates its stream from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Master seed used when the caller does not supply one.
DEFAULT_SEED = 42

_MAX_SEED = 2**64 - 1


def _role_code(role: str) -> int:
    """Stable integer encoding of a short role tag ('xi', 'tau', 'rep', ...)."""
    return int.from_bytes(role.encode("utf-8"), "big")


@dataclass(frozen=True)
class SeedPolicy:
    """Derives independent, reproducible random streams from one master seed.

    A stream is identified by a role tag plus an integer index tuple, e.g.
    ``policy.stream("xi", i, j)`` for the pairwise coefficient between
    columns i and j.  ``child`` extends the lineage, which is how benchmark
    replications get their own disjoint seed universes:
    ``policy.child("rep", r).stream("sample")``.

    The entropy fed to ``numpy.random.SeedSequence`` is the tuple
    ``(master_seed, *lineage, role_code(role), *index)``, where
    ``role_code`` is the big-endian integer value of the UTF-8 role tag.
    """

    master_seed: int = DEFAULT_SEED
    lineage: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) <= _MAX_SEED:
            raise ValueError(
                f"master_seed must be an unsigned 64-bit integer, got {self.master_seed!r}"
            )

    def _entropy(self, role: str, index: tuple[int, ...]) -> tuple[int, ...]:
        if any(i < 0 for i in index):
            raise ValueError(f"stream indices must be non-negative, got {index!r}")
        return (int(self.master_seed), *self.lineage, _role_code(role), *index)

    def stream(self, role: str, *index: int) -> np.random.Generator:
        """Return a fresh Generator for the task identified by (role, *index)."""
        seq = np.random.SeedSequence(entropy=self._entropy(role, index))
        return np.random.default_rng(seq)

    def child(self, role: str, *index: int) -> "SeedPolicy":
        """Return a sub-policy whose streams are disjoint from this policy's."""
        return SeedPolicy(self.master_seed, self.lineage + (_role_code(role), *index))


def resolve_rng(rng: np.random.Generator | None) -> np.random.Generator:
    """Default-seeded Generator when the caller passed None.

    Used by the standalone statistic functions so that ad-hoc calls are still
    reproducible; pipeline code always derives explicit streams instead.
    """
    if rng is not None:
        return rng
    return SeedPolicy(DEFAULT_SEED).stream("adhoc")
