"""Nearest-neighbor conditional dependence statistic tau(y, z | x).

For each observation i let N(i) be the index of the nearest neighbor of
x_i (j != i), M(i) the index of the nearest neighbor of (x_i, z_i) in the
plane under Euclidean distance (j != i), and R_i the number of j with
y_j <= y_i.  The statistic is

          sum_i (min{R_i, R_M(i)} - min{R_i, R_N(i)}) / n^2
    tau = --------------------------------------------------
          sum_i (R_i - min{R_i, R_N(i)}) / n^2

interpreted as 0 when the denominator is 0.  It estimates how much y
depends on z beyond what x explains: 0 under conditional independence.

Conventions (shared by the fast path and the literal oracle): neighbors
exclude i itself; distance ties are broken uniformly at random, one draw
per index, consuming first n uniforms for N then n uniforms for M.  The
pick is ``ties[floor(u_i * len(ties))]`` with the tie set ordered by
(y-value, index); since a picked neighbor enters the statistic only
through its y-rank, this makes the value exactly equivariant under joint
relabeling of the observations (with the draws carried along).

The default neighbor search is an exact all-pairs scan (chunked); points
with exact duplicates short-circuit to their duplicate group, which keeps
heavily tied ordinal data out of the quadratic path.  ``neighbors="tree"``
uses a k-d tree to find candidates, then re-ranks them with the same exact
arithmetic, so it returns identical indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .seeding import resolve_rng

__all__ = ["TauResult", "NeighborAssignment", "tau", "tau_oracle"]

# all-pairs scan below this size, k-d tree above (identical results)
_AUTO_TREE_THRESHOLD = 2048
_SCAN_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class TauResult:
    """Value plus the two (1/n^2)-scaled sums it is the ratio of."""

    value: float
    numerator: float
    denominator: float


@dataclass(frozen=True)
class NeighborAssignment:
    """Resolved neighbor indices and y-ranks for one evaluation.

    ``nearest_x[i]`` is N(i), ``nearest_xz[i]`` is M(i), ``ranks[i]`` is R_i.
    """

    nearest_x: np.ndarray
    nearest_xz: np.ndarray
    ranks: np.ndarray


def _validate_triple(y, z, x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    for name, arr in (("y", y), ("z", z), ("x", x)):
        if arr.ndim != 1:
            raise ValueError(f"{name} must be a 1-D sequence")
    if not (y.shape[0] == z.shape[0] == x.shape[0]):
        raise ValueError(
            f"length mismatch: len(y)={y.shape[0]}, len(z)={z.shape[0]}, len(x)={x.shape[0]}"
        )
    if y.shape[0] < 2:
        raise ValueError(f"need at least 2 observations, got {y.shape[0]}")
    for name, arr in (("y", y), ("z", z), ("x", x)):
        if not np.isfinite(arr).all():
            raise ValueError(f"{name} contains non-finite values (NaN or inf)")
    return y, z, x


def _pick(ties: np.ndarray, order_key: np.ndarray, u: float) -> int:
    """Uniform pick from a tie set ordered by (key value, index)."""
    ties = np.asarray(ties)
    ordered = ties[np.lexsort((ties, order_key[ties]))]
    return int(ordered[int(u * len(ordered))])


def _pairwise_dist(block: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Distances from each row of `block` to every row of `coords`.

    1-D uses |dx|; 2-D uses squared Euclidean dx*dx + dz*dz (same tie sets,
    and the exact expression the oracle uses).
    """
    if coords.shape[1] == 1:
        return np.abs(block[:, 0][:, None] - coords[:, 0][None, :])
    dx = block[:, 0][:, None] - coords[:, 0][None, :]
    dz = block[:, 1][:, None] - coords[:, 1][None, :]
    return dx * dx + dz * dz


def _point_dist(coords: np.ndarray, i: int, idx: np.ndarray) -> np.ndarray:
    if coords.shape[1] == 1:
        return np.abs(coords[idx, 0] - coords[i, 0])
    dx = coords[idx, 0] - coords[i, 0]
    dz = coords[idx, 1] - coords[i, 1]
    return dx * dx + dz * dz


def _duplicate_groups(coords: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Boolean mask of duplicated rows plus the index groups (ascending)."""
    coords = coords + 0.0  # fold -0.0 into +0.0; axis-wise unique is byte-based
    if coords.shape[1] == 1:
        _, inverse, counts = np.unique(
            coords[:, 0], return_inverse=True, return_counts=True
        )
    else:
        _, inverse, counts = np.unique(
            coords, axis=0, return_inverse=True, return_counts=True
        )
    inverse = np.ravel(inverse)
    dup_mask = counts[inverse] > 1
    groups = []
    if dup_mask.any():
        order = np.argsort(inverse, kind="stable")
        bounds = np.flatnonzero(np.diff(inverse[order])) + 1
        for grp in np.split(order, bounds):
            if grp.shape[0] > 1:
                groups.append(grp)  # stable argsort keeps indices ascending
    return dup_mask, groups


def _nearest_scan(coords: np.ndarray, u: np.ndarray, key: np.ndarray) -> np.ndarray:
    n = coords.shape[0]
    out = np.full(n, -1, dtype=np.int64)

    dup_mask, groups = _duplicate_groups(coords)
    for grp in groups:
        for pos, i in enumerate(grp):
            ties = np.delete(grp, pos)  # distance 0 beats everything else
            out[i] = _pick(ties, key, u[i])

    rest = np.flatnonzero(~dup_mask)
    if rest.shape[0] == 0:
        return out
    chunk = max(1, _SCAN_CHUNK_ELEMENTS // n)
    for start in range(0, rest.shape[0], chunk):
        rows = rest[start : start + chunk]
        dist = _pairwise_dist(coords[rows], coords)
        dist[np.arange(rows.shape[0]), rows] = np.inf
        dmin = dist.min(axis=1)
        tie_counts = (dist == dmin[:, None]).sum(axis=1)
        best = dist.argmin(axis=1)
        for k, i in enumerate(rows):
            if tie_counts[k] == 1:
                out[i] = best[k]
            else:
                ties = np.flatnonzero(dist[k] == dmin[k])
                out[i] = _pick(ties, key, u[i])
    return out


def _nearest_tree(coords: np.ndarray, u: np.ndarray, key: np.ndarray) -> np.ndarray:
    n = coords.shape[0]
    out = np.full(n, -1, dtype=np.int64)

    dup_mask, groups = _duplicate_groups(coords)
    for grp in groups:
        for pos, i in enumerate(grp):
            ties = np.delete(grp, pos)
            out[i] = _pick(ties, key, u[i])

    rest = np.flatnonzero(~dup_mask)
    if rest.shape[0] == 0:
        return out
    tree = cKDTree(coords)
    # k=2: self at distance 0 plus one candidate; rows in `rest` are unique,
    # so the candidate distance is strictly positive.
    kd_dist, kd_idx = tree.query(coords[rest], k=2)
    cand = np.where(kd_idx[:, 0] == rest, kd_idx[:, 1], kd_idx[:, 0])
    cand_dist = np.where(kd_idx[:, 0] == rest, kd_dist[:, 1], kd_dist[:, 0])
    radii = cand_dist * (1.0 + 1e-9)
    balls = tree.query_ball_point(coords[rest], r=radii)
    for k, i in enumerate(rest):
        idx = np.asarray([j for j in balls[k] if j != i], dtype=np.int64)
        if idx.shape[0] == 0:
            out[i] = cand[k]  # degenerate ball; candidate is the neighbor
            continue
        d = _point_dist(coords, i, idx)
        dmin = d.min()
        ties = idx[d == dmin]
        if ties.shape[0] == 1:
            out[i] = ties[0]
        else:
            out[i] = _pick(ties, key, u[i])
    return out


def _nearest(
    coords: np.ndarray, u: np.ndarray, key: np.ndarray, neighbors: str
) -> np.ndarray:
    if neighbors == "auto":
        neighbors = "scan" if coords.shape[0] <= _AUTO_TREE_THRESHOLD else "tree"
    if neighbors == "scan":
        return _nearest_scan(coords, u, key)
    if neighbors == "tree":
        return _nearest_tree(coords, u, key)
    raise ValueError(f"unknown neighbor search method {neighbors!r}")


def _ranks(y: np.ndarray) -> np.ndarray:
    ys = np.sort(y)
    return np.searchsorted(ys, y, side="right").astype(np.int64)


def _result_from_assignment(assign: NeighborAssignment) -> TauResult:
    r = assign.ranks
    n = r.shape[0]
    min_n = np.minimum(r, r[assign.nearest_x])
    min_m = np.minimum(r, r[assign.nearest_xz])
    num = int((min_m - min_n).sum())
    den = int((r - min_n).sum())
    numerator = float(num) / (n * n)
    denominator = float(den) / (n * n)
    value = 0.0 if den == 0 else numerator / denominator
    return TauResult(value=value, numerator=numerator, denominator=denominator)


def tau(
    y,
    z,
    x,
    rng: np.random.Generator | None = None,
    neighbors: str = "auto",
    return_assignment: bool = False,
):
    """Conditional dependence of y on z given x.

    Parameters
    ----------
    y, z, x : equal-length 1-D sequences, n >= 2, finite entries.
    rng : stream for distance-tie draws (2n uniforms are always consumed,
        n for N then n for M, whether or not ties occur).
    neighbors : "scan" (exact all-pairs), "tree" (k-d tree accelerated,
        identical output), or "auto".
    return_assignment : also return the resolved ``NeighborAssignment``.
    """
    y, z, x = _validate_triple(y, z, x)
    rng = resolve_rng(rng)
    n = y.shape[0]
    u_n = rng.random(n)
    u_m = rng.random(n)
    nearest_x = _nearest(x[:, None], u_n, y, neighbors)
    nearest_xz = _nearest(np.column_stack([x, z]), u_m, y, neighbors)
    assign = NeighborAssignment(
        nearest_x=nearest_x, nearest_xz=nearest_xz, ranks=_ranks(y)
    )
    result = _result_from_assignment(assign)
    if return_assignment:
        return result, assign
    return result


def tau_oracle(y, z, x, tie_draws: tuple[np.ndarray, np.ndarray]) -> TauResult:
    """Literal quadratic transcription of the statistic, for testing only.

    ``tie_draws`` is the pair of uniform vectors (u_n, u_m) the fast path
    would draw; feeding the same draws yields the identical TauResult.
    """
    y, z, x = _validate_triple(y, z, x)
    n = y.shape[0]
    u_n, u_m = tie_draws
    u_n = np.asarray(u_n, dtype=np.float64)
    u_m = np.asarray(u_m, dtype=np.float64)
    if u_n.shape != (n,) or u_m.shape != (n,):
        raise ValueError("tie_draws must be two uniform vectors of length n")

    def pick(ties: list[int], u: float) -> int:
        ordered = sorted(ties, key=lambda j: (y[j], j))
        return ordered[int(u * len(ordered))]

    nearest_x = []
    nearest_xz = []
    for i in range(n):
        best = np.inf
        ties: list[int] = []
        for j in range(n):
            if j == i:
                continue
            d = abs(x[j] - x[i])
            if d < best:
                best = d
                ties = [j]
            elif d == best:
                ties.append(j)
        nearest_x.append(pick(ties, u_n[i]))

        best = np.inf
        ties = []
        for j in range(n):
            if j == i:
                continue
            dx = x[j] - x[i]
            dz = z[j] - z[i]
            d = dx * dx + dz * dz
            if d < best:
                best = d
                ties = [j]
            elif d == best:
                ties.append(j)
        nearest_xz.append(pick(ties, u_m[i]))

    r = [sum(1 for v in y if v <= y[i]) for i in range(n)]
    num = sum(min(r[i], r[nearest_xz[i]]) - min(r[i], r[nearest_x[i]]) for i in range(n))
    den = sum(r[i] - min(r[i], r[nearest_x[i]]) for i in range(n))
    numerator = float(num) / (n * n)
    denominator = float(den) / (n * n)
    value = 0.0 if den == 0 else numerator / denominator
    return TauResult(value=value, numerator=numerator, denominator=denominator)
