"""Quality indicators (IGD/MIGD, HV/HVD/MHVD) and the rank-sum significance test.

IGD uses raw Euclidean distances in objective units. Hypervolume is computed
exactly for two objectives (staircase sweep) and three (slicing along the
last objective); points that do not dominate the reference point contribute
nothing instead of raising. HVD is reported as computed and may be slightly
negative when the approximation reaches outside the sampled front's dominated
region.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class MetricSeries:
    """One indicator value per measured environment."""

    per_environment: np.ndarray
    env_indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "per_environment", np.asarray(self.per_environment, dtype=np.float64)
        )
        object.__setattr__(self, "env_indices", np.asarray(self.env_indices, dtype=np.int64))
        if self.per_environment.shape[0] != self.env_indices.shape[0]:
            raise ValueError("values and environment indices must align")


def igd(PF, P) -> float:
    """Mean distance from each reference-front point to its nearest point of P."""
    PF = np.atleast_2d(np.asarray(PF, dtype=np.float64))
    P = np.atleast_2d(np.asarray(P, dtype=np.float64))
    if PF.size == 0 or P.size == 0:
        raise ValueError("igd needs nonempty point sets")
    if PF.shape[1] != P.shape[1]:
        raise ValueError("objective dimensions differ")
    return float(cdist(PF, P).min(axis=1).mean())


def _series_values(series) -> np.ndarray:
    vals = series.per_environment if isinstance(series, MetricSeries) else np.asarray(series)
    vals = np.asarray(vals, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty metric series")
    return vals


def migd(series) -> float:
    """Mean of per-environment IGD values."""
    return float(_series_values(series).mean())


def mhvd(series) -> float:
    """Mean of per-environment hypervolume differences."""
    return float(_series_values(series).mean())


def reference_point(Z) -> np.ndarray:
    """Hypervolume reference point: per-objective front maximum plus 0.5."""
    Z = np.asarray(Z, dtype=np.float64)
    if not np.all(np.isfinite(Z)):
        raise ValueError("reference anchor must be finite")
    return Z + 0.5


def _dominating_ref(front: np.ndarray, ref: np.ndarray) -> np.ndarray:
    keep = np.all(front < ref, axis=1)
    return front[keep]


def _hv2d(front: np.ndarray, ref: np.ndarray) -> float:
    pts = _dominating_ref(front, ref)
    if pts.shape[0] == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    hv = 0.0
    best_f2 = math.inf
    # staircase sweep: walk f1 ascending, count each strictly-improving f2 level
    skyline = []
    for f1, f2 in pts:
        if f2 < best_f2:
            skyline.append((f1, f2))
            best_f2 = f2
    for i, (f1, f2) in enumerate(skyline):
        next_f1 = skyline[i + 1][0] if i + 1 < len(skyline) else ref[0]
        hv += (next_f1 - f1) * (ref[1] - f2)
    return float(hv)


def _hv3d(front: np.ndarray, ref: np.ndarray) -> float:
    pts = _dominating_ref(front, ref)
    if pts.shape[0] == 0:
        return 0.0
    order = np.argsort(pts[:, 2], kind="stable")
    pts = pts[order]
    levels = pts[:, 2]
    hv = 0.0
    for i in range(pts.shape[0]):
        if i + 1 < pts.shape[0] and levels[i + 1] == levels[i]:
            continue  # slice area changes only at distinct levels
        z_top = levels[i + 1] if i + 1 < pts.shape[0] else ref[2]
        thickness = z_top - levels[i]
        if thickness > 0.0:
            hv += thickness * _hv2d(pts[: i + 1, :2], ref[:2])
    return float(hv)


def hypervolume(front, ref) -> float:
    """Exact hypervolume of the region dominated by `front` up to `ref`."""
    front = np.atleast_2d(np.asarray(front, dtype=np.float64))
    ref = np.asarray(ref, dtype=np.float64)
    m = front.shape[1]
    if ref.shape[0] != m:
        raise ValueError("reference point dimension differs from front")
    if m == 2:
        return _hv2d(front, ref)
    if m == 3:
        return _hv3d(front, ref)
    raise ValueError(f"hypervolume supports 2 or 3 objectives, got {m}")


def hvd(PF, P, ref) -> float:
    """Hypervolume of the reference front minus hypervolume of the approximation."""
    return hypervolume(PF, ref) - hypervolume(P, ref)


@dataclass(frozen=True)
class RankSumResult:
    p_value: float
    significant: bool
    direction: str  # "a" or "b": which sample has the smaller mean rank; "none" on ties


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0], dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < len(sorted_vals):
        j = i
        while j + 1 < len(sorted_vals) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_ranksum(a, b, alpha: float = 0.05) -> RankSumResult:
    """Two-sided Wilcoxon rank-sum test with mid-rank ties.

    Exact enumeration of rank assignments for combined sizes up to 20, normal
    approximation with tie correction and continuity correction beyond that.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = a.shape[0], b.shape[0]
    if n1 < 3 or n2 < 3:
        raise ValueError("need at least 3 observations per sample")
    combined = np.concatenate([a, b])
    ranks = _midranks(combined)
    w_obs = float(ranks[:n1].sum())
    mean_a = w_obs / n1
    mean_b = float(ranks[n1:].sum()) / n2
    if mean_a < mean_b:
        direction = "a"
    elif mean_b < mean_a:
        direction = "b"
    else:
        direction = "none"
    if np.all(combined == combined[0]):
        return RankSumResult(1.0, False, "none")

    N = n1 + n2
    mu = n1 * (N + 1) / 2.0
    if N <= 20:
        # conditional exact distribution over all rank-subset assignments
        dev = abs(w_obs - mu) - 1e-12
        hits = 0
        total = 0
        for subset in itertools.combinations(range(N), n1):
            w = ranks[list(subset)].sum()
            if abs(w - mu) >= dev:
                hits += 1
            total += 1
        p = hits / total
    else:
        tie_sizes = np.unique(combined, return_counts=True)[1]
        tie_term = float(np.sum(tie_sizes**3 - tie_sizes))
        var = n1 * n2 / 12.0 * ((N + 1) - tie_term / (N * (N - 1)))
        if var <= 0.0:
            return RankSumResult(1.0, False, "none")
        z = (abs(w_obs - mu) - 0.5) / math.sqrt(var)
        p = float(math.erfc(max(z, 0.0) / math.sqrt(2.0)))
    p = min(1.0, p)
    return RankSumResult(p, p < alpha, direction)
