"""Static multi-objective machinery: dominance, sorting, selection, time mapping.

Everything here is a pure function of its inputs (minimization throughout).
Objective comparisons are exact floating-point comparisons; no epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import nds_ranks


@dataclass(frozen=True)
class Individual:
    """One evaluated solution: decision vector, objective vector, evaluation time."""

    x: np.ndarray
    f: np.ndarray
    eval_time: float


@dataclass(frozen=True)
class Bounds:
    """Box constraints of the decision space."""

    low: np.ndarray
    up: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "low", np.asarray(self.low, dtype=np.float64))
        object.__setattr__(self, "up", np.asarray(self.up, dtype=np.float64))
        if self.low.shape != self.up.shape:
            raise ValueError("bound arrays must have equal length")
        if not np.all(self.low < self.up):
            raise ValueError("each lower bound must be strictly below the upper bound")

    @property
    def n(self) -> int:
        return self.low.shape[0]

    def contains(self, x) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.low) and np.all(x <= self.up))

    def clip(self, x):
        return np.clip(x, self.low, self.up)


@dataclass(frozen=True)
class TimeContext:
    """Generation counter plus change frequency/severity; derives the time value."""

    tau: int
    tau_T: int
    n_T: int

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.tau_T < 1 or self.n_T < 1:
            raise ValueError("tau_T and n_T must be positive")

    @property
    def t(self) -> float:
        return time_of(self.tau, self.tau_T, self.n_T)


class Population:
    """Fixed-capacity set of individuals sharing one evaluation time.

    Stored as matrices (X: N x n decision vectors, F: N x m objectives) so the
    per-generation kernels stay vectorized; `members` materializes Individual
    views on demand.
    """

    def __init__(self, X, F, t: float, capacity: int | None = None):
        self.X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self.F = np.atleast_2d(np.asarray(F, dtype=np.float64))
        if self.X.shape[0] != self.F.shape[0]:
            raise ValueError("X and F row counts differ")
        self.t = float(t)
        self.capacity = int(capacity) if capacity is not None else self.X.shape[0]

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def m(self) -> int:
        return self.F.shape[1]

    @property
    def members(self) -> list[Individual]:
        return [Individual(self.X[i].copy(), self.F[i].copy(), self.t) for i in range(len(self))]

    def take(self, idx) -> "Population":
        idx = np.asarray(idx, dtype=np.intp)
        return Population(self.X[idx].copy(), self.F[idx].copy(), self.t, self.capacity)

    @staticmethod
    def from_individuals(members, capacity: int | None = None) -> "Population":
        members = list(members)
        if not members:
            raise ValueError("population must be nonempty")
        t = members[0].eval_time
        if any(ind.eval_time != t for ind in members):
            raise ValueError("all members must share one evaluation time")
        X = np.stack([ind.x for ind in members])
        F = np.stack([ind.f for ind in members])
        return Population(X, F, t, capacity)


def _objective_rows(a, b):
    fa = np.asarray(a.f if isinstance(a, Individual) else a, dtype=np.float64)
    fb = np.asarray(b.f if isinstance(b, Individual) else b, dtype=np.float64)
    if fa.shape != fb.shape:
        raise ValueError("objective dimensions differ")
    return fa, fb


def dominates(a, b) -> bool:
    """Pareto dominance (minimization): a <= b everywhere and a < b somewhere."""
    fa, fb = _objective_rows(a, b)
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def _objective_matrix(pop) -> np.ndarray:
    if isinstance(pop, Population):
        return pop.F
    if isinstance(pop, np.ndarray):
        return np.atleast_2d(pop)
    members = list(pop)
    if members and isinstance(members[0], Individual):
        return np.stack([ind.f for ind in members])
    return np.atleast_2d(np.asarray(members, dtype=np.float64))


def fast_nondominated_sort(pop) -> list[np.ndarray]:
    """Partition a population into fronts of member indices (front 0 first).

    Accepts a Population, a sequence of Individuals, or an N x m objective
    matrix. Indices within each front are in input order.
    """
    F = _objective_matrix(pop)
    if F.shape[0] == 0:
        raise ValueError("cannot sort an empty population")
    ranks = nds_ranks(F)
    return [np.flatnonzero(ranks == r) for r in range(int(ranks.max()) + 1)]


def crowding_distance(front) -> np.ndarray:
    """NSGA-II crowding distance over one front.

    Boundary solutions per objective get +inf; interior ones accumulate the
    neighbor gap normalized by the front's per-objective range. A zero range
    contributes nothing (degenerate fronts stay finite instead of dividing
    by zero).
    """
    F = _objective_matrix(front)
    n, m = F.shape
    if n == 0:
        raise ValueError("front must be nonempty")
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for k in range(m):
        order = np.argsort(F[:, k], kind="stable")
        vals = F[order, k]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span == 0.0:
            continue
        interior = order[1:-1]
        dist[interior] += (vals[2:] - vals[:-2]) / span
    return dist


def selection_order(F: np.ndarray) -> np.ndarray:
    """Full pool ordering by (front rank asc, crowding desc, input index asc).

    Crowding is computed within each front, so any prefix of this order is
    exactly what elitist truncation to that size would keep.
    """
    F = np.atleast_2d(F)
    ranks = nds_ranks(F)
    cd = np.empty(F.shape[0])
    for r in range(int(ranks.max()) + 1):
        idx = np.flatnonzero(ranks == r)
        cd[idx] = crowding_distance(F[idx])
    return np.lexsort((np.arange(F.shape[0]), -cd, ranks))


def select_indices(F: np.ndarray, N: int) -> np.ndarray:
    """Indices of the N pool rows kept by (front rank asc, crowding desc).

    Ties inside the last admitted front break on (crowding descending, input
    index ascending), so the result is deterministic.
    """
    F = np.atleast_2d(F)
    if F.shape[0] < N:
        raise ValueError(f"pool of {F.shape[0]} cannot fill {N} slots")
    return selection_order(F)[:N]


def environmental_select(pool, N: int) -> Population:
    """Elitist truncation of a pool of individuals to exactly N members."""
    if isinstance(pool, Population):
        pool = pool.members
    members = list(pool)
    if len(members) < N:
        raise ValueError(f"pool of {len(members)} cannot fill {N} slots")
    F = np.stack([ind.f for ind in members])
    idx = select_indices(F, N)
    return Population.from_individuals([members[i] for i in idx], capacity=N)


def nondominated_set(pop) -> list[Individual]:
    """Front 0 of a population, order-stable with respect to input order."""
    if isinstance(pop, Population):
        members = pop.members
    else:
        members = list(pop)
    if not members:
        raise ValueError("population must be nonempty")
    F = np.stack([ind.f for ind in members])
    ranks = nds_ranks(F)
    return [members[i] for i in np.flatnonzero(ranks == 0)]


def nondominated_indices(F: np.ndarray) -> np.ndarray:
    """Row indices of the non-dominated rows of an objective matrix."""
    return np.flatnonzero(nds_ranks(np.atleast_2d(F)) == 0)


def time_of(tau: int, tau_T: int, n_T: int) -> float:
    """Map a generation counter to the time value: floor(tau/tau_T) / n_T."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if tau_T < 1 or n_T < 1:
        raise ValueError("tau_T and n_T must be positive")
    return (tau // tau_T) / n_T
