"""Static-stage optimizer: variation (SBX + polynomial mutation) and one
generation step of evaluate-merge-select.

The variation operator is pluggable in principle; this default pairs shuffled
parents sequentially (no mating pressure) so performance differences between
runs are attributable to the response strategies, not the inner optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bounds, Population, select_indices


@dataclass(frozen=True)
class VariationConfig:
    crossover_prob: float = 1.0
    crossover_index: float = 20.0
    mutation_prob: float | None = None  # None: resolved to 1/n at use
    mutation_index: float = 20.0

    def __post_init__(self):
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.crossover_index <= 0 or self.mutation_index <= 0:
            raise ValueError("distribution indices must be positive")


def make_streams(seed: int, names=("init", "variation", "strategy", "detection")):
    """Independent named substreams from one root seed.

    Keeping the streams separate means extra draws in one concern (say, a
    strategy that perturbs more individuals) cannot shift the variation or
    detection sequences, which the paired-seed comparisons rely on.
    """
    root = np.random.SeedSequence(seed)
    children = root.spawn(len(names))
    return {name: np.random.default_rng(ss) for name, ss in zip(names, children)}


def _sbx_pairs(P1, P2, eta, rng):
    u = rng.random(P1.shape)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0)),
    )
    c1 = 0.5 * ((1.0 + beta) * P1 + (1.0 - beta) * P2)
    c2 = 0.5 * ((1.0 - beta) * P1 + (1.0 + beta) * P2)
    return c1, c2


def _polynomial_mutation(X, bounds: Bounds, prob, eta, rng):
    span = bounds.up - bounds.low
    apply = rng.random(X.shape) < prob
    u = rng.random(X.shape)
    delta = np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1.0)),
    )
    return X + np.where(apply, delta * span, 0.0)


def vary(parents: Population, bounds: Bounds, cfg: VariationConfig, rng) -> np.ndarray:
    """Offspring decision vectors, one per parent, clipped into bounds."""
    N = len(parents)
    if N < 2:
        raise ValueError("variation needs at least two parents")
    perm = rng.permutation(N)
    X = parents.X[perm]
    half = N // 2
    P1 = X[0 : 2 * half : 2]
    P2 = X[1 : 2 * half : 2]
    do_cx = rng.random(half) <= cfg.crossover_prob
    swap = rng.random(P1.shape) <= 0.5  # per-variable exchange, standard SBX
    c1, c2 = _sbx_pairs(P1, P2, cfg.crossover_index, rng)
    active = do_cx[:, None] & swap
    c1 = np.where(active, c1, P1)
    c2 = np.where(active, c2, P2)
    children = np.empty_like(X)
    children[0 : 2 * half : 2] = c1
    children[1 : 2 * half : 2] = c2
    if N % 2:
        children[-1] = X[-1]
    m_prob = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / parents.n
    children = _polynomial_mutation(children, bounds, m_prob, cfg.mutation_index, rng)
    return np.clip(children, bounds.low, bounds.up)


def step(pop: Population, problem, t: float, cfg: VariationConfig, rng) -> Population:
    """One generation: vary, evaluate, and select back down to capacity."""
    if pop.t != t:
        raise ValueError("population must be evaluated at the current time")
    offspring_X = vary(pop, problem.bounds, cfg, rng)
    offspring_F = problem.evaluate_batch(offspring_X, t)
    pool_X = np.vstack([pop.X, offspring_X])
    pool_F = np.vstack([pop.F, offspring_F])
    keep = select_indices(pool_F, pop.capacity)
    return Population(pool_X[keep], pool_F[keep], t, pop.capacity)
