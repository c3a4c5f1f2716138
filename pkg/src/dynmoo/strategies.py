"""Change-response machinery.

Environmental responses rebuild the population when the landscape shifts:

* translating the latest non-dominated set by the drift of its center point
  (with Gaussian exploration noise and midpoint boundary repair), optionally
  combined with a random memory set and a uniform-random diversity set;
* baselines: full random restart, center-point prediction alone, anchor-point
  differencing with inheritance, and autoregressive center forecasting with
  shape transfer.

The generational response runs inside a static window: it predicts the next
population from the center-point drift of two consecutive generations,
merges prediction and current population and keeps the elite half.

Throughout, the Gaussian disturbance parameter d is the *standard deviation*
of the per-component perturbation (the draw is Normal(0, d)), the common
reading in the prediction literature. Reading it as a variance scatters the
predicted individuals so widely that the response loses most of its value on
the 20-variable benchmarks; see the README for the measured difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Bounds,
    Individual,
    Population,
    nondominated_indices,
    select_indices,
    selection_order,
)

STRATEGY_NAMES = ("RIS", "CPS", "FPS", "PPS", "FGERS-CPS", "FPS-GRS")


@dataclass(frozen=True)
class EnvResponseConfig:
    """Memory-set size and disturbance scale of the environmental response."""

    Nmem: int = 10
    d: float = 0.1

    def __post_init__(self):
        if self.Nmem < 0:
            raise ValueError("Nmem must be nonnegative")
        if self.d < 0:
            raise ValueError("d must be nonnegative")


@dataclass(frozen=True)
class GenResponseConfig:
    """Generational response parameters; the prediction step size is fixed to 1."""

    d: float = 0.1
    step_size: int = 1
    warmup_generations: int = 2

    def __post_init__(self):
        if self.step_size != 1:
            raise ValueError("only step size 1 is supported")
        if self.d < 0 or self.warmup_generations < 0:
            raise ValueError("d and warmup_generations must be nonnegative")


@dataclass(frozen=True)
class NDSet:
    """Decision and objective matrices of one environment's non-dominated set."""

    X: np.ndarray
    F: np.ndarray

    def __len__(self):
        return self.X.shape[0]


@dataclass
class StrategyState:
    """Run-scoped history the responses draw on.

    One entry is appended to `center_series` per detected change; the
    non-dominated sets of the two most recent environments are kept for the
    differencing predictors.
    """

    n: int
    ndset_prev: NDSet | None = None
    ndset_curr: NDSet | None = None
    center_series: list[np.ndarray] = field(default_factory=list)
    pop_prev_gen: Population | None = None
    center_prev_gen: np.ndarray | None = None
    generations_since_change: int = 0

    def push_environment(self, ndset: NDSet) -> None:
        self.ndset_prev = self.ndset_curr
        self.ndset_curr = ndset
        self.center_series.append(center_point(ndset.X))

    @property
    def environments_seen(self) -> int:
        return len(self.center_series)


def _decision_matrix(ndset) -> np.ndarray:
    if isinstance(ndset, NDSet):
        return ndset.X
    if isinstance(ndset, np.ndarray):
        return np.atleast_2d(ndset)
    members = list(ndset)
    if members and isinstance(members[0], Individual):
        return np.stack([ind.x for ind in members])
    return np.atleast_2d(np.asarray(members, dtype=np.float64))


def center_point(ndset) -> np.ndarray:
    """Component-wise mean of the non-dominated set's decision vectors."""
    X = _decision_matrix(ndset)
    if X.shape[0] == 0:
        raise ValueError("center point of an empty set")
    return X.mean(axis=0)


def _repair_rows(orig: np.ndarray, predicted: np.ndarray, bounds: Bounds) -> np.ndarray:
    out = np.where(predicted > bounds.up, 0.5 * (orig + bounds.up), predicted)
    return np.where(predicted < bounds.low, 0.5 * (orig + bounds.low), out)


def boundary_repair(orig, predicted, bounds: Bounds) -> np.ndarray:
    """Midpoint repair: out-of-range components move halfway between the
    source individual and the violated bound."""
    orig = np.asarray(orig, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    return _repair_rows(orig, predicted, bounds)


def _gauss(rng, d: float, shape) -> np.ndarray:
    return rng.normal(0.0, math.sqrt(d), shape)


def predict_ndset(ndset, C_t, C_tm1, d: float, bounds: Bounds, rng) -> np.ndarray:
    """Feed-forward prediction: translate each member by the center drift,
    perturb, and repair against its source. One output row per input row."""
    X = _decision_matrix(ndset)
    shift = np.asarray(C_t, dtype=np.float64) - np.asarray(C_tm1, dtype=np.float64)
    predicted = X + shift + _gauss(rng, d, X.shape)
    return _repair_rows(X, predicted, bounds)


def memory_select(pop: Population, Nmem: int, rng) -> np.ndarray:
    """Indices of Nmem members drawn without replacement."""
    if Nmem > len(pop):
        raise ValueError("memory set cannot exceed the population")
    if Nmem == 0:
        return np.empty(0, dtype=np.intp)
    return np.asarray(rng.choice(len(pop), size=Nmem, replace=False), dtype=np.intp)


def diversity_fill(Ndiv: int, bounds: Bounds, rng) -> np.ndarray:
    """Ndiv uniform-random decision vectors inside the bounds."""
    if Ndiv < 0:
        raise ValueError("Ndiv must be nonnegative")
    return rng.uniform(bounds.low, bounds.up, size=(Ndiv, bounds.n))


def environmental_response(
    state: StrategyState, pop: Population, problem, t_new: float, Npop: int,
    cfg: EnvResponseConfig, rng,
) -> Population:
    """Prediction + memory + adaptive diversity response to a detected change.

    The predicted set keeps one individual per current non-dominated member;
    if prediction plus memory overflow the capacity, the predicted set is
    randomly cut to Npop - Nmem and the diversity set shrinks to zero,
    otherwise uniform-random individuals fill the remainder.
    """
    if state.ndset_curr is None or len(state.ndset_curr) == 0:
        raise ValueError("environmental response needs a current non-dominated set")
    bounds = problem.bounds
    C_t = center_point(state.ndset_curr.X)
    C_prev = center_point(state.ndset_prev.X) if state.ndset_prev else C_t
    predicted = predict_ndset(state.ndset_curr.X, C_t, C_prev, cfg.d, bounds, rng)

    nmem = min(cfg.Nmem, Npop - 1, len(pop))
    mem_idx = memory_select(pop, nmem, rng)
    if nmem + predicted.shape[0] > Npop:
        keep = rng.choice(predicted.shape[0], size=Npop - nmem, replace=False)
        predicted = predicted[keep]
    ndiv = Npop - predicted.shape[0] - nmem
    diverse = diversity_fill(ndiv, bounds, rng)

    X = np.vstack([predicted, pop.X[mem_idx], diverse])
    return Population(X, problem.evaluate_batch(X, t_new), t_new, Npop)


def ris_response(Npop: int, bounds: Bounds, problem, t_new: float, rng) -> Population:
    """Random restart: Npop uniform individuals evaluated at the new time."""
    X = diversity_fill(Npop, bounds, rng)
    return Population(X, problem.evaluate_batch(X, t_new), t_new, Npop)


def cps_response(
    state: StrategyState, pop: Population, problem, t_new: float, Npop: int, d: float, rng,
) -> Population:
    """Center-point prediction alone: the predicted set is kept wholesale and
    the remaining slots carry over the best current members, ranked inside the
    merged pool after re-evaluation at the new time."""
    if state.ndset_curr is None or len(state.ndset_curr) == 0:
        raise ValueError("cps response needs a current non-dominated set")
    bounds = problem.bounds
    C_t = center_point(state.ndset_curr.X)
    C_prev = center_point(state.ndset_prev.X) if state.ndset_prev else C_t
    predicted = predict_ndset(state.ndset_curr.X, C_t, C_prev, d, bounds, rng)
    if predicted.shape[0] >= Npop:
        X = predicted[:Npop]
        return Population(X, problem.evaluate_batch(X, t_new), t_new, Npop)
    pred_F = problem.evaluate_batch(predicted, t_new)
    cur_F = problem.evaluate_batch(pop.X, t_new)
    pool_F = np.vstack([pred_F, cur_F])
    order = selection_order(pool_F)
    cur_positions = order[order >= predicted.shape[0]] - predicted.shape[0]
    fill = cur_positions[: Npop - predicted.shape[0]]
    X = np.vstack([predicted, pop.X[fill]])
    F = np.vstack([pred_F, cur_F[fill]])
    return Population(X, F, t_new, Npop)


def _anchor_points(ndset: NDSet) -> np.ndarray:
    """Per-objective minimizers plus the center point, as decision vectors."""
    mins = ndset.X[np.argmin(ndset.F, axis=0)]
    return np.vstack([mins, center_point(ndset.X)])


def fps_response(
    state: StrategyState, pop: Population, problem, t_new: float, Npop: int, d: float, rng,
) -> Population:
    """Anchor-point differencing: 3(m+1) predicted individuals, then 70% of
    the rest inherited from the current best and 30% random.

    With less than two environments of history the predicted portion falls
    back to uniform-random individuals.
    """
    m = problem.m
    bounds = problem.bounds
    n_pred = min(3 * (m + 1), Npop)
    if state.ndset_prev is not None and len(state.ndset_prev) > 0:
        cur = _anchor_points(state.ndset_curr)
        prev = _anchor_points(state.ndset_prev)
        base = cur + (cur - prev)
        rows = []
        origins = []
        for j in range(base.shape[0]):
            rows.append(base[j])
            rows.append(base[j] + _gauss(rng, d, base[j].shape))
            rows.append(base[j] + _gauss(rng, d, base[j].shape))
            origins.extend([cur[j]] * 3)
        predicted = _repair_rows(np.stack(origins), np.stack(rows), bounds)[:n_pred]
    else:
        predicted = diversity_fill(n_pred, bounds, rng)

    remainder = Npop - predicted.shape[0]
    n_inherit = (7 * remainder + 9) // 10  # 70%, rounded toward inheritance
    n_random = remainder - n_inherit
    inherit_idx = select_indices(pop.F, n_inherit) if n_inherit else np.empty(0, dtype=np.intp)
    random_X = diversity_fill(n_random, bounds, rng)
    X = np.vstack([predicted, pop.X[inherit_idx], random_X])
    return Population(X, problem.evaluate_batch(X, t_new), t_new, Npop)


def _ar_predict(window: np.ndarray, p: int) -> np.ndarray:
    """Least-squares AR(p) one-step forecast, fit independently per column."""
    L, n = window.shape
    pred = np.empty(n)
    for k in range(n):
        s = window[:, k]
        A = np.column_stack([s[p - 1 - j : L - 1 - j] for j in range(p)])
        w, *_ = np.linalg.lstsq(A, s[p:], rcond=None)
        pred[k] = w @ s[L - 1 : L - 1 - p : -1]
    return pred


def pps_response(
    state: StrategyState, pop: Population, problem, t_new: float, Npop: int,
    p: int = 3, M: int = 23, d: float = 0.1, rng=None,
) -> Population:
    """Autoregressive center forecast plus shape transfer.

    Per dimension, an AR(p) model fit on the most recent min(M, available)
    center points predicts the next center; the previous environment's final
    population is re-centered there (its residuals carry the set shape).
    Until the series is p+2 long, and whenever the fit degenerates, plain
    center differencing is used instead.
    """
    if not state.center_series:
        raise ValueError("pps response needs at least one recorded center")
    series = state.center_series
    C_t = series[-1]
    diff = C_t - series[-2] if len(series) >= 2 else np.zeros(state.n)
    pred_center = None
    if len(series) >= p + 2:
        window = np.stack(series[-M:])
        candidate = _ar_predict(window, p)
        if np.all(np.isfinite(candidate)):
            pred_center = candidate
    if pred_center is None:
        pred_center = C_t + diff
    bounds = problem.bounds
    predicted = pop.X - C_t + pred_center + _gauss(rng, d, pop.X.shape)
    predicted = _repair_rows(pop.X, predicted, bounds)
    return Population(predicted, problem.evaluate_batch(predicted, t_new), t_new, Npop)


def generational_response(
    pop_prev: Population, pop_curr: Population, problem, t: float,
    cfg: GenResponseConfig, rng,
) -> Population:
    """Static-stage acceleration: translate the current population by the
    center drift of two consecutive generations' non-dominated sets, then
    keep the elite of prediction plus current."""
    if pop_prev.t != pop_curr.t:
        raise ValueError("generational response needs populations at one time value")
    if len(pop_prev) != len(pop_curr):
        raise ValueError("population sizes differ")
    if pop_prev.n != pop_curr.n:
        raise ValueError("decision dimensions differ")
    Npop = len(pop_curr)
    C_prev = pop_prev.X[nondominated_indices(pop_prev.F)].mean(axis=0)
    C_cur = pop_curr.X[nondominated_indices(pop_curr.F)].mean(axis=0)
    predicted = pop_curr.X + (C_cur - C_prev) + _gauss(rng, cfg.d, pop_curr.X.shape)
    predicted = _repair_rows(pop_curr.X, predicted, problem.bounds)
    pred_F = problem.evaluate_batch(predicted, t)
    pool_X = np.vstack([predicted, pop_curr.X])
    pool_F = np.vstack([pred_F, pop_curr.F])
    keep = select_indices(pool_F, Npop)
    return Population(pool_X[keep], pool_F[keep], t, Npop)


def detect_change(pop: Population, problem, t: float, fraction: float, rng) -> bool:
    """Re-evaluate a random sentinel subset at the current time; report a
    change when any stored objective vector moved by more than 1e-12."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    count = math.ceil(fraction * len(pop))
    idx = rng.choice(len(pop), size=count, replace=False)
    fresh = problem.evaluate_batch(pop.X[idx], t)
    return bool(np.any(np.abs(fresh - pop.F[idx]) > 1e-12))


class Strategy:
    """Named response bundle: an environmental response plus, for the
    framework variants, the generational response in static stages."""

    def __init__(self, name: str, env_response, uses_generational: bool):
        self.name = name
        self._env_response = env_response
        self.uses_generational = uses_generational

    def respond(self, state: StrategyState, pop: Population, problem, t_new: float,
                Npop: int, rng) -> Population:
        return self._env_response(state, pop, problem, t_new, Npop, rng)


def make_strategy(
    name: str,
    *,
    nmem: int = 10,
    d: float = 0.1,
    diversity: bool = True,
    pps_p: int = 3,
    pps_M: int = 23,
) -> Strategy:
    """Build a strategy by its public name.

    `nmem` and `diversity` only affect the full framework response; setting
    nmem=0 and diversity=False reduces its environmental response to plain
    center-point prediction, which isolates the generational response in
    ablation comparisons.
    """
    key = name.strip().upper()

    def ris(state, pop, problem, t_new, Npop, rng):
        return ris_response(Npop, problem.bounds, problem, t_new, rng)

    def cps(state, pop, problem, t_new, Npop, rng):
        return cps_response(state, pop, problem, t_new, Npop, d, rng)

    def fps(state, pop, problem, t_new, Npop, rng):
        return fps_response(state, pop, problem, t_new, Npop, d, rng)

    def pps(state, pop, problem, t_new, Npop, rng):
        return pps_response(state, pop, problem, t_new, Npop, pps_p, pps_M, d, rng)

    env_cfg = EnvResponseConfig(Nmem=nmem, d=d)

    def fgers(state, pop, problem, t_new, Npop, rng):
        if diversity:
            return environmental_response(state, pop, problem, t_new, Npop, env_cfg, rng)
        return cps_response(state, pop, problem, t_new, Npop, d, rng)

    table = {
        "RIS": (ris, False),
        "CPS": (cps, False),
        "FPS": (fps, False),
        "PPS": (pps, False),
        "FGERS-CPS": (fgers, True),
        "FPS-GRS": (fps, True),
    }
    if key not in table:
        raise KeyError(f"unknown strategy {name!r}; known: {', '.join(STRATEGY_NAMES)}")
    env, grs = table[key]
    return Strategy(key, env, grs)
