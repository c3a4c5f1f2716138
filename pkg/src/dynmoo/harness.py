"""Experiment driver: full dynamic runs, grids, aggregation, and file emission.

A run advances one generation at a time: change detection at the top (on a
change the strategy's environmental response reseeds the population),
otherwise the generational response for strategies that carry one, then one
optimizer step. IGD and HVD are recorded at the final generation of every
environment after the first change.

Reproducibility contract: (config, base_seed) determine every output byte of
the raw CSV. Each run splits its seed into named substreams, and run r uses
base_seed + r for every strategy, so comparisons are paired.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .core import Population, nondominated_indices, time_of
from .kernels import BACKEND
from .metrics import hypervolume, igd, reference_point, wilcoxon_ranksum
from .optimizer import VariationConfig, make_streams, step
from .problems import get_problem, problem_names
from .strategies import (
    STRATEGY_NAMES,
    GenResponseConfig,
    NDSet,
    StrategyState,
    detect_change,
    generational_response,
    make_strategy,
)

RAW_COLUMNS = ("problem", "strategy", "seed", "tau_T", "n_T", "env_index", "t", "igd", "hvd")
SUMMARY_COLUMNS = (
    "problem",
    "strategy",
    "migd_mean",
    "migd_std",
    "mhvd_mean",
    "mhvd_std",
    "best_migd",
    "significance_vs_focal",
)

#: summary markers, following the usual table convention: double dagger when the
#: focal strategy is significantly better, single dagger when the difference is
#: not significant, and a circle for the (unmarked in the tables) significantly
#: worse case.
MARK_BETTER = "‡"
MARK_EQUIVALENT = "†"
MARK_WORSE = "○"


class ConfigError(ValueError):
    """Invalid experiment configuration (bad value or unknown key)."""


@dataclass(frozen=True)
class ExperimentConfig:
    problems: tuple[str, ...] = tuple(problem_names())
    strategies: tuple[str, ...] = STRATEGY_NAMES
    tau_T: int = 25
    n_T: int = 10
    npop: int = 100
    nmem: int = 10
    d: float = 0.1
    n_changes: int = 100
    runs: int = 20
    base_seed: int = 1
    pf_sample_size: int = 1000
    pf_sample_size_3d: int = 1089
    n_dim: int = 20
    detect_fraction: float = 0.05
    warmup_generations: int = 2
    diversity: bool = True
    pps_p: int = 3
    pps_M: int = 23
    focal: str = "FGERS-CPS"
    snapshot_envs: tuple[int, ...] = ()
    output_dir: str = "results"

    def __post_init__(self):
        if self.tau_T < 1 or self.n_T < 1:
            raise ConfigError("tau_T and n_T must be positive")
        if self.npop < 4:
            raise ConfigError("npop must be at least 4")
        if not 0 <= self.nmem < self.npop:
            raise ConfigError("nmem must satisfy 0 <= nmem < npop")
        if self.n_changes < 1 or self.runs < 1:
            raise ConfigError("n_changes and runs must be positive")
        if not 0.0 < self.detect_fraction <= 1.0:
            raise ConfigError("detect_fraction must lie in (0, 1]")
        if self.d < 0:
            raise ConfigError("d must be nonnegative")
        for name in self.strategies:
            if name.strip().upper() not in STRATEGY_NAMES:
                raise ConfigError(f"unknown strategy {name!r}")

    @property
    def total_generations(self) -> int:
        # one full static window per environment, including the last
        return (self.n_changes + 1) * self.tau_T

    def pf_size_for(self, m: int) -> int:
        return self.pf_sample_size if m == 2 else self.pf_sample_size_3d


@dataclass(frozen=True)
class EnvRecord:
    env_index: int
    t: float
    igd: float
    hvd: float


@dataclass(frozen=True)
class Snapshot:
    env_index: int
    population_objectives: np.ndarray
    true_pf_points: np.ndarray


@dataclass
class RunRecord:
    problem: str
    strategy: str
    seed: int
    tau_T: int
    n_T: int
    per_env: list[EnvRecord]
    migd: float
    mhvd: float
    wall_time_ms: int
    snapshots: list[Snapshot] = field(default_factory=list)


# front samples and their hypervolumes are identical across runs; cache per
# (problem, dimension, time, sample size)
_PF_CACHE: dict = {}


def _front_data(problem, t: float, K: int):
    key = (problem.name, problem.n, t, K)
    hit = _PF_CACHE.get(key)
    if hit is None:
        sample = problem.true_pf(t, K)
        ref = reference_point(sample.z)
        hit = (sample.points, ref, hypervolume(sample.points, ref))
        _PF_CACHE[key] = hit
    return hit


def run_single(problem_name: str, strategy_name: str, config: ExperimentConfig,
               seed: int) -> RunRecord:
    """One full dynamic run of a strategy on a problem with a fixed seed."""
    problem = get_problem(problem_name, config.n_dim)
    strategy = make_strategy(
        strategy_name,
        nmem=config.nmem,
        d=config.d,
        diversity=config.diversity,
        pps_p=config.pps_p,
        pps_M=config.pps_M,
    )
    streams = make_streams(seed)
    var_cfg = VariationConfig()
    gen_cfg = GenResponseConfig(d=config.d, warmup_generations=config.warmup_generations)
    bounds = problem.bounds
    K = config.pf_size_for(problem.m)
    snapshot_envs = set(config.snapshot_envs)

    started = time.perf_counter()
    X0 = streams["init"].uniform(bounds.low, bounds.up, size=(config.npop, problem.n))
    pop = Population(X0, problem.evaluate_batch(X0, 0.0), 0.0, config.npop)
    state = StrategyState(n=problem.n)
    env_index = 0
    per_env: list[EnvRecord] = []
    snapshots: list[Snapshot] = []

    def close_environment(final_pop: Population) -> None:
        if env_index < 1:
            return  # the pre-change environment is not measured
        t_env = env_index / config.n_T
        pf_points, ref, hv_pf = _front_data(problem, t_env, K)
        per_env.append(
            EnvRecord(
                env_index,
                t_env,
                igd(pf_points, final_pop.F),
                hv_pf - hypervolume(final_pop.F, ref),
            )
        )
        if env_index in snapshot_envs:
            snapshots.append(Snapshot(env_index, final_pop.F.copy(), pf_points.copy()))

    for tau in range(1, config.total_generations):
        t_now = time_of(tau, config.tau_T, config.n_T)
        if detect_change(pop, problem, t_now, config.detect_fraction, streams["detection"]):
            close_environment(pop)
            nd = nondominated_indices(pop.F)
            state.push_environment(NDSet(pop.X[nd].copy(), pop.F[nd].copy()))
            env_index += 1
            pop = strategy.respond(state, pop, problem, t_now, config.npop, streams["strategy"])
            state.pop_prev_gen = None
            state.generations_since_change = 0
        elif (
            strategy.uses_generational
            and state.pop_prev_gen is not None
            and state.generations_since_change >= gen_cfg.warmup_generations
        ):
            pop = generational_response(
                state.pop_prev_gen, pop, problem, t_now, gen_cfg, streams["strategy"]
            )
        entry = pop
        pop = step(pop, problem, t_now, var_cfg, streams["variation"])
        state.pop_prev_gen = entry
        state.generations_since_change += 1

    close_environment(pop)
    elapsed_ms = int(round(1000.0 * (time.perf_counter() - started)))
    migd_val = float(np.mean([r.igd for r in per_env]))
    mhvd_val = float(np.mean([r.hvd for r in per_env]))
    return RunRecord(
        problem=problem.name,
        strategy=strategy.name,
        seed=seed,
        tau_T=config.tau_T,
        n_T=config.n_T,
        per_env=per_env,
        migd=migd_val,
        mhvd=mhvd_val,
        wall_time_ms=elapsed_ms,
        snapshots=snapshots,
    )


def run_experiment(config: ExperimentConfig, on_record=None, on_failure=None):
    """Run the full problems x strategies x runs grid.

    Run r of every strategy uses seed base_seed + r. Failing cells are
    reported through `on_failure` and do not stop the remaining cells.
    Returns (records, failures).
    """
    records: list[RunRecord] = []
    failures: list[dict] = []
    for problem_name in config.problems:
        for strategy_name in config.strategies:
            for r in range(config.runs):
                seed = config.base_seed + r
                try:
                    record = run_single(problem_name, strategy_name, config, seed)
                except ConfigError:
                    raise
                except Exception as exc:  # noqa: BLE001 - cell isolation is the point
                    failure = {
                        "problem": problem_name,
                        "strategy": strategy_name,
                        "seed": seed,
                        "error": f"{type(exc).__name__}: {exc}",
                    }
                    failures.append(failure)
                    if on_failure is not None:
                        on_failure(failure)
                    continue
                records.append(record)
                if on_record is not None:
                    on_record(record)
    return records, failures


@dataclass(frozen=True)
class SummaryRow:
    problem: str
    strategy: str
    migd_mean: float
    migd_std: float | None
    mhvd_mean: float
    mhvd_std: float | None
    best_migd: bool
    significance_vs_focal: str


def summarize(records, focal: str = "FGERS-CPS", alpha: float = 0.05) -> list[SummaryRow]:
    """Per-cell means/standard deviations plus best-mean and significance marks."""
    focal = focal.strip().upper()
    problems: list[str] = []
    strategies: list[str] = []
    cells: dict[tuple[str, str], dict[int, RunRecord]] = {}
    for rec in records:
        if rec.problem not in problems:
            problems.append(rec.problem)
        if rec.strategy not in strategies:
            strategies.append(rec.strategy)
        cells.setdefault((rec.problem, rec.strategy), {})[rec.seed] = rec

    rows: list[SummaryRow] = []
    for problem in problems:
        present = [s for s in strategies if (problem, s) in cells]
        means = {
            s: float(np.mean([r.migd for r in cells[(problem, s)].values()])) for s in present
        }
        best = min(present, key=lambda s: means[s])
        focal_migd = None
        if focal in present:
            focal_migd = [r.migd for r in sorted(cells[(problem, focal)].values(),
                                                 key=lambda r: r.seed)]
        for s in present:
            runs = sorted(cells[(problem, s)].values(), key=lambda r: r.seed)
            migds = [r.migd for r in runs]
            mhvds = [r.mhvd for r in runs]
            mark = ""
            if focal_migd is not None and s != focal:
                if len(focal_migd) >= 3 and len(migds) >= 3:
                    test = wilcoxon_ranksum(focal_migd, migds, alpha)
                    if not test.significant:
                        mark = MARK_EQUIVALENT
                    elif test.direction == "a":
                        mark = MARK_BETTER
                    else:
                        mark = MARK_WORSE
            rows.append(
                SummaryRow(
                    problem=problem,
                    strategy=s,
                    migd_mean=means[s],
                    migd_std=float(np.std(migds, ddof=1)) if len(migds) >= 2 else None,
                    mhvd_mean=float(np.mean(mhvds)),
                    mhvd_std=float(np.std(mhvds, ddof=1)) if len(mhvds) >= 2 else None,
                    best_migd=s == best,
                    significance_vs_focal=mark,
                )
            )
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def raw_csv_lines(records) -> list[str]:
    lines = [",".join(RAW_COLUMNS)]
    for rec in records:
        for env in rec.per_env:
            lines.append(
                ",".join(
                    [
                        rec.problem,
                        rec.strategy,
                        str(rec.seed),
                        str(rec.tau_T),
                        str(rec.n_T),
                        str(env.env_index),
                        repr(env.t),
                        repr(env.igd),
                        repr(env.hvd),
                    ]
                )
            )
    return lines


def summary_csv_lines(rows) -> list[str]:
    lines = [",".join(SUMMARY_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.problem,
                    row.strategy,
                    _fmt(row.migd_mean),
                    _fmt(row.migd_std),
                    _fmt(row.mhvd_mean),
                    _fmt(row.mhvd_std),
                    "1" if row.best_migd else "0",
                    row.significance_vs_focal,
                ]
            )
        )
    return lines


def emit_outputs(records, summary_rows, config: ExperimentConfig, failures=()) -> dict[str, Path]:
    """Write raw CSV, summary CSV, snapshot CSVs, and the reproduction manifest.

    Returns the paths written, keyed by artifact kind.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    raw_path = out / "raw.csv"
    raw_path.write_text("\n".join(raw_csv_lines(records)) + "\n", encoding="utf-8")
    paths["raw"] = raw_path

    summary_path = out / "summary.csv"
    summary_path.write_text("\n".join(summary_csv_lines(summary_rows)) + "\n", encoding="utf-8")
    paths["summary"] = summary_path

    for rec in records:
        for snap in rec.snapshots:
            name = f"snapshot_{rec.problem}_{rec.strategy}_seed{rec.seed}_env{snap.env_index}.csv"
            snap_path = out / name
            m = snap.population_objectives.shape[1]
            lines = ["kind," + ",".join(f"f{j + 1}" for j in range(m))]
            for row in snap.population_objectives:
                lines.append("pop," + ",".join(repr(float(v)) for v in row))
            for row in snap.true_pf_points:
                lines.append("pf," + ",".join(repr(float(v)) for v in row))
            snap_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            paths[name] = snap_path

    manifest = {
        "version": __version__,
        "kernel_backend": BACKEND,
        "config": asdict(config),
        "seeds": [config.base_seed + r for r in range(config.runs)],
        "failures": list(failures),
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    paths["manifest"] = manifest_path
    return paths


# --- configuration files ----------------------------------------------------

_LIST_FIELDS = {"problems", "strategies", "snapshot_envs"}
_CONFIG_FIELDS = {f.name: f for f in fields(ExperimentConfig)}


def parse_config_file(path) -> dict:
    """Flat `key = value` file; '#' starts a comment; unknown keys are errors."""
    mapping: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        mapping[key] = value
    return mapping


def _coerce(name: str, value):
    if not isinstance(value, str):
        if name in _LIST_FIELDS:
            return tuple(value)
        return value
    if name in _LIST_FIELDS:
        items = [item.strip() for item in value.split(",") if item.strip()]
        if name == "snapshot_envs":
            return tuple(int(item) for item in items)
        return tuple(items)
    typ = _CONFIG_FIELDS[name].type
    try:
        if typ == "int":
            return int(value)
        if typ == "float":
            return float(value)
        if typ == "bool":
            lowered = value.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
    except ValueError as exc:
        raise ConfigError(f"config key {name!r}: cannot parse {value!r}") from exc
    return value


def build_config(file_mapping=None, **overrides) -> ExperimentConfig:
    """Config from defaults, then file values, then keyword overrides."""
    merged: dict = {}
    for source in (file_mapping or {}), overrides:
        for key, value in source.items():
            if value is None:
                continue
            if key not in _CONFIG_FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, value)
    return ExperimentConfig(**merged)
