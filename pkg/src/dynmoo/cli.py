"""Command-line entry point.

Subcommands: `run` (execute an experiment grid), `summarize` (aggregate a raw
CSV), `snapshot` (population dumps for selected environments), `list` (the
problem and strategy registry). Exit codes: 0 on success, 1 on configuration
errors, 2 on runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict

from .harness import (
    ConfigError,
    EnvRecord,
    RunRecord,
    build_config,
    emit_outputs,
    parse_config_file,
    run_experiment,
    run_single,
    summarize,
    summary_csv_lines,
)
from .kernels import BACKEND
from .problems import list_problems
from .strategies import STRATEGY_NAMES


def _csv_list(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def _int_list(text):
    return [int(item) for item in _csv_list(text)]


def _add_config_flags(parser):
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--problems", type=_csv_list, metavar="CSV-list")
    parser.add_argument("--strategies", type=_csv_list, metavar="CSV-list")
    parser.add_argument("--tau-t", dest="tau_T", type=int, metavar="INT")
    parser.add_argument("--n-t", dest="n_T", type=int, metavar="INT")
    parser.add_argument("--runs", type=int, metavar="INT")
    parser.add_argument("--seed", dest="base_seed", type=int, metavar="INT")
    parser.add_argument("--out", dest="output_dir", metavar="DIR")
    parser.add_argument("--snapshot-envs", dest="snapshot_envs", type=_int_list,
                        metavar="CSV-list")
    parser.add_argument("--npop", type=int, metavar="INT")
    parser.add_argument("--nmem", type=int, metavar="INT")
    parser.add_argument("--d", type=float, metavar="FLOAT")
    parser.add_argument("--n-changes", dest="n_changes", type=int, metavar="INT")
    parser.add_argument("--dim", dest="n_dim", type=int, metavar="INT")
    parser.add_argument("--pf-size", dest="pf_sample_size", type=int, metavar="INT")
    parser.add_argument("--focal", metavar="NAME")
    parser.add_argument("--no-diversity", dest="diversity", action="store_false",
                        default=None, help="disable the uniform-random diversity fill")


_CONFIG_KEYS = (
    "problems", "strategies", "tau_T", "n_T", "runs", "base_seed", "output_dir",
    "snapshot_envs", "npop", "nmem", "d", "n_changes", "n_dim", "pf_sample_size",
    "focal", "diversity",
)


def _config_from_args(args):
    file_mapping = parse_config_file(args.config) if args.config else None
    overrides = {key: getattr(args, key) for key in _CONFIG_KEYS if hasattr(args, key)}
    return build_config(file_mapping, **overrides)


def _cmd_run(args) -> int:
    config = _config_from_args(args)

    def progress(record):
        print(
            f"{record.problem:>6s}  {record.strategy:<9s} seed={record.seed:<4d} "
            f"migd={record.migd:.4f} mhvd={record.mhvd:.4f} "
            f"({record.wall_time_ms / 1000.0:.1f}s)",
            flush=True,
        )

    def failed(failure):
        print(f"FAILED {failure['problem']}/{failure['strategy']}/seed{failure['seed']}: "
              f"{failure['error']}", file=sys.stderr, flush=True)

    records, failures = run_experiment(config, on_record=progress, on_failure=failed)
    if not records:
        print("no cells completed", file=sys.stderr)
        return 2
    rows = summarize(records, focal=config.focal)
    paths = emit_outputs(records, rows, config, failures)
    print(f"raw: {paths['raw']}")
    print(f"summary: {paths['summary']}")
    print(f"manifest: {paths['manifest']}")
    return 0 if not failures else 2


def _records_from_raw(path) -> list[RunRecord]:
    groups: dict[tuple, list[EnvRecord]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["problem"], row["strategy"], int(row["seed"]),
                   int(row["tau_T"]), int(row["n_T"]))
            groups[key].append(
                EnvRecord(int(row["env_index"]), float(row["t"]),
                          float(row["igd"]), float(row["hvd"]))
            )
    records = []
    for (problem, strategy, seed, tau_T, n_T), envs in groups.items():
        envs.sort(key=lambda e: e.env_index)
        migd = sum(e.igd for e in envs) / len(envs)
        mhvd = sum(e.hvd for e in envs) / len(envs)
        records.append(
            RunRecord(problem, strategy, seed, tau_T, n_T, envs, migd, mhvd, 0)
        )
    return records


def _cmd_summarize(args) -> int:
    records = _records_from_raw(args.raw)
    if not records:
        raise ConfigError(f"no rows in {args.raw}")
    rows = summarize(records, focal=args.focal or "FGERS-CPS")
    text = "\n".join(summary_csv_lines(rows)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"summary: {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_snapshot(args) -> int:
    if not args.snapshot_envs:
        raise ConfigError("snapshot requires --snapshot-envs")
    config = _config_from_args(args)
    record = run_single(args.problem, args.strategy, config, config.base_seed)
    paths = emit_outputs([record], summarize([record], focal=config.focal), config)
    for name, path in paths.items():
        if name.startswith("snapshot_"):
            print(path)
    return 0


def _cmd_list(_args) -> int:
    print(f"kernel backend: {BACKEND}")
    print("problems:")
    for prob in list_problems():
        print(f"  {prob.name:<6s} {prob.change_type:<6s} m={prob.m} n={prob.n} "
              f"{prob.linearity}")
    print("strategies:")
    for name in STRATEGY_NAMES:
        print(f"  {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmoo",
        description="Dynamic multi-objective optimization experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute an experiment grid")
    _add_config_flags(run_p)
    run_p.set_defaults(func=_cmd_run)

    sum_p = sub.add_parser("summarize", help="aggregate a raw CSV into a summary table")
    sum_p.add_argument("--raw", required=True, metavar="PATH")
    sum_p.add_argument("--out", metavar="PATH")
    sum_p.add_argument("--focal", metavar="NAME")
    sum_p.set_defaults(func=_cmd_summarize)

    snap_p = sub.add_parser("snapshot", help="dump population/front objectives per environment")
    snap_p.add_argument("--problem", required=True)
    snap_p.add_argument("--strategy", required=True)
    _add_config_flags(snap_p)
    snap_p.set_defaults(func=_cmd_snapshot)

    list_p = sub.add_parser("list", help="show the problem and strategy registry")
    list_p.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, KeyError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
