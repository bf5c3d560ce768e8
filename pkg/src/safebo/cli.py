"""Command-line interface.

Subcommands:
  run       execute one experiment (one benchmark, one algorithm, many seeds)
  oracle    dump the ground-truth per-column optima and safe boundary as CSV
  validate  run the benchmark validity checks (monotone safety values, safe
            s = 0 row, positive minimum growth rate)
  compare   run the selected algorithm plus both baselines side by side

Configuration comes from an optional flat `key = value` file; command-line
flags override file values.  Exit codes: 0 ok, 1 usage error, 2 invalid
configuration or failed validation, 3 numerical failure, 4 safety violation
observed during a run.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .benchmarks import BENCHMARK_NAMES, load_benchmark
from .confidence import BetaSchedule
from .errors import ConfigError, ContractError, NumericalError
from .harness import (
    ALGO_NAMES,
    DEFAULT_SEEDS,
    ExperimentConfig,
    RegretLog,
    run_experiment,
    write_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SAFETY = 4

# Keys accepted in the config file; everything else is rejected loudly.
_CONFIG_KEYS = {
    "benchmark", "algo", "rounds", "seeds", "grid", "c", "refined",
    "robust_elim", "beta", "beta_f", "beta_g", "out",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise _UsageError(message)


def parse_config_file(path: str) -> dict[str, str]:
    """Flat `key = value` file; blank lines and `#` comments are ignored."""
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
                values[key] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise _UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="safebo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "oracle", "validate", "compare"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key = value config file")
        p.add_argument("--benchmark", default=None)
        p.add_argument("--algo", default=None)
        p.add_argument("--rounds", type=int, default=None)
        p.add_argument("--seeds", default=None, help="comma-separated seed list")
        p.add_argument("--grid", default=None, help="comma-separated per-dimension resolution")
        p.add_argument("--c", type=float, default=None, help="growth-rate scale factor")
        p.add_argument("--refined", action="store_true", default=None,
                       help="use the growth-ratio-weighted acquisition")
        p.add_argument("--out", default=None, help="output file or directory")
    return parser


def _merge_config(args) -> dict:
    merged: dict = {}
    if args.config:
        merged.update(parse_config_file(args.config))
    for key, value in (
        ("benchmark", args.benchmark),
        ("algo", args.algo),
        ("rounds", args.rounds),
        ("seeds", args.seeds),
        ("grid", args.grid),
        ("c", args.c),
        ("refined", args.refined),
        ("out", args.out),
    ):
        if value is not None:
            merged[key] = value
    return merged


def _beta_schedules(merged: dict) -> tuple[BetaSchedule, BetaSchedule]:
    base = float(merged.get("beta", 3.0))
    beta_f = float(merged.get("beta_f", base))
    beta_g = float(merged.get("beta_g", base))
    return BetaSchedule.constant(beta_f), BetaSchedule.constant(beta_g)


def _experiment_config(merged: dict, algo: str | None = None) -> ExperimentConfig:
    benchmark = merged.get("benchmark")
    if benchmark is None:
        raise _UsageError("a benchmark is required (flag --benchmark or config file)")
    if benchmark not in BENCHMARK_NAMES:
        raise _UsageError(f"unknown benchmark {benchmark!r}; expected one of {BENCHMARK_NAMES}")
    algo = algo if algo is not None else merged.get("algo")
    if algo is None:
        raise _UsageError("an algorithm is required (flag --algo or config file)")
    if algo not in ALGO_NAMES:
        raise _UsageError(f"unknown algorithm {algo!r}; expected one of {ALGO_NAMES}")
    rounds = int(merged.get("rounds", 100))
    if rounds < 1:
        raise _UsageError(f"rounds must be >= 1, got {rounds}")
    seeds = merged.get("seeds", DEFAULT_SEEDS)
    if isinstance(seeds, str):
        seeds = _parse_int_list(seeds)
    if not seeds:
        raise _UsageError("at least one seed is required")
    grid = merged.get("grid")
    if isinstance(grid, str):
        grid = _parse_int_list(grid)
    beta_f, beta_g = _beta_schedules(merged)
    refined = merged.get("refined", False)
    if isinstance(refined, str):
        refined = _parse_bool(refined)
    robust = merged.get("robust_elim", True)
    if isinstance(robust, str):
        robust = _parse_bool(robust)
    return ExperimentConfig(
        benchmark=benchmark,
        algo=algo,
        rounds=rounds,
        seeds=tuple(seeds),
        growth_scale=float(merged.get("c", 1.0)),
        refined_acq=bool(refined),
        robust_elim=bool(robust),
        beta_f=beta_f,
        beta_g=beta_g,
        resolution=tuple(grid) if grid else None,
        out=merged.get("out"),
    )


def _out_paths(config: ExperimentConfig, algo: str) -> list[str]:
    out = config.out or "safebo_out"
    if out.endswith(".csv") and len(config.seeds) == 1:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return [out]
    os.makedirs(out, exist_ok=True)
    return [
        os.path.join(out, f"{config.benchmark}_{algo}_seed{seed}.csv")
        for seed in config.seeds
    ]


def _write_logs(config: ExperimentConfig, algo: str, logs: list[RegretLog]) -> list[str]:
    paths = _out_paths(config, algo)
    for log, path in zip(logs, paths):
        write_csv(log, path)
    return paths


def _report_runs(logs: list[RegretLog]) -> tuple[int, int]:
    violations = sum(log.num_violations for log in logs)
    aborted = sum(1 for log in logs if log.aborted)
    for log in logs:
        if log.aborted:
            print(f"seed {log.seed}: aborted ({log.aborted})", file=sys.stderr)
        elif log.terminated_reason:
            print(f"seed {log.seed}: ended early after {len(log.records)} rounds "
                  f"({log.terminated_reason})")
    return violations, aborted


def _summary_line(algo: str, logs: list[RegretLog]) -> str:
    finals = []
    for log in logs:
        if log.records and not log.aborted:
            rec = log.records[-1]
            finals.append((rec.cum_r / rec.t, rec.cum_r_prime / rec.t, rec.cum_r_x / rec.t))
    if not finals:
        return f"{algo}: no completed seeds"
    arr = np.array(finals)
    return (f"{algo}: mean final R/T={arr[:, 0].mean():.6g} "
            f"R'/T={arr[:, 1].mean():.6g} R^X/T={arr[:, 2].mean():.6g} "
            f"({len(finals)} seeds)")


def _cmd_run(merged: dict) -> int:
    config = _experiment_config(merged)
    logs = run_experiment(config)
    paths = _write_logs(config, config.algo, logs)
    print(f"wrote {len(paths)} log file(s) to {os.path.dirname(paths[0]) or '.'}")
    print(_summary_line(config.algo, logs))
    violations, aborted = _report_runs(logs)
    if violations:
        print(f"SAFETY VIOLATIONS: {violations} unsafe action(s) observed", file=sys.stderr)
        return EXIT_SAFETY
    if aborted:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_compare(merged: dict) -> int:
    config = _experiment_config(merged, algo=merged.get("algo", "msafeopt-global"))
    algos = [config.algo] + [a for a in ("safeopt-mc", "predvar") if a != config.algo]
    total_violations = 0
    total_aborted = 0
    for algo in algos:
        algo_config = ExperimentConfig(
            benchmark=config.benchmark,
            algo=algo,
            rounds=config.rounds,
            seeds=config.seeds,
            growth_scale=config.growth_scale,
            refined_acq=config.refined_acq,
            robust_elim=config.robust_elim,
            beta_f=config.beta_f,
            beta_g=config.beta_g,
            resolution=config.resolution,
            out=config.out,
        )
        logs = run_experiment(algo_config)
        _write_logs(algo_config, algo, logs)
        print(_summary_line(algo, logs))
        violations, aborted = _report_runs(logs)
        total_violations += violations
        total_aborted += aborted
    if total_violations:
        print(f"SAFETY VIOLATIONS: {total_violations} unsafe action(s) observed",
              file=sys.stderr)
        return EXIT_SAFETY
    if total_aborted:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_validate(merged: dict) -> int:
    benchmark = merged.get("benchmark")
    if benchmark is None:
        raise _UsageError("validate requires --benchmark")
    if benchmark not in BENCHMARK_NAMES:
        raise _UsageError(f"unknown benchmark {benchmark!r}; expected one of {BENCHMARK_NAMES}")
    grid = merged.get("grid")
    if isinstance(grid, str):
        grid = _parse_int_list(grid)
    bench = load_benchmark(benchmark, tuple(grid) if grid else None)
    safe_fraction = float(bench.oracle.safe.mean())
    print(f"{benchmark}: ok (max_growth_f={bench.max_growth_f:.6g}, "
          f"min_growth_g={bench.min_growth_g:.6g}, safe fraction={safe_fraction:.4f})")
    return EXIT_OK


def _cmd_oracle(merged: dict) -> int:
    benchmark = merged.get("benchmark")
    if benchmark is None:
        raise _UsageError("oracle requires --benchmark")
    if benchmark not in BENCHMARK_NAMES:
        raise _UsageError(f"unknown benchmark {benchmark!r}; expected one of {BENCHMARK_NAMES}")
    grid = merged.get("grid")
    if isinstance(grid, str):
        grid = _parse_int_list(grid)
    bench = load_benchmark(benchmark, tuple(grid) if grid else None)
    oracle = bench.oracle
    out = merged.get("out") or f"{benchmark}_oracle.csv"
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)

    boundary_idx = oracle.safe.shape[0] - 1 - np.argmax(oracle.safe[::-1, :], axis=0)
    with open(out, "w") as fh:
        xs = ",".join(f"x{i}" for i in range(bench.grid.x_dim))
        fh.write(f"x_index,{xs},s_boundary,s_opt,f_opt\n")
        for j in range(bench.grid.n_x):
            coords = ",".join(format(v, ".17g") for v in bench.grid.x_values[j])
            fh.write(
                f"{j},{coords},{format(bench.grid.s_values[boundary_idx[j]], '.17g')},"
                f"{format(bench.grid.s_values[oracle.per_x_s[j]], '.17g')},"
                f"{format(oracle.per_x_value[j], '.17g')}\n"
            )
    s_star, x_star = oracle.global_point
    print(f"wrote {out}; global safe optimum f={oracle.global_value:.6g} at "
          f"s={bench.grid.s_values[s_star]:.6g}, x={tuple(bench.grid.x_values[x_star])}")
    return EXIT_OK


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        merged = _merge_config(args)
        if args.command == "run":
            return _cmd_run(merged)
        if args.command == "compare":
            return _cmd_compare(merged)
        if args.command == "validate":
            return _cmd_validate(merged)
        return _cmd_oracle(merged)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(cli_main())
