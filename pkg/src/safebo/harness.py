"""Experiment runner: seeded noise, round-loop orchestration, regret metrics,
and CSV output.

Per round the log records the selected action with its true objective/safety
values, a safety-violation flag, and three regret numbers: the gap to the
global safe optimum, the gap to the per-column safe optimum of the selected
column, and the worst gap (over all columns) between the per-column optimum
and the algorithm's current best-guess action for that column.  Cumulative
columns are running prefix sums of the instantaneous ones.

Noise uses one generator per (seed, function), drawn once per round in round
order, so the noise any round sees is independent of how earlier rounds
branched.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .baselines import PREDVAR, SAFEOPT_MC, predvar_step, safeopt_mc_step
from .benchmarks import Benchmark, load_benchmark
from .confidence import BetaSchedule, ConfidenceField
from .errors import ConfigError, ContractError, NumericalError
from .gp import GpModel, Observation
from .grid import safe_boundaries, ucb_maximizers
from .msafeopt import AlgoConfig, Mode, decide

MSAFEOPT_ALGOS = {
    "msafeopt-global": Mode.GLOBAL,
    "msafeopt-per-x": Mode.PER_X,
    "msafeopt-monotone": Mode.MONOTONE,
    "msafeucb": Mode.MSAFEUCB,
}
BASELINE_ALGOS = ("safeopt-mc", "predvar")
ALGO_NAMES = tuple(MSAFEOPT_ALGOS) + BASELINE_ALGOS

DEFAULT_SEEDS = (0, 1, 2, 3, 4)


@dataclass
class ExperimentConfig:
    benchmark: str
    algo: str
    rounds: int
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    growth_scale: float = 1.0
    refined_acq: bool = False
    robust_elim: bool = True
    beta_f: BetaSchedule = dc_field(default_factory=lambda: BetaSchedule.constant(3.0))
    beta_g: BetaSchedule = dc_field(default_factory=lambda: BetaSchedule.constant(3.0))
    resolution: tuple[int, ...] | None = None
    out: str | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ContractError(f"rounds must be >= 1, got {self.rounds}")
        if len(self.seeds) == 0:
            raise ContractError("at least one seed is required")
        if self.algo not in ALGO_NAMES:
            raise ConfigError(f"unknown algorithm {self.algo!r}; expected one of {ALGO_NAMES}")


@dataclass
class RoundRecord:
    t: int
    s_value: float
    x_value: tuple[float, ...]
    f_true: float
    g_true: float
    violation: bool
    r: float
    r_prime: float
    r_x: float
    cum_r: float
    cum_r_prime: float
    cum_r_x: float
    n_surviving: int
    n_expanders: int
    n_maximizers: int
    ms: float


@dataclass
class RegretLog:
    benchmark: str
    algo: str
    seed: int
    x_dim: int
    records: list[RoundRecord] = dc_field(default_factory=list)
    terminated_reason: str | None = None
    aborted: str | None = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records], dtype=float)

    @property
    def num_violations(self) -> int:
        return sum(rec.violation for rec in self.records)


def _algo_config(config: ExperimentConfig, bench: Benchmark) -> AlgoConfig | None:
    mode = MSAFEOPT_ALGOS.get(config.algo)
    if mode is None:
        return None
    return AlgoConfig(
        mode=mode,
        threshold=bench.threshold,
        max_growth_f=bench.max_growth_f,
        min_growth_g=bench.min_growth_g,
        beta_f=config.beta_f,
        beta_g=config.beta_g,
        growth_scale=config.growth_scale,
        refined_acq=config.refined_acq,
        robust_elim=config.robust_elim,
    )


def _run_seed(
    config: ExperimentConfig,
    bench: Benchmark,
    seed: int,
    trace: Callable | None,
) -> RegretLog:
    grid = bench.grid
    spec = bench.spec
    oracle = bench.oracle
    h = bench.threshold
    log = RegretLog(benchmark=config.benchmark, algo=config.algo, seed=seed, x_dim=grid.x_dim)

    rng_f, rng_g = [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(2)]
    model_f = GpModel(kernel=spec.kernel_f, noise_variance=spec.gp_noise_variance)
    model_g = GpModel(kernel=spec.kernel_g, noise_variance=spec.gp_noise_variance)
    algo_cfg = _algo_config(config, bench)
    surviving_prev = None
    cols = np.arange(grid.n_x)
    cum_r = cum_rp = cum_rx = 0.0

    for t in range(1, config.rounds + 1):
        t0 = time.perf_counter()
        eps_f = float(rng_f.standard_normal()) * spec.noise_std_f
        eps_g = float(rng_g.standard_normal()) * spec.noise_std_g

        beta_f = config.beta_f.value_at(t, model_f.empirical_info_gain())
        beta_g = config.beta_g.value_at(t, model_g.empirical_info_gain())
        field_f = ConfidenceField.from_model(model_f, grid, beta_f)
        field_g = ConfidenceField.from_model(model_g, grid, beta_g)

        if algo_cfg is not None:
            decision = decide(field_f, field_g, algo_cfg, t, surviving_prev)
            if decision is None:
                log.terminated_reason = "no eligible actions"
                break
            surviving_prev = decision.state.surviving
            selected = decision.selected
            n_surviving = decision.state.n_surviving
            n_expanders = decision.state.n_expanders
            n_maximizers = decision.state.n_maximizers
        else:
            if config.algo == "safeopt-mc":
                decision = safeopt_mc_step(field_f, field_g, h)
            else:
                decision = predvar_step(field_f, field_g, h)
            if decision is None:
                log.terminated_reason = "no eligible actions"
                break
            selected = decision.selected
            n_surviving = grid.n_x
            n_expanders = decision.n_expanders
            n_maximizers = decision.n_maximizers

        # Best-guess action per column under the shared rule: the safe UCB
        # maximizer at or below the certified boundary (for the boundary-only
        # algorithm, measured on the safety field it actually maintains).
        boundary = safe_boundaries(field_g.ucb, h)
        guess_field = field_g if config.algo == "msafeucb" else field_f
        s_hat = ucb_maximizers(guess_field.ucb, boundary)
        r_x = float((oracle.per_x_value - bench.f_table[s_hat, cols]).max())

        s_idx, x_idx = selected
        f_true = float(bench.f_table[s_idx, x_idx])
        g_true = float(bench.g_table[s_idx, x_idx])
        point = tuple(grid.point(s_idx, x_idx))
        model_f.add_observation(Observation(point, f_true + eps_f))
        model_g.add_observation(Observation(point, g_true + eps_g))

        r = oracle.global_value - f_true
        r_prime = float(oracle.per_x_value[x_idx]) - f_true
        cum_r += r
        cum_rp += r_prime
        cum_rx += r_x
        ms = (time.perf_counter() - t0) * 1e3
        log.records.append(
            RoundRecord(
                t=t,
                s_value=float(grid.s_values[s_idx]),
                x_value=tuple(float(v) for v in grid.x_values[x_idx]),
                f_true=f_true,
                g_true=g_true,
                violation=g_true > h,
                r=r,
                r_prime=r_prime,
                r_x=r_x,
                cum_r=cum_r,
                cum_r_prime=cum_rp,
                cum_r_x=cum_rx,
                n_surviving=n_surviving,
                n_expanders=n_expanders,
                n_maximizers=n_maximizers,
                ms=ms,
            )
        )
        if trace is not None:
            trace(seed, t, decision)
    return log


def run_experiment(config: ExperimentConfig, trace: Callable | None = None) -> list[RegretLog]:
    """Run all seeds of one experiment; the benchmark and its oracle are
    built once and shared.

    A numerical failure aborts only the seed that hit it (the log carries the
    diagnostic); other seeds still run.  `trace(seed, t, decision)` is called
    after every completed round when provided.
    """
    bench = load_benchmark(config.benchmark, config.resolution)
    logs = []
    for seed in config.seeds:
        log = RegretLog(
            benchmark=config.benchmark, algo=config.algo, seed=seed, x_dim=bench.grid.x_dim
        )
        try:
            log = _run_seed(config, bench, seed, trace)
        except NumericalError as exc:
            log.aborted = str(exc)
        logs.append(log)
    return logs


def csv_header(x_dim: int) -> list[str]:
    xs = [f"x{i}" for i in range(x_dim)]
    return (
        ["t", "s"] + xs
        + ["f_true", "g_true", "violation", "r", "r_prime", "r_X", "R", "R_prime", "R_X",
           "n_surviving_x", "n_G", "n_M", "ms"]
    )


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_csv(log: RegretLog, path: str) -> None:
    """One header row plus one row per round; floats carry 17 significant
    digits so a parse round-trips them exactly."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(csv_header(log.x_dim))
            for rec in log.records:
                writer.writerow(
                    [rec.t, _fmt(rec.s_value)]
                    + [_fmt(v) for v in rec.x_value]
                    + [
                        _fmt(rec.f_true),
                        _fmt(rec.g_true),
                        int(rec.violation),
                        _fmt(rec.r),
                        _fmt(rec.r_prime),
                        _fmt(rec.r_x),
                        _fmt(rec.cum_r),
                        _fmt(rec.cum_r_prime),
                        _fmt(rec.cum_r_x),
                        rec.n_surviving,
                        rec.n_expanders,
                        rec.n_maximizers,
                        _fmt(rec.ms),
                    ]
                )
    except OSError as exc:
        raise OSError(f"failed to write log to {path}: {exc}") from exc


def read_csv(path: str) -> dict[str, np.ndarray]:
    """Parse a log written by `write_csv` into a column -> float-array map."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, row)) for row in reader]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
