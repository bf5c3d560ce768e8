"""Safe Bayesian optimization with a monotone safety variable.

The safety function is known to increase along one input coordinate s in
[0, 1] with s = 0 always safe; the objective carries no such structure.
The package provides the confidence-bound algorithm family exploiting that
monotonicity, two baselines, benchmark function pairs with brute-force
oracles, and a seeded experiment harness with three regret metrics.
"""

from .baselines import BaselineDecision, predvar_step, safeopt_mc_step
from .benchmarks import (
    BENCHMARK_NAMES,
    Benchmark,
    BenchmarkSpec,
    OracleSolution,
    estimate_growth_bounds,
    load_benchmark,
    oracle_optima,
    tabulate,
)
from .confidence import BetaSchedule, ConfidenceField
from .errors import ConfigError, ContractError, NumericalError, SafeBoError
from .gp import KernelSpec, GpModel, Observation, gram, kernel_eval
from .grid import (
    GridDomain,
    SafeState,
    build_grid,
    optimistic_boundaries,
    safe_boundaries,
    safe_mask,
    ucb_maximizers,
)
from .harness import (
    ALGO_NAMES,
    ExperimentConfig,
    RegretLog,
    RoundRecord,
    read_csv,
    run_experiment,
    write_csv,
)
from .msafeopt import (
    AlgoConfig,
    Mode,
    RoundDecision,
    acquisition_matrix,
    build_fields,
    decide,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "ALGO_NAMES",
    "AlgoConfig",
    "BENCHMARK_NAMES",
    "BaselineDecision",
    "Benchmark",
    "BenchmarkSpec",
    "BetaSchedule",
    "ConfidenceField",
    "ConfigError",
    "ContractError",
    "ExperimentConfig",
    "GpModel",
    "GridDomain",
    "KernelSpec",
    "Mode",
    "NumericalError",
    "Observation",
    "OracleSolution",
    "RegretLog",
    "RoundDecision",
    "RoundRecord",
    "SafeBoError",
    "SafeState",
    "acquisition_matrix",
    "build_fields",
    "build_grid",
    "decide",
    "estimate_growth_bounds",
    "gram",
    "kernel_eval",
    "load_benchmark",
    "oracle_optima",
    "optimistic_boundaries",
    "predvar_step",
    "read_csv",
    "run_experiment",
    "safe_boundaries",
    "safe_mask",
    "safeopt_mc_step",
    "step",
    "tabulate",
    "ucb_maximizers",
    "write_csv",
]
