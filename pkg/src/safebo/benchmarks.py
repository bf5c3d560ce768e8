"""Benchmark objective/safety pairs, the pendulum episode simulator, and
brute-force grid oracles.

Every benchmark exposes a deterministic vectorized evaluator mapping grid
points (s, x...) to (objective, safety) values.  Observation noise is the
harness's job; evaluators are pure.  A loaded benchmark validates the safety
assumptions on its own grid before it can be used: the safety function must
be nondecreasing in s at every x column, the s = 0 row must be safe, and the
minimum growth rate along s must be strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import ConfigError
from .gp import MATERN52, KernelSpec
from .grid import GridDomain, build_grid

CLINICAL_TRIAL = "clinical_trial"
SYNTHETIC_2D = "synthetic_2d"
SYNTHETIC_3D = "synthetic_3d"
PENDULUM = "pendulum"

BENCHMARK_NAMES = (CLINICAL_TRIAL, SYNTHETIC_2D, SYNTHETIC_3D, PENDULUM)


def eval_clinical(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Logistic dose-efficacy / dose-toxicity pair on [0,1] x [0,2].

    Efficacy peaks at an intermediate dose combination; toxicity increases
    monotonically in both doses, so either dose can serve as the safety
    variable (here: the first).
    """
    d1, d2 = points[:, 0], points[:, 1]
    f = 1.0 / (1.0 + np.exp(1.0 - 2.0 * d1 - d2 + 4.0 * d1**2 + d2**2))
    g = 1.0 / (1.0 + np.exp(-2.0 * d1 - d2))
    return f, g


def eval_synthetic_2d(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rescaled Branin-style objective with an oscillatory safety function
    linear in s, on [0,1]^2."""
    s, x = points[:, 0], points[:, 1]
    alpha = 1.0 / 51.95
    delta = -44.81
    b = 5.1 / (4.0 * np.pi**2)
    c = 5.0 / np.pi
    tt = 1.0 / (8.0 * np.pi)
    f = alpha * ((x - b * s**2 + c * s - 6.0) ** 2 + 10.0 * (1.0 - tt) * np.cos(s) + delta)
    y = x + 1.0 / 3.0
    g = 2.0 * s * (np.exp(y) * np.sin(10.0 * y) + np.sin(5.0 * y) + 5.0) / 3.0
    return f, g


# Hartmann 4x3 constants; the value surface has its global minimum of about
# -3.86278 near (0.1146, 0.5556, 0.8525).
_HARTMANN_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMANN_P = 1e-4 * np.array(
    [
        [3689.0, 1170.0, 2673.0],
        [4699.0, 4387.0, 7470.0],
        [1091.0, 8732.0, 5547.0],
        [381.0, 5743.0, 8828.0],
    ]
)
_HARTMANN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])


def hartmann3(points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(points)
    inner = ((points[:, None, :] - _HARTMANN_P[None, :, :]) ** 2 * _HARTMANN_A[None, :, :]).sum(-1)
    return -(_HARTMANN_ALPHA[None, :] * np.exp(-inner)).sum(-1)


def eval_synthetic_3d(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hartmann objective with a polynomial safety function on [0,1]^3."""
    f = hartmann3(points)
    g = points[:, 0] + points[:, 1] ** 2 + points[:, 2] ** 3
    return f, g


# Pendulum constants.  The swing-up episode applies torque 40*s during the
# first control step only, starting at rest from a hanging-side angle, and
# runs 100 control steps of 0.05 s.  Integration uses semi-implicit Euler
# (velocity first) at a finer internal step: sampling |angular velocity| only
# at the 100 control boundaries aliases the oscillation peaks badly enough
# to break monotonicity of the safety value in s on a fine grid, so the
# safety value is the maximum over all integration substeps instead.
_PEND_GRAVITY = 10.0
_PEND_MASS = 1.0
_PEND_LENGTH = 1.0
_PEND_CTRL_DT = 0.05
_PEND_STEPS = 100
_PEND_SUBSTEPS = 25
_PEND_TORQUE_SCALE = 40.0

PENDULUM_X_RANGE = (-2.0 * np.pi + np.pi / 36.0, -np.pi - np.pi / 36.0)


def eval_pendulum(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Swing-up episodes for a batch of (torque fraction, initial angle)
    points; returns (best reward over the episode, max |angular velocity|)."""
    s = np.asarray(points[:, 0], dtype=float)
    x = np.asarray(points[:, 1], dtype=float)
    dt = _PEND_CTRL_DT / _PEND_SUBSTEPS
    accel_scale = 3.0 * _PEND_GRAVITY / (2.0 * _PEND_LENGTH)
    torque_gain = 3.0 / (_PEND_MASS * _PEND_LENGTH**2)

    th = x.copy()
    thd = np.zeros_like(th)
    thd_up = np.full_like(th, np.nan)
    g = np.zeros_like(th)
    f = np.full_like(th, -np.inf)
    for n in range(1, _PEND_STEPS + 1):
        u = _PEND_TORQUE_SCALE * s if n == 1 else 0.0
        for _ in range(_PEND_SUBSTEPS):
            thd = thd + (accel_scale * np.sin(th) + torque_gain * u) * dt
            prev = th
            th = th + thd * dt
            np.maximum(g, np.abs(thd), out=g)
            crossing = np.isnan(thd_up) & (prev <= 0.0) & (th > 0.0)
            thd_up = np.where(crossing, thd, thd_up)
        fn = np.where(th <= 0.0, -(th**2) - thd**2 / 10.0 - s**2 / 1000.0, -thd_up)
        np.maximum(f, fn, out=f)
    return f, g


@dataclass(frozen=True)
class BenchmarkSpec:
    """Declarative description of one benchmark problem."""

    name: str
    box: tuple[tuple[float, float], ...]
    default_resolution: tuple[int, ...]
    threshold: float
    noise_std_f: float
    noise_std_g: float
    gp_noise_variance: float
    kernel_f: KernelSpec
    kernel_g: KernelSpec
    evaluate: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def _spec(name, box, res, threshold, noise_std, gp_noise, variance, lengthscales, evaluate):
    kernel = KernelSpec(family=MATERN52, variance=variance, lengthscales=lengthscales)
    return BenchmarkSpec(
        name=name,
        box=box,
        default_resolution=res,
        threshold=threshold,
        noise_std_f=noise_std,
        noise_std_g=noise_std,
        gp_noise_variance=gp_noise,
        kernel_f=kernel,
        kernel_g=kernel,
        evaluate=evaluate,
    )


# Kernel hyperparameters are fixed (no training), chosen per benchmark so the
# fixed-parameter runs reproduce the qualitative regret behavior at desk-scale
# grids: the toxicity surface is very smooth in the co-dose direction, so the
# clinical kernel carries a long second lengthscale and a sub-unit variance;
# the remaining benchmarks keep variance 1 (9 for the rougher 2D pair) with
# 0.2 lengthscales.
_SPECS = {
    CLINICAL_TRIAL: _spec(
        CLINICAL_TRIAL, ((0.0, 1.0), (0.0, 2.0)), (200, 200), 0.94, 0.0, 1e-5,
        0.15, (0.6, 2.0), eval_clinical,
    ),
    SYNTHETIC_2D: _spec(
        SYNTHETIC_2D, ((0.0, 1.0), (0.0, 1.0)), (200, 200), 2.0, 0.0, 1e-5,
        9.0, (0.2, 0.2), eval_synthetic_2d,
    ),
    SYNTHETIC_3D: _spec(
        SYNTHETIC_3D, ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)), (75, 75, 75), 2.0, 0.0, 1e-5,
        1.0, (0.2, 0.2, 0.2), eval_synthetic_3d,
    ),
    PENDULUM: _spec(
        PENDULUM, ((0.0, 1.0), PENDULUM_X_RANGE), (100, 100), 9.0, float(np.sqrt(0.05)), 0.05,
        1.0, (0.2, 0.2), eval_pendulum,
    ),
}


def benchmark_spec(name: str) -> BenchmarkSpec:
    try:
        return _SPECS[name]
    except KeyError:
        raise ConfigError(f"unknown benchmark {name!r}; expected one of {BENCHMARK_NAMES}") from None


def tabulate(spec: BenchmarkSpec, grid: GridDomain) -> tuple[np.ndarray, np.ndarray]:
    """True objective and safety tables over the grid, shape (n_s, n_x)."""
    f, g = spec.evaluate(grid.points())
    return f.reshape(grid.shape), g.reshape(grid.shape)


def estimate_growth_bounds(
    f_table: np.ndarray, g_table: np.ndarray, s_values: np.ndarray
) -> tuple[float, float]:
    """Max growth rate of the objective and min growth rate of the safety
    function along s, from adjacent-row finite differences over the grid."""
    ds = np.diff(s_values)[:, None]
    max_growth_f = max(float((np.diff(f_table, axis=0) / ds).max()), 0.0)
    min_growth_g = float((np.diff(g_table, axis=0) / ds).min())
    if not min_growth_g > 0:
        raise ConfigError(
            f"safety function min growth along s is {min_growth_g:.3g}; must be positive"
        )
    return max_growth_f, min_growth_g


@dataclass(frozen=True)
class OracleSolution:
    """Ground-truth optima over the grid: global safe argmax and per-column
    safe argmax of the objective, plus the true safe mask."""

    safe: np.ndarray  # bool (n_s, n_x)
    per_x_s: np.ndarray  # int (n_x,)
    per_x_value: np.ndarray  # float (n_x,)
    global_point: tuple[int, int]
    global_value: float


def oracle_optima(f_table: np.ndarray, g_table: np.ndarray, threshold: float) -> OracleSolution:
    """Exhaustive scan for the safe optima; ties break to the smallest index."""
    safe = g_table <= threshold
    assert safe[0, :].all(), "the s = 0 row must be safe; benchmark invariant violated"
    masked = np.where(safe, f_table, -np.inf)
    per_x_s = np.argmax(masked, axis=0)
    per_x_value = masked[per_x_s, np.arange(masked.shape[1])]
    flat = int(np.argmax(masked))
    global_point = (flat // masked.shape[1], flat % masked.shape[1])
    return OracleSolution(
        safe=safe,
        per_x_s=per_x_s,
        per_x_value=per_x_value,
        global_point=global_point,
        global_value=float(masked[global_point]),
    )


@dataclass
class Benchmark:
    """A spec bound to a concrete grid, with truth tables, growth bounds and
    the construction-time validity checks already run."""

    spec: BenchmarkSpec
    grid: GridDomain
    f_table: np.ndarray
    g_table: np.ndarray
    max_growth_f: float
    min_growth_g: float

    @property
    def threshold(self) -> float:
        return self.spec.threshold

    @cached_property
    def oracle(self) -> OracleSolution:
        return oracle_optima(self.f_table, self.g_table, self.threshold)


def load_benchmark(name: str, resolution: tuple[int, ...] | None = None) -> Benchmark:
    """Build a benchmark on its grid and verify the safety assumptions.

    Raises ConfigError if the safety function is not nondecreasing in s at
    every column, the s = 0 row is not safe, or the minimum growth rate is
    not strictly positive on the grid.
    """
    spec = benchmark_spec(name)
    res = tuple(resolution) if resolution is not None else spec.default_resolution
    if len(res) != len(spec.box):
        raise ConfigError(
            f"{name} needs {len(spec.box)} resolution entries, got {len(res)}"
        )
    grid = build_grid(list(spec.box), list(res))
    f_table, g_table = tabulate(spec, grid)

    if np.any(np.diff(g_table, axis=0) < 0):
        raise ConfigError(f"{name}: safety values decrease along s somewhere on the grid")
    unsafe_base = g_table[0, :] > spec.threshold
    if unsafe_base.any():
        raise ConfigError(
            f"{name}: s = 0 row exceeds the threshold at {int(unsafe_base.sum())} columns"
        )
    max_growth_f, min_growth_g = estimate_growth_bounds(f_table, g_table, grid.s_values)
    return Benchmark(
        spec=spec,
        grid=grid,
        f_table=f_table,
        g_table=g_table,
        max_growth_f=max_growth_f,
        min_growth_g=min_growth_g,
    )
