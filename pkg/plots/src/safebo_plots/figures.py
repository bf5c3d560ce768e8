"""Figure builders: normalized-regret curves and sampled-action maps.

Both functions save to the job's output path and return the matplotlib
figure so tests can inspect the rendered content.  Inputs are read-only and
rendering is deterministic, so reruns overwrite the output with identical
content.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_oracle, read_run_log

# cumulative metric column -> instantaneous companion shown as markers
METRICS = {"R": "r", "R_prime": "r_prime", "R_X": "r_X"}


@dataclass
class PlotJob:
    """Inputs for one figure: run CSVs grouped per algorithm (one per seed),
    the metric to draw, the output image path, and optionally an oracle CSV
    for boundary overlays."""

    inputs: dict[str, list[str]] = field(default_factory=dict)
    metric: str = "R"
    out: str = "figure.png"
    oracle: str | None = None


def _load_group(paths: list[str]) -> list[dict[str, np.ndarray]]:
    if not paths:
        raise SchemaError("an algorithm group has no input files")
    runs = [read_run_log(p) for p in paths]
    dims = {run["x_dim"] for run in runs}
    if len(dims) != 1:
        raise SchemaError(f"mixed x dimensions across inputs: {sorted(dims)}")
    return runs


def plot_regret(job: PlotJob):
    """Mean metric/t curve per algorithm with std error bars across seeds and
    the mean instantaneous values as markers."""
    if job.metric not in METRICS:
        raise SchemaError(f"unknown metric {job.metric!r}; expected one of {list(METRICS)}")
    inst_col = METRICS[job.metric]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for idx, (label, paths) in enumerate(job.inputs.items()):
        runs = _load_group(paths)
        horizon = min(len(run["t"]) for run in runs)
        if horizon == 0:
            raise SchemaError(f"{label}: no rounds logged")
        t = runs[0]["t"][:horizon]
        normalized = np.stack([run[job.metric][:horizon] / t for run in runs])
        instantaneous = np.stack([run[inst_col][:horizon] for run in runs])
        color = colors[idx % len(colors)]
        ax.plot(t, normalized.mean(axis=0), label=label, color=color)
        if len(runs) > 1:
            ax.errorbar(
                t[::5], normalized.mean(axis=0)[::5], yerr=normalized.std(axis=0)[::5],
                fmt="none", ecolor=color, alpha=0.5, capsize=2, label="_nolegend_",
            )
        ax.plot(t, instantaneous.mean(axis=0), linestyle="none", marker=".",
                markersize=3, alpha=0.4, color=color, label="_nolegend_")
    ax.set_xlabel("round")
    ax.set_ylabel(f"{job.metric} / t")
    ax.legend()
    fig.tight_layout()
    fig.savefig(job.out)
    plt.close(fig)
    return fig


def plot_samples(job: PlotJob):
    """Sampled actions colored by round over the (x, s) plane, with the true
    safe boundary (from the oracle dump) in red and the highest sampled s per
    column, the run's discovered boundary, in blue."""
    if job.oracle is None:
        raise SchemaError("the sampled-actions plot requires an oracle CSV")
    oracle = read_oracle(job.oracle)
    if oracle["x_dim"] != 1:
        raise SchemaError("sampled-action maps are only drawn for one-dimensional x")
    paths = [p for group in job.inputs.values() for p in group]
    if len(paths) != 1:
        raise SchemaError(f"expected exactly one run log, got {len(paths)}")
    run = read_run_log(paths[0])
    if run["x_dim"] != 1:
        raise SchemaError("sampled-action maps are only drawn for one-dimensional x")
    xs = run["x0"]
    grid_x = oracle["x0"]
    if xs.size:
        nearest = np.abs(xs[:, None] - grid_x[None, :]).min(axis=1)
        if nearest.max() > 1e-9:
            raise SchemaError("run log samples do not lie on the oracle's x grid")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(grid_x, oracle["s_boundary"], color="red", label="true safe boundary")
    if xs.size:
        scatter = ax.scatter(xs, run["s"], c=run["t"], cmap="viridis", s=14,
                             label="sampled actions")
        fig.colorbar(scatter, ax=ax, label="round")
        discovered_x = np.unique(xs)
        discovered_s = np.array([run["s"][xs == v].max() for v in discovered_x])
        ax.plot(discovered_x, discovered_s, color="blue", marker="o", markersize=3,
                label="discovered boundary")
    ax.set_xlabel("x")
    ax.set_ylabel("s")
    ax.legend()
    fig.tight_layout()
    fig.savefig(job.out)
    plt.close(fig)
    return fig
