"""Offline figures from safebo harness CSV logs."""

from .figures import METRICS, PlotJob, plot_regret, plot_samples
from .io import SchemaError, read_oracle, read_run_log

__version__ = "0.1.0"

__all__ = [
    "METRICS",
    "PlotJob",
    "SchemaError",
    "plot_regret",
    "plot_samples",
    "read_oracle",
    "read_run_log",
]
