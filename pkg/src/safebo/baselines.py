"""Comparison algorithms sharing the confidence-field plumbing.

Both baselines keep the same certified-safe set construction as the main
algorithm (UCB of g at most the threshold, plus the always-safe s = 0 row)
and the same smallest-flat-index tie-break, but neither eliminates columns
nor gates expansion on optimistic objective values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .confidence import ConfidenceField
from .grid import safe_boundaries, safe_mask

SAFEOPT_MC = "safeopt_mc"
PREDVAR = "predvar"


@dataclass
class BaselineDecision:
    selected: tuple[int, int]
    n_expanders: int
    n_maximizers: int


def safeopt_mc_step(
    field_f: ConfidenceField, field_g: ConfidenceField, threshold: float
) -> BaselineDecision | None:
    """Safe-boundary expander / maximizer selection without growth-rate gating.

    Expanders are the boundary actions of every column except those whose
    boundary already covers the whole s range.  Maximizers are the certified
    safe actions whose objective UCB reaches the best safe LCB.  Selection
    maximizes the larger of the two confidence half-widths over the union.
    """
    grid = field_f.grid
    n_s, n_x = grid.shape
    certified = safe_mask(field_g.ucb, threshold)
    boundary = safe_boundaries(field_g.ucb, threshold)

    best_safe_lcb = field_f.lcb[certified].max()
    maximizers = certified & (field_f.ucb >= best_safe_lcb)

    width = np.maximum(field_f.half_width, field_g.half_width)
    acq = np.full((n_s, n_x), -np.inf)
    acq[maximizers] = width[maximizers]
    expander_cols = np.flatnonzero(boundary < n_s - 1)
    acq[boundary[expander_cols], expander_cols] = width[boundary[expander_cols], expander_cols]

    if not np.isfinite(acq).any():
        return None
    flat = int(np.argmax(acq))
    s_sel, x_sel = divmod(flat, n_x)
    return BaselineDecision(
        selected=(int(s_sel), int(x_sel)),
        n_expanders=int(expander_cols.size),
        n_maximizers=int(maximizers.sum()),
    )


def predvar_step(
    field_f: ConfidenceField, field_g: ConfidenceField, threshold: float
) -> BaselineDecision:
    """Pure exploration: maximize the larger confidence half-width over the
    whole certified safe set."""
    n_s, n_x = field_f.grid.shape
    certified = safe_mask(field_g.ucb, threshold)
    width = np.maximum(field_f.half_width, field_g.half_width)
    acq = np.where(certified, width, -np.inf)
    flat = int(np.argmax(acq))
    s_sel, x_sel = divmod(flat, n_x)
    return BaselineDecision(selected=(int(s_sel), int(x_sel)), n_expanders=0, n_maximizers=0)
