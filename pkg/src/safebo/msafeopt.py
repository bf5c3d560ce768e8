"""Safe-exploration round loop with confidence-bound elimination and expansion.

One round proceeds as: build confidence fields for the objective f and the
safety function g -> eliminate provably suboptimal x columns -> per surviving
column find the certified safe boundary, the optimistic boundary, and whether
expanding past the boundary could still beat the best lower-bounded safe
value -> assemble the expander and maximizer action sets -> pick the action
maximizing the uncertainty-based acquisition, smallest flat index on ties.

Four modes share the loop and differ in the elimination / expansion /
acquisition rules:

* GLOBAL     - maximize f over the whole domain; eliminates x columns whose
               optimistic value (even after expansion) cannot beat the best
               pessimistic safe value anywhere.
* PER_X      - find the best safe s for every x; never eliminates, and the
               expansion test compares only against the same column.
* MONOTONE   - f is also monotone in s, so the optimum sits on the safe
               boundary: no maximizer set, expansion always on, elimination
               uses the optimistic-expansion test alone.
* MSAFEUCB   - boundary tracking driven by the safety function only:
               no elimination, expander set excludes columns whose boundary
               already reached s = 1, acquisition uses the g-uncertainty.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np

from .confidence import BetaSchedule, ConfidenceField
from .errors import ConfigError
from .gp import GpModel
from .grid import (
    GridDomain,
    SafeState,
    optimistic_boundaries,
    safe_boundaries,
    safe_mask,
    ucb_maximizers,
)

EXPANDER = "expander"
MAXIMIZER = "maximizer"


class Mode(enum.Enum):
    GLOBAL = "global"
    PER_X = "per_x"
    MONOTONE = "monotone"
    MSAFEUCB = "msafeucb"


@dataclass
class AlgoConfig:
    """Algorithm parameters.

    `max_growth_f` bounds how fast f can grow along s; `min_growth_g` bounds
    how slowly g can grow along s.  `growth_scale` rescales both once at
    construction (max_growth_f *= scale, min_growth_g /= scale): values above
    1 make elimination and expansion more cautious.  `robust_elim` re-runs
    elimination from the full column set each round instead of shrinking a
    surviving set permanently, so a column eliminated by an early, loose
    bound can be recovered later.
    """

    mode: Mode
    threshold: float
    max_growth_f: float
    min_growth_g: float
    beta_f: BetaSchedule = dc_field(default_factory=lambda: BetaSchedule.constant(3.0))
    beta_g: BetaSchedule = dc_field(default_factory=lambda: BetaSchedule.constant(3.0))
    growth_scale: float = 1.0
    refined_acq: bool = False
    robust_elim: bool = True

    def __post_init__(self):
        if isinstance(self.mode, str):
            self.mode = Mode(self.mode)
        if not self.growth_scale > 0:
            raise ConfigError(f"growth_scale must be positive, got {self.growth_scale}")
        if self.max_growth_f < 0:
            raise ConfigError(f"max_growth_f must be nonnegative, got {self.max_growth_f}")
        if not self.min_growth_g > 0:
            raise ConfigError(f"min_growth_g must be positive, got {self.min_growth_g}")
        self.max_growth_f = self.max_growth_f * self.growth_scale
        self.min_growth_g = self.min_growth_g / self.growth_scale


@dataclass
class RoundDecision:
    """Outcome of one round: the selected grid action, which set it came
    from, its acquisition value, and the geometry snapshot."""

    selected: tuple[int, int]
    selected_from: str
    acq_value: float
    state: SafeState


def acquisition_matrix(
    field_f: ConfidenceField,
    field_g: ConfidenceField,
    config: AlgoConfig,
    boundary: np.ndarray,
    maximizer: np.ndarray,
    in_expander: np.ndarray,
    in_maximizer: np.ndarray,
) -> np.ndarray:
    """Acquisition value per grid point; -inf outside the eligible sets.

    Expander actions score the larger confidence half-width of the two
    functions (objective half-width vs growth-ratio-weighted safety
    half-width when the refined flag is set; safety half-width alone in
    MSAFEUCB mode).  Maximizer actions that are not also expander actions
    score the objective half-width.  Everything else scores 0; selection
    additionally restricts to the expander/maximizer sets.
    """
    n_s, n_x = field_f.grid.shape
    cols = np.arange(n_x)
    bonus_f = field_f.half_width
    bonus_g = field_g.half_width
    if config.mode is Mode.MSAFEUCB:
        expander_value = bonus_g[boundary, cols]
    elif config.refined_acq:
        ratio = config.max_growth_f / config.min_growth_g
        expander_value = np.maximum(bonus_f[boundary, cols], ratio * bonus_g[boundary, cols])
    else:
        expander_value = np.maximum(bonus_f[boundary, cols], bonus_g[boundary, cols])

    acq = np.zeros((n_s, n_x))
    mx = np.flatnonzero(in_maximizer)
    acq[maximizer[mx], mx] = bonus_f[maximizer[mx], mx]
    # Expander values written last: when a maximizer coincides with an
    # expander action, the expander branch of the acquisition applies.
    ex = np.flatnonzero(in_expander)
    acq[boundary[ex], ex] = expander_value[ex]
    return acq


def decide(
    field_f: ConfidenceField,
    field_g: ConfidenceField,
    config: AlgoConfig,
    t: int,
    surviving_prev: np.ndarray | None = None,
) -> RoundDecision | None:
    """Run one round's geometry and selection on prebuilt confidence fields.

    Returns None when no action is eligible (every column eliminated, or in
    MSAFEUCB mode every boundary at s = 1); the caller ends the run.
    """
    grid = field_f.grid
    n_s, n_x = grid.shape
    h = config.threshold
    mode = config.mode

    certified = safe_mask(field_g.ucb, h)
    # Best pessimistic value over everything currently known safe; the s = 0
    # row is never empty, so the max is well defined.
    best_safe_lcb = float(field_f.lcb[certified].max())

    if surviving_prev is None:
        surviving_prev = np.ones(n_x, dtype=bool)
    candidates = np.ones(n_x, dtype=bool) if config.robust_elim else surviving_prev.copy()

    boundary = safe_boundaries(field_g.ucb, h)
    optimistic = optimistic_boundaries(
        field_g.lcb, boundary, config.min_growth_g, h, grid.s_values
    )
    cols = np.arange(n_x)
    s_b = grid.s_values[boundary]
    ucb_at_boundary = field_f.ucb[boundary, cols]
    reach = ucb_at_boundary + config.max_growth_f * (optimistic - s_b)

    cummax_ucb_f = np.maximum.accumulate(field_f.ucb, axis=0)
    max_ucb_below = cummax_ucb_f[boundary, cols]

    if mode is Mode.GLOBAL:
        elim = (max_ucb_below < best_safe_lcb) & (reach <= best_safe_lcb)
    elif mode is Mode.MONOTONE:
        elim = reach <= best_safe_lcb
    else:  # PER_X and MSAFEUCB never eliminate
        elim = np.zeros(n_x, dtype=bool)
    surviving = candidates & ~elim

    if mode is Mode.GLOBAL:
        expd = reach > best_safe_lcb
    elif mode is Mode.PER_X:
        cummax_lcb_f = np.maximum.accumulate(field_f.lcb, axis=0)
        expd = reach > cummax_lcb_f[boundary, cols]
    elif mode is Mode.MONOTONE:
        expd = np.ones(n_x, dtype=bool)
    else:  # MSAFEUCB: a boundary already at s = 1 cannot expand
        expd = boundary < n_s - 1
    in_expander = surviving & expd

    if mode is Mode.MSAFEUCB:
        maximizer = ucb_maximizers(field_g.ucb, boundary)
    else:
        maximizer = ucb_maximizers(field_f.ucb, boundary)
    builds_maximizer_set = mode in (Mode.GLOBAL, Mode.PER_X)
    in_maximizer = surviving.copy() if builds_maximizer_set else np.zeros(n_x, dtype=bool)

    if not in_expander.any() and not in_maximizer.any():
        return None

    acq = acquisition_matrix(
        field_f, field_g, config, boundary, maximizer, in_expander, in_maximizer
    )
    eligible = np.zeros((n_s, n_x), dtype=bool)
    mx = np.flatnonzero(in_maximizer)
    eligible[maximizer[mx], mx] = True
    ex = np.flatnonzero(in_expander)
    eligible[boundary[ex], ex] = True
    flat = int(np.argmax(np.where(eligible, acq, -np.inf)))
    s_sel, x_sel = divmod(flat, n_x)
    origin = EXPANDER if (in_expander[x_sel] and boundary[x_sel] == s_sel) else MAXIMIZER

    state = SafeState(
        t=t,
        surviving=surviving,
        boundary=boundary,
        optimistic=optimistic,
        maximizer=maximizer,
        in_expander=in_expander,
        in_maximizer=in_maximizer,
    )
    return RoundDecision(
        selected=(int(s_sel), int(x_sel)),
        selected_from=origin,
        acq_value=float(acq[s_sel, x_sel]),
        state=state,
    )


def build_fields(
    model_f: GpModel,
    model_g: GpModel,
    grid: GridDomain,
    beta_f: BetaSchedule,
    beta_g: BetaSchedule,
    t: int,
) -> tuple[ConfidenceField, ConfidenceField]:
    """Dense confidence fields for both functions at round t."""
    bf = beta_f.value_at(t, model_f.empirical_info_gain())
    bg = beta_g.value_at(t, model_g.empirical_info_gain())
    return (
        ConfidenceField.from_model(model_f, grid, bf),
        ConfidenceField.from_model(model_g, grid, bg),
    )


def step(
    state: SafeState | None,
    model_f: GpModel,
    model_g: GpModel,
    config: AlgoConfig,
    grid: GridDomain,
) -> RoundDecision | None:
    """Advance one round from the previous state (None before round 1)."""
    t = 1 if state is None else state.t + 1
    field_f, field_g = build_fields(model_f, model_g, grid, config.beta_f, config.beta_g, t)
    surviving_prev = None if state is None else state.surviving
    return decide(field_f, field_g, config, t, surviving_prev)
