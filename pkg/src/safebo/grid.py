"""Grid discretization of the action domain and per-round safe-set geometry.

The domain is [0, 1] x X, where the first coordinate is the safety variable s
(the safety function is monotone in it and s = 0 is always safe) and X is a
box in up to a few dimensions.  Everything downstream works on the grid:
per-point fields are (n_s, n_x) arrays and actions are (s_index, x_index)
pairs.  The canonical flat ordering is s-major (flat = s_index * n_x +
x_index); all argmax tie-breaks resolve to the smallest flat index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "GridDomain",
    "build_grid",
    "safe_mask",
    "safe_boundaries",
    "optimistic_boundaries",
    "ucb_maximizers",
    "SafeState",
]


@dataclass(frozen=True)
class GridDomain:
    """Linearly spaced grid over [0,1] x X with index <-> coordinate maps."""

    s_values: np.ndarray  # (n_s,), strictly increasing, s_values[0] == 0
    x_values: np.ndarray  # (n_x, d)

    def __post_init__(self):
        s = np.asarray(self.s_values, dtype=float)
        x = np.asarray(self.x_values, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if s.ndim != 1 or s.size < 2 or np.any(np.diff(s) <= 0):
            raise ConfigError("s_values must be a strictly increasing vector")
        if s[0] != 0.0:
            raise ConfigError("the first s value must be exactly 0 (the always-safe row)")
        object.__setattr__(self, "s_values", s)
        object.__setattr__(self, "x_values", x)

    @property
    def n_s(self) -> int:
        return self.s_values.size

    @property
    def n_x(self) -> int:
        return self.x_values.shape[0]

    @property
    def x_dim(self) -> int:
        return self.x_values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_s, self.n_x)

    def points(self) -> np.ndarray:
        """All grid points as an (n_s * n_x, 1 + d) array in s-major order."""
        s = np.repeat(self.s_values, self.n_x)[:, None]
        x = np.tile(self.x_values, (self.n_s, 1))
        return np.hstack([s, x])

    def point(self, s_idx: int, x_idx: int) -> np.ndarray:
        return np.concatenate([[self.s_values[s_idx]], self.x_values[x_idx]])


def build_grid(box: list[tuple[float, float]], resolution: list[int]) -> GridDomain:
    """Inclusive linear spacing of the box; dimension 0 is s and must be [0, 1].

    For multi-dimensional X, x_values is the Cartesian product of the
    per-dimension spacings, ordered with the last dimension fastest.
    """
    if len(box) != len(resolution):
        raise ConfigError("box and resolution must have the same number of dimensions")
    if len(box) < 2:
        raise ConfigError("need at least the s dimension and one x dimension")
    if tuple(box[0]) != (0.0, 1.0):
        raise ConfigError(f"the s dimension must span exactly [0, 1], got {box[0]}")
    for (lo, hi), n in zip(box, resolution):
        if not lo < hi:
            raise ConfigError(f"invalid box interval ({lo}, {hi})")
        if n < 2:
            raise ConfigError(f"resolution must be >= 2 per dimension, got {n}")
    s_values = np.linspace(0.0, 1.0, resolution[0])
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box[1:], resolution[1:])]
    x_values = np.array(list(itertools.product(*axes)))
    return GridDomain(s_values=s_values, x_values=x_values)


def safe_mask(ucb_g: np.ndarray, threshold: float) -> np.ndarray:
    """Certified-safe grid points: UCB of g at most the threshold, plus the
    whole s = 0 row, which is safe by assumption."""
    mask = ucb_g <= threshold
    mask[0, :] = True
    return mask


def safe_boundaries(ucb_g: np.ndarray, threshold: float) -> np.ndarray:
    """Largest certified-safe s-index per x column (0 when none qualifies).

    The result is the maximum qualifying index even if some smaller index
    fails the UCB test: monotonicity of the true safety function makes every
    s below a certified boundary safe, so gaps do not reduce the boundary.
    """
    qualifies = ucb_g <= threshold
    n_s = ucb_g.shape[0]
    # argmax on the reversed rows finds the largest qualifying index.
    rev_first = np.argmax(qualifies[::-1, :], axis=0)
    any_qual = qualifies.any(axis=0)
    return np.where(any_qual, n_s - 1 - rev_first, 0)


def optimistic_boundaries(
    lcb_g: np.ndarray,
    boundaries: np.ndarray,
    min_growth: float,
    threshold: float,
    s_values: np.ndarray,
) -> np.ndarray:
    """Highest s that could still be safe under the most optimistic safety
    function consistent with the LCB at the boundary and the minimum growth
    rate; closed form, clipped to [s_boundary, 1]."""
    if not min_growth > 0:
        raise ConfigError(f"minimum growth rate must be positive, got {min_growth}")
    cols = np.arange(lcb_g.shape[1])
    s_b = s_values[boundaries]
    slack = threshold - lcb_g[boundaries, cols]
    return np.minimum(1.0, s_b + np.maximum(0.0, slack) / min_growth)


def ucb_maximizers(ucb_f: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    """Per x, the s-index at or below the boundary maximizing the UCB of the
    objective; ties break toward the smallest index."""
    n_s = ucb_f.shape[0]
    below = np.arange(n_s)[:, None] <= boundaries[None, :]
    masked = np.where(below, ucb_f, -np.inf)
    return np.argmax(masked, axis=0)


@dataclass
class SafeState:
    """Round geometry snapshot: surviving columns, per-column boundary and
    optimistic boundary, per-column UCB maximizer, and the expander /
    maximizer action sets (as per-column membership flags)."""

    t: int
    surviving: np.ndarray  # bool (n_x,)
    boundary: np.ndarray  # int (n_x,)
    optimistic: np.ndarray  # float (n_x,) in [0, 1]
    maximizer: np.ndarray  # int (n_x,)
    in_expander: np.ndarray  # bool (n_x,): (boundary[x], x) is in the expander set
    in_maximizer: np.ndarray  # bool (n_x,): (maximizer[x], x) is in the maximizer set

    @property
    def n_surviving(self) -> int:
        return int(self.surviving.sum())

    @property
    def n_expanders(self) -> int:
        return int(self.in_expander.sum())

    @property
    def n_maximizers(self) -> int:
        return int(self.in_maximizer.sum())

    def expander_set(self) -> set[tuple[int, int]]:
        return {(int(self.boundary[x]), int(x)) for x in np.flatnonzero(self.in_expander)}

    def maximizer_set(self) -> set[tuple[int, int]]:
        return {(int(self.maximizer[x]), int(x)) for x in np.flatnonzero(self.in_maximizer)}
