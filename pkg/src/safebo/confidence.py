"""Confidence-bound machinery: beta schedules and per-round bound fields.

A `ConfidenceField` holds the posterior mean and stddev of one function over
the whole grid at one round, together with the scalar beta and the derived
upper/lower bounds.  Fields are immutable once built and recomputed densely
every round; at the grid sizes used here a full sweep is cheap and the
acquisition step needs a global argmax anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractError
from .gp import GpModel
from .grid import GridDomain

CONSTANT = "constant"
THEORETICAL = "theoretical"


@dataclass(frozen=True)
class BetaSchedule:
    """Confidence-width schedule.

    `constant(c)` returns c at every round.  `theoretical(norm_bound,
    noise_scale, delta)` returns

        norm_bound + noise_scale * sqrt(2 * (gamma_prev + 1 + ln(2 / delta)))

    where gamma_prev is the information gained from the observations so far;
    nondecreasing in t when fed the (nondecreasing) empirical info gain.
    """

    kind: str
    value: float = 0.0
    norm_bound: float = 0.0
    noise_scale: float = 0.0
    delta: float = 0.5

    @classmethod
    def constant(cls, value: float) -> "BetaSchedule":
        if not value > 0:
            raise ConfigError(f"constant beta must be positive, got {value}")
        return cls(kind=CONSTANT, value=float(value))

    @classmethod
    def theoretical(cls, norm_bound: float, noise_scale: float, delta: float) -> "BetaSchedule":
        if not 0.0 < delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {delta}")
        if norm_bound < 0 or noise_scale < 0:
            raise ConfigError("norm_bound and noise_scale must be nonnegative")
        return cls(
            kind=THEORETICAL,
            norm_bound=float(norm_bound),
            noise_scale=float(noise_scale),
            delta=float(delta),
        )

    def value_at(self, t: int, info_gain_prev: float = 0.0) -> float:
        """Beta for round t; `info_gain_prev` is ignored for constant schedules."""
        if t < 1:
            raise ContractError(f"round index must be >= 1, got {t}")
        if self.kind == CONSTANT:
            return self.value
        if info_gain_prev < 0:
            raise ContractError(f"info gain must be nonnegative, got {info_gain_prev}")
        radical = 2.0 * (info_gain_prev + 1.0 + math.log(2.0 / self.delta))
        return self.norm_bound + self.noise_scale * math.sqrt(radical)


@dataclass(frozen=True)
class ConfidenceField:
    """Per-grid-point mu, sigma, UCB and LCB for one function at one round.

    ucb = mu + beta * sigma and lcb = mu - beta * sigma hold exactly (the
    bounds are computed from those expressions, not re-derived elsewhere).
    """

    grid: GridDomain
    mu: np.ndarray  # (n_s, n_x)
    sigma: np.ndarray  # (n_s, n_x)
    beta: float
    ucb: np.ndarray
    lcb: np.ndarray

    @classmethod
    def from_arrays(
        cls, grid: GridDomain, mu: np.ndarray, sigma: np.ndarray, beta: float
    ) -> "ConfidenceField":
        mu = np.asarray(mu, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        if mu.shape != grid.shape or sigma.shape != grid.shape:
            raise ContractError(
                f"field arrays must have shape {grid.shape}, got {mu.shape} / {sigma.shape}"
            )
        if beta < 0:
            raise ContractError(f"beta must be nonnegative, got {beta}")
        spread = beta * sigma
        return cls(grid=grid, mu=mu, sigma=sigma, beta=float(beta),
                   ucb=mu + spread, lcb=mu - spread)

    @classmethod
    def from_model(cls, model: GpModel, grid: GridDomain, beta: float) -> "ConfidenceField":
        """One dense posterior sweep over the grid, chunked to bound memory."""
        pts = grid.points()
        n = pts.shape[0]
        mu = np.empty(n)
        sigma = np.empty(n)
        chunk = 200_000
        for lo in range(0, n, chunk):
            hi = min(lo + chunk, n)
            mu[lo:hi], sigma[lo:hi] = model.posterior(pts[lo:hi])
        shape = grid.shape
        return cls.from_arrays(grid, mu.reshape(shape), sigma.reshape(shape), beta)

    @property
    def half_width(self) -> np.ndarray:
        """beta * sigma, the exploration bonus used by the acquisition rules."""
        return self.beta * self.sigma
