"""Kernels and exact Gaussian-process posterior inference.

Two stationary kernels are supported (Matern-5/2 and squared exponential),
both with anisotropic lengthscales: the scaled distance between two points
is r^2 = sum_i ((z1_i - z2_i) / ell_i)^2.

`GpModel` keeps the full observation set and a Cholesky factor of
(K + noise_variance * I), refreshed on every update.  Rank-one updates are
deliberately not used; at the few hundred observations these experiments
reach, a full refactorization is cheap and simpler to keep consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import cdist

from .errors import ConfigError, ContractError, NumericalError

MATERN52 = "matern52"
SQUARED_EXPONENTIAL = "squared_exponential"

_SQRT5 = np.sqrt(5.0)

# Jitter escalation for Cholesky factorization: start small, multiply by 10
# until the matrix factorizes or the ceiling is hit.
_JITTER_START = 1e-10
_JITTER_MAX = 1e-4


@dataclass(frozen=True)
class KernelSpec:
    """Stationary kernel description: family, output variance, per-dimension
    lengthscales (one per input dimension, safety dimension first)."""

    family: str
    variance: float
    lengthscales: tuple[float, ...]

    def __post_init__(self):
        if self.family not in (MATERN52, SQUARED_EXPONENTIAL):
            raise ConfigError(f"unknown kernel family: {self.family!r}")
        if not self.variance > 0:
            raise ConfigError(f"kernel variance must be positive, got {self.variance}")
        ls = tuple(float(v) for v in self.lengthscales)
        if len(ls) == 0 or any(not v > 0 for v in ls):
            raise ConfigError(f"lengthscales must all be positive, got {ls}")
        object.__setattr__(self, "lengthscales", ls)

    @property
    def dim(self) -> int:
        return len(self.lengthscales)


def _scaled(spec: KernelSpec, pts: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if pts.shape[1] != spec.dim:
        raise ContractError(
            f"points have dimension {pts.shape[1]}, kernel expects {spec.dim}"
        )
    return pts / np.asarray(spec.lengthscales)


def gram(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kernel matrix k(a_i, b_j) for two point sets, shape (len(a), len(b))."""
    r = cdist(_scaled(spec, a), _scaled(spec, b))
    if spec.family == MATERN52:
        return spec.variance * (1.0 + _SQRT5 * r + 5.0 * r**2 / 3.0) * np.exp(-_SQRT5 * r)
    return spec.variance * np.exp(-0.5 * r**2)


def kernel_eval(spec: KernelSpec, z1: Sequence[float], z2: Sequence[float]) -> float:
    """Kernel value between two single points; symmetric in its arguments."""
    return float(gram(spec, np.asarray(z1)[None, :], np.asarray(z2)[None, :])[0, 0])


class Observation(NamedTuple):
    """One noisy function evaluation at a domain point (s, x...)."""

    point: tuple[float, ...]
    value: float


@dataclass
class GpModel:
    """Zero-mean GP with fixed hyperparameters and exact inference.

    The Cholesky factor of (K + noise_variance * I) is rebuilt after every
    `add_observation`, so `posterior` always reflects the full observation
    set.  Single-writer: interleave updates and reads from one thread.
    """

    kernel: KernelSpec
    noise_variance: float
    _points: list[tuple[float, ...]] = field(default_factory=list, repr=False)
    _values: list[float] = field(default_factory=list, repr=False)
    _chol: np.ndarray | None = field(default=None, repr=False)
    _alpha: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.noise_variance < 0:
            raise ConfigError(f"noise variance must be >= 0, got {self.noise_variance}")

    @property
    def num_observations(self) -> int:
        return len(self._points)

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self._points, dtype=float).reshape(len(self._points), -1)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self._values, dtype=float)

    def add_observation(self, obs: Observation) -> "GpModel":
        """Append one observation and refresh the factorization."""
        point = tuple(float(v) for v in obs.point)
        if len(point) != self.kernel.dim:
            raise ContractError(
                f"observation has dimension {len(point)}, kernel expects {self.kernel.dim}"
            )
        self._points.append(point)
        self._values.append(float(obs.value))
        self._refactor()
        return self

    def _regularized_gram(self) -> np.ndarray:
        x = self.points
        k = gram(self.kernel, x, x)
        k = 0.5 * (k + k.T)
        return k + self.noise_variance * np.eye(len(x))

    def _refactor(self) -> None:
        k = self._regularized_gram()
        n = k.shape[0]
        jitter = 0.0
        while True:
            try:
                self._chol = cholesky(k + jitter * np.eye(n), lower=True)
                break
            except np.linalg.LinAlgError:
                jitter = _JITTER_START if jitter == 0.0 else jitter * 10.0
                if jitter > _JITTER_MAX:
                    raise NumericalError(
                        f"Cholesky failed for {n} observations even with jitter {_JITTER_MAX}"
                    ) from None
        self._alpha = cho_solve((self._chol, True), self.values)

    def posterior(self, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior means and standard deviations at the query points.

        With no observations this is the prior: mean 0, stddev sqrt(k(z, z)).
        Variances are clamped to [0, prior variance] before the square root.
        """
        queries = np.atleast_2d(np.asarray(queries, dtype=float))
        prior_var = np.full(queries.shape[0], self.kernel.variance)
        if self.num_observations == 0:
            return np.zeros(queries.shape[0]), np.sqrt(prior_var)

        k_star = gram(self.kernel, self.points, queries)
        mean = k_star.T @ self._alpha
        v = solve_triangular(self._chol, k_star, lower=True)
        var = prior_var - np.einsum("ij,ij->j", v, v)
        if not (np.isfinite(mean).all() and np.isfinite(var).all()):
            cond = float(np.linalg.cond(self._regularized_gram()))
            raise NumericalError(
                f"non-finite posterior with {self.num_observations} observations "
                f"(condition estimate {cond:.3e})"
            )
        np.clip(var, 0.0, prior_var, out=var)
        return mean, np.sqrt(var)

    def empirical_info_gain(self) -> float:
        """0.5 * log det(I + K / noise_variance) over the observed points.

        Nonnegative and nondecreasing as observations are added; used as an
        empirical stand-in for the information-gain sequence that the
        theoretical beta schedule consumes.
        """
        n = self.num_observations
        if n == 0:
            return 0.0
        if self.noise_variance <= 0:
            return float("inf")
        x = self.points
        k = gram(self.kernel, x, x)
        k = 0.5 * (k + k.T)
        sign, logdet = np.linalg.slogdet(np.eye(n) + k / self.noise_variance)
        if sign <= 0 or not np.isfinite(logdet):
            raise NumericalError("log-det of information-gain matrix is not positive")
        return max(0.0, 0.5 * float(logdet))
