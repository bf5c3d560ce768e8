import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from safebo import ConfigError, ContractError, GpModel, KernelSpec, Observation, gram, kernel_eval

# Closed form (1 + sqrt(5) r + 5 r^2 / 3) exp(-sqrt(5) r) at scaled distance
# r = 1, computed with an independent script before the kernel was written.
MATERN52_AT_R1 = 0.5239941088318203


def m52(variance=1.0, ls=(1.0,)):
    return KernelSpec("matern52", variance, ls)


def se(variance=1.0, ls=(1.0,)):
    return KernelSpec("squared_exponential", variance, ls)


def test_matern52_zero_distance_equals_variance():
    spec = m52(1.0, (0.2, 0.2))
    assert kernel_eval(spec, (0.3, 0.7), (0.3, 0.7)) == 1.0
    spec9 = m52(9.0, (0.2, 0.2))
    assert kernel_eval(spec9, (0.3, 0.7), (0.3, 0.7)) == 9.0


def test_se_zero_distance():
    assert kernel_eval(se(1.0, (1.0, 1.0)), (0.1, 0.9), (0.1, 0.9)) == 1.0


def test_matern52_at_scaled_distance_one():
    # lengthscale 0.2, |z1 - z2| = 0.2 -> scaled distance exactly 1
    spec = m52(1.0, (0.2,))
    value = kernel_eval(spec, (0.0,), (0.2,))
    assert value == pytest.approx(MATERN52_AT_R1, abs=1e-12)
    # recompute the closed form in place as a second, independent check
    r = 1.0
    direct = (1 + math.sqrt(5) * r + 5 * r * r / 3) * math.exp(-math.sqrt(5) * r)
    assert value == pytest.approx(direct, abs=1e-15)


def test_se_anisotropic_distance():
    spec = se(2.0, (0.5, 2.0))
    z1, z2 = (0.0, 0.0), (0.25, 1.0)
    r2 = (0.25 / 0.5) ** 2 + (1.0 / 2.0) ** 2
    assert kernel_eval(spec, z1, z2) == pytest.approx(2.0 * math.exp(-0.5 * r2), rel=1e-14)


@given(
    st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=2),
    st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=2),
)
@settings(max_examples=50, deadline=None)
def test_kernel_symmetric(z1, z2):
    spec = m52(1.7, (0.3, 1.1))
    assert kernel_eval(spec, z1, z2) == kernel_eval(spec, z2, z1)


def test_dimension_mismatch_raises():
    with pytest.raises(ContractError):
        kernel_eval(m52(1.0, (0.2, 0.2)), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def test_invalid_kernel_spec():
    with pytest.raises(ConfigError):
        KernelSpec("matern52", 0.0, (0.2,))
    with pytest.raises(ConfigError):
        KernelSpec("matern52", 1.0, (0.2, -0.1))
    with pytest.raises(ConfigError):
        KernelSpec("cubic", 1.0, (0.2,))


def test_gram_symmetric_and_psd():
    rng = np.random.default_rng(0)
    for variance in (1.0, 9.0):
        spec = m52(variance, (0.2, 0.2, 0.2))
        pts = rng.uniform(0, 1, size=(40, 3))
        k = gram(spec, pts, pts)
        assert np.abs(k - k.T).max() < 1e-12
        assert np.linalg.eigvalsh(k).min() >= -1e-8


def test_prior_posterior_is_exact():
    model = GpModel(kernel=m52(2.5, (0.2, 0.2)), noise_variance=1e-5)
    mean, sd = model.posterior(np.array([[0.1, 0.2], [0.9, 0.5]]))
    assert np.all(mean == 0.0)
    assert np.all(sd == np.sqrt(2.5))


def test_single_observation_closed_form():
    # mean = y * k / (k + noise) with k = 1, noise = 1e-5
    model = GpModel(kernel=m52(1.0, (0.2,)), noise_variance=1e-5)
    model.add_observation(Observation((0.5,), 2.0))
    mean, sd = model.posterior([[0.5]])
    assert mean[0] == pytest.approx(2.0 / (1.0 + 1e-5), abs=1e-12)
    assert sd[0] ** 2 == pytest.approx(1.0 - 1.0 / (1.0 + 1e-5), abs=1e-10)


def _dense_posterior(spec, noise, x_obs, y_obs, queries):
    """Independent oracle: full-matrix inverse, no Cholesky."""
    k_train = gram(spec, x_obs, x_obs)
    k_inv = np.linalg.inv(k_train + noise * np.eye(len(x_obs)))
    k_star = gram(spec, x_obs, queries)
    mean = k_star.T @ k_inv @ y_obs
    var = spec.variance - np.einsum("ij,ij->j", k_star, k_inv @ k_star)
    return mean, np.clip(var, 0.0, None)


def test_posterior_matches_dense_oracle():
    rng = np.random.default_rng(7)
    for trial in range(5):
        d = rng.integers(1, 4)
        spec = m52(float(rng.uniform(0.5, 2.0)), tuple(rng.uniform(0.1, 1.0, size=d)))
        noise = float(rng.uniform(1e-5, 1e-2))
        n = int(rng.integers(3, 50))
        x_obs = rng.uniform(0, 1, size=(n, d))
        y_obs = rng.normal(size=n)
        model = GpModel(kernel=spec, noise_variance=noise)
        for xo, yo in zip(x_obs, y_obs):
            model.add_observation(Observation(tuple(xo), float(yo)))
        queries = rng.uniform(0, 1, size=(5, d))
        mean, sd = model.posterior(queries)
        mean_ref, var_ref = _dense_posterior(spec, noise, x_obs, y_obs, queries)
        assert np.abs(mean - mean_ref).max() < 1e-8
        assert np.abs(sd**2 - var_ref).max() < 1e-8


def test_variance_never_increases_with_observations():
    rng = np.random.default_rng(3)
    spec = m52(1.0, (0.3, 0.3))
    model = GpModel(kernel=spec, noise_variance=1e-3)
    g = np.linspace(0, 1, 10)
    queries = np.array([(a, b) for a in g for b in g])
    _, prev_sd = model.posterior(queries)
    for _ in range(15):
        pt = tuple(rng.uniform(0, 1, size=2))
        model.add_observation(Observation(pt, float(rng.normal())))
        _, sd = model.posterior(queries)
        assert np.all(sd <= prev_sd + 1e-8)
        prev_sd = sd


def test_variance_bounded_by_prior():
    rng = np.random.default_rng(11)
    model = GpModel(kernel=m52(1.0, (0.2, 0.2)), noise_variance=1e-5)
    for _ in range(20):
        model.add_observation(Observation(tuple(rng.uniform(0, 1, 2)), float(rng.normal())))
    _, sd = model.posterior(rng.uniform(0, 1, size=(50, 2)))
    assert np.all(sd**2 <= 1.0 + 1e-8)


def test_duplicate_observation_is_regularized():
    model = GpModel(kernel=m52(1.0, (0.2,)), noise_variance=1e-5)
    model.add_observation(Observation((0.5,), 1.0))
    model.add_observation(Observation((0.5,), 1.0))
    mean, sd = model.posterior([[0.5]])
    assert np.isfinite(mean).all() and np.isfinite(sd).all()


def test_info_gain_empty_and_single():
    model = GpModel(kernel=m52(1.0, (0.2,)), noise_variance=1.0)
    assert model.empirical_info_gain() == 0.0
    model.add_observation(Observation((0.3,), 0.7))
    assert model.empirical_info_gain() == pytest.approx(0.5 * math.log(2.0), abs=1e-12)


def test_info_gain_nondecreasing():
    rng = np.random.default_rng(5)
    model = GpModel(kernel=m52(1.0, (0.2, 0.2)), noise_variance=1e-2)
    prev = 0.0
    for _ in range(12):
        model.add_observation(Observation(tuple(rng.uniform(0, 1, 2)), float(rng.normal())))
        gain = model.empirical_info_gain()
        assert gain >= prev - 1e-10
        prev = gain


def test_info_gain_spread_beats_duplicates():
    spec = m52(1.0, (0.2,))

    def dense_gain(points):
        k = gram(spec, points, points)
        return 0.5 * np.linalg.slogdet(np.eye(len(points)) + k / 0.1)[1]

    clumped = np.array([[0.5], [0.5], [0.5]])
    spread = np.array([[0.1], [0.5], [0.9]])
    assert dense_gain(spread) > dense_gain(clumped)

    for pts, ref in ((clumped, dense_gain(clumped)), (spread, dense_gain(spread))):
        model = GpModel(kernel=spec, noise_variance=0.1)
        for p in pts:
            model.add_observation(Observation(tuple(p), 0.0))
        assert model.empirical_info_gain() == pytest.approx(ref, abs=1e-10)


def test_negative_noise_rejected():
    with pytest.raises(ConfigError):
        GpModel(kernel=m52(1.0, (0.2,)), noise_variance=-1.0)
