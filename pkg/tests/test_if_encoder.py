import math

import numpy as np
import pytest

import helpers
from ifcodec import (ConfigInvalid, SamplerConfig, SpikeTrain, build_signal,
                     encode, firing_residuals, rescaled, signal_charge,
                     spike_count_bound)


def constant(c):
    return build_signal({"kind": "constant", "coefficients": [c]})


# ---------------------------------------------------------------- config


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        SamplerConfig(theta=0.0, alpha=1.0, T=1.0)
    with pytest.raises(ConfigInvalid):
        SamplerConfig(theta=0.1, alpha=-1.0, T=1.0)
    with pytest.raises(ConfigInvalid):
        SamplerConfig(theta=0.1, alpha=1.0, T=0.0)
    with pytest.raises(ConfigInvalid):
        SamplerConfig(theta=0.1, alpha=1.0, T=1.0, time_tol=1e-8)


def test_config_default_time_tol():
    cfg = SamplerConfig(theta=0.1, alpha=1.0, T=4.0)
    assert cfg.time_tol == pytest.approx(4e-10)


def test_spike_train_validation():
    cfg = SamplerConfig(theta=0.1, alpha=1.0, T=1.0)
    with pytest.raises(ConfigInvalid):
        SpikeTrain(np.array([0.2, 0.1]), np.array([1.0, 1.0]), cfg)
    with pytest.raises(ConfigInvalid):
        SpikeTrain(np.array([0.5, 1.5]), np.array([1.0, 1.0]), cfg)
    with pytest.raises(ConfigInvalid):
        SpikeTrain(np.array([0.5]), np.array([0.5 + 0j]), cfg)
    with pytest.raises(ConfigInvalid):
        SpikeTrain(np.array([0.5]), np.array([1.0, -1.0]), cfg)


# ---------------------------------------------------------------- closed form


def test_constant_signal_firing_times_closed_form():
    # y(t) = (c / alpha)(1 - e^(-alpha t)) between firings, so the
    # inter-firing interval is -(1/alpha) log(1 - alpha theta / c).
    c, alpha, theta, T = 1.0, 0.5, 0.2, 5.0
    train = encode(constant(c), SamplerConfig(theta=theta, alpha=alpha, T=T))
    gap = -math.log1p(-alpha * theta / c) / alpha
    expect = gap * np.arange(1, math.floor(T / gap) + 1)
    assert len(train) == expect.size
    np.testing.assert_allclose(train.times, expect, atol=1e-7)
    assert np.all(train.phases == 1.0)


def test_constant_signal_phase_sign():
    train = encode(constant(-1.0),
                   SamplerConfig(theta=0.2, alpha=0.5, T=2.0))
    assert len(train) > 0
    assert np.all(train.phases == -1.0)


def test_complex_constant_phase():
    c = complex(0.6, 0.8)
    train = encode(build_signal({"kind": "constant", "coefficients": [[0.6, 0.8]]}),
                   SamplerConfig(theta=0.2, alpha=0.5, T=2.0))
    assert len(train) > 0
    np.testing.assert_allclose(train.phases, c / abs(c), atol=1e-12)


def test_subthreshold_signal_never_fires():
    # steady state |y| <= amp / alpha stays below theta
    train = encode(constant(0.1), SamplerConfig(theta=0.5, alpha=1.0, T=10.0))
    assert len(train) == 0
    zero = build_signal({"kind": "gaussian_atoms", "coefficients": [0.0],
                         "nodes": [1.0]})
    assert len(encode(zero, SamplerConfig(theta=0.1, alpha=1.0, T=3.0))) == 0


# ---------------------------------------------------------------- invariants


@pytest.mark.parametrize("family", ["fejer", "gaussian", "bspline"])
def test_encode_invariants_per_family(family):
    rng = np.random.default_rng(101)
    fired = 0
    for _ in range(4):
        m = helpers.random_atom_model(rng, family)
        cfg = SamplerConfig(theta=0.05, alpha=1.0, T=5.0)
        train = encode(m, cfg)
        assert train.config is cfg
        n = len(train)
        fired += n
        assert n <= spike_count_bound(m, cfg)
        if n:
            assert train.times[0] >= 0.0 and train.times[-1] <= cfg.T
            assert np.all(np.diff(train.times) > 0)
            np.testing.assert_allclose(np.abs(train.phases), 1.0, atol=1e-12)
            assert firing_residuals(m, train).max() <= 1e-6 * cfg.theta
    assert fired > 0


def test_real_signal_phases_are_exact_signs():
    rng = np.random.default_rng(7)
    m = helpers.random_atom_model(rng, "gaussian")
    train = encode(m, SamplerConfig(theta=0.03, alpha=0.8, T=5.0))
    assert len(train) > 0
    assert np.all(train.phases.imag == 0.0)
    assert set(np.unique(train.phases.real)) <= {-1.0, 1.0}


def test_encode_is_deterministic():
    rng = np.random.default_rng(11)
    m = helpers.random_atom_model(rng, "fejer")
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=5.0)
    a = encode(m, cfg)
    b = encode(m, cfg)
    np.testing.assert_array_equal(a.times, b.times)
    np.testing.assert_array_equal(a.phases, b.phases)


def test_spike_count_bound_formula():
    m = constant(2.0)
    cfg = SamplerConfig(theta=0.25, alpha=1.0, T=3.0)
    assert spike_count_bound(m, cfg) == \
        pytest.approx(1.0 + signal_charge(m, 0.0, 3.0) / 0.25, rel=1e-12)
    assert spike_count_bound(m, cfg) == pytest.approx(25.0, rel=1e-8)


def test_residuals_detect_tampered_times():
    rng = np.random.default_rng(13)
    m = helpers.random_atom_model(rng, "gaussian")
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=5.0)
    train = encode(m, cfg)
    assert len(train) >= 2
    bad_times = train.times.copy()
    bad_times[1] += 1e-3
    bad = SpikeTrain(bad_times, train.phases, cfg)
    assert firing_residuals(m, bad).max() > 1e-6 * cfg.theta


# ---------------------------------------------------------------- rescaling


@pytest.mark.parametrize("omega", [1.5, 3.0])
def test_rescaling_covariance(omega):
    # Encoding x -> f(x/omega)/omega with leakage alpha/omega multiplies
    # every firing time by omega and leaves the phases unchanged.
    rng = np.random.default_rng(17)
    m = helpers.random_atom_model(rng, "gaussian", complex_coeffs=True)
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=5.0)
    base = encode(m, cfg)
    assert len(base) > 0
    cfg2 = SamplerConfig(theta=0.05, alpha=1.0 / omega, T=5.0 * omega)
    scaled = encode(rescaled(m, omega), cfg2)
    assert len(scaled) == len(base)
    np.testing.assert_allclose(scaled.times / omega, base.times,
                               atol=10 * cfg2.time_tol / omega)
    np.testing.assert_allclose(scaled.phases, base.phases, atol=1e-9)
