import dataclasses
import math

import numpy as np
import pytest
from scipy.special import erf

import helpers
from ifcodec import (AnsatzDecoder, ChargePair, EmptyWindow, IntervalInvalid,
                     KernelRadiusTooSmall, LeakageSpecInvalid, SamplerConfig,
                     SpikeTrain, build_signal, decode, encode, eval_signal,
                     inference_window, leaky_primitive, make_grid,
                     past_future_charge, potential_eval, potential_on_grid)
from ifcodec.ansatz_decoder import leaky_primitive_grid

# ---------------------------------------------------------------- window


def test_inference_window_pinned_values():
    theta = 0.05
    charges = ChargePair(past=math.e ** 2 * theta, future=theta)
    w = inference_window(charges, theta=theta, alpha0=1.0, delta_alpha=0.0,
                         omega=16.0, T=10.0)
    assert w.sigma == pytest.approx(2.0, rel=1e-12)
    assert w.T1 == pytest.approx(3.0, rel=1e-12)
    assert w.T2 == pytest.approx(9.0, rel=1e-12)
    assert not w.empty


def test_inference_window_small_charges_cover_everything():
    w = inference_window(ChargePair(0.0, 0.0), theta=0.1, alpha0=1.0,
                         delta_alpha=0.2, omega=4.0, T=7.0)
    assert w.sigma == 0.0
    assert w.T1 == 0.0
    assert w.T2 == 7.0


def test_inference_window_can_be_empty():
    charges = ChargePair(1e6, 1e6)
    w = inference_window(charges, theta=1e-6, alpha0=1.0, delta_alpha=0.0,
                         omega=1.0, T=5.0)
    assert w.empty
    with pytest.raises(EmptyWindow):
        make_grid(w, omega=1.0)


def test_inference_window_validation():
    with pytest.raises(LeakageSpecInvalid):
        inference_window(ChargePair(0, 0), 0.1, alpha0=1.0, delta_alpha=1.0,
                         omega=1.0, T=1.0)
    with pytest.raises(IntervalInvalid):
        inference_window(ChargePair(0, 0), 0.1, alpha0=1.0, delta_alpha=0.0,
                         omega=0.0, T=1.0)


def test_make_grid_spacing():
    w = inference_window(ChargePair(0, 0), 0.1, alpha0=1.0, delta_alpha=0.0,
                         omega=2.0, T=3.0)
    grid = make_grid(w, omega=2.0, points_per_band=32)
    assert grid[0] == w.T1 and grid[-1] == w.T2
    assert np.diff(grid).max() <= 1.0 / (32 * 2.0) + 1e-12


# ---------------------------------------------------------------- potential


def test_potential_two_spike_closed_form():
    cfg = SamplerConfig(theta=0.5, alpha=1.0, T=4.0)
    train = SpikeTrain(np.array([1.0, 2.0]), np.array([1.0, -1.0]), cfg)
    assert potential_eval(train, 1.0, 0.5) == 0.0
    # right-continuous at the firing time
    assert potential_eval(train, 1.0, 1.0) == pytest.approx(0.5)
    t = 1.7
    assert potential_eval(train, 1.0, t) == \
        pytest.approx(0.5 * math.exp(-(t - 1.0)), rel=1e-14)
    t = 3.1
    expect = 0.5 * math.exp(-(t - 1.0)) - 0.5 * math.exp(-(t - 2.0))
    assert potential_eval(train, 1.0, t) == pytest.approx(expect, rel=1e-13)


def test_potential_matches_direct_sum():
    rng = np.random.default_rng(41)
    for _ in range(5):
        train = helpers.random_train(rng)
        alpha = float(rng.uniform(0.4, 2.5))
        ts = np.sort(rng.uniform(-1.0, train.config.T + 2.0, size=64))
        direct = np.zeros(ts.size, dtype=complex)
        for tk, qk in zip(train.times, train.phases):
            live = ts >= tk
            direct[live] += train.config.theta * qk * np.exp(
                -alpha * (ts[live] - tk))
        got = potential_on_grid(train, alpha, ts)
        np.testing.assert_allclose(got, direct, atol=1e-13 * len(train))


def test_potential_empty_train():
    cfg = SamplerConfig(theta=0.5, alpha=1.0, T=4.0)
    train = SpikeTrain(np.empty(0), np.empty(0, dtype=complex), cfg)
    assert np.all(potential_on_grid(train, 1.0, [0.0, 1.0]) == 0.0)


# ---------------------------------------------------------------- primitive


def test_leaky_primitive_gaussian_closed_form():
    m = build_signal({"kind": "gaussian_atoms", "coefficients": [1.0],
                      "nodes": [0.0]})
    alpha = 0.8
    for t in (-1.0, 0.0, 0.5, 2.0):
        # integral_{-inf}^t e^(-pi x^2) e^(alpha (x - t)) dx in closed form
        expect = math.exp(alpha ** 2 / (4 * math.pi) - alpha * t) * 0.5 * \
            (1.0 + erf(math.sqrt(math.pi) * (t - alpha / (2 * math.pi))))
        assert leaky_primitive(m, alpha, t) == pytest.approx(expect, abs=1e-9)


def test_leaky_primitive_grid_matches_pointwise():
    rng = np.random.default_rng(43)
    m = helpers.random_atom_model(rng, "fejer", complex_coeffs=True)
    ts = np.linspace(-1.0, 7.0, 41)
    grid_vals = leaky_primitive_grid(m, 1.3, ts)
    point_vals = np.array([leaky_primitive(m, 1.3, float(t)) for t in ts])
    np.testing.assert_allclose(grid_vals, point_vals, atol=1e-9)


def test_leaky_primitive_validation():
    m = build_signal({"kind": "gaussian_atoms", "coefficients": [1.0],
                      "nodes": [0.0]})
    with pytest.raises(LeakageSpecInvalid):
        leaky_primitive(m, 0.0, 1.0)
    with pytest.raises(IntervalInvalid):
        leaky_primitive_grid(m, 1.0, np.array([0.0, 0.0, 1.0]))


def test_potential_tracks_primitive_within_threshold():
    # With no past charge the device potential y = F_alpha - u stays below
    # theta in modulus between firings, so the spike-train potential tracks
    # the leaky primitive of the signal uniformly.
    rng = np.random.default_rng(47)
    m = helpers.random_atom_model(rng, "bspline")
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=5.0)
    train = encode(m, cfg)
    assert len(train) >= 3
    charges = past_future_charge(m, cfg.alpha, 0.0,
                                 t_anchor=float(train.times[-1]))
    assert charges.past == 0.0

    at_spikes = potential_on_grid(train, cfg.alpha, train.times)
    f_spikes = leaky_primitive_grid(m, cfg.alpha, train.times)
    assert np.abs(at_spikes - f_spikes).max() <= 2e-6 * cfg.theta * len(train)

    grid = np.linspace(0.0, cfg.T, 2001)
    diff = potential_on_grid(train, cfg.alpha, grid) - \
        leaky_primitive_grid(m, cfg.alpha, grid)
    assert np.abs(diff).max() <= cfg.theta * (1.0 + 1e-6) + 1e-9


# ---------------------------------------------------------------- decoder


def fejer_signal():
    return build_signal({"kind": "fejer_atoms",
                         "coefficients": [0.9, -0.7, 0.5],
                         "nodes": [3.0, 5.0, 7.0], "scale": 0.25})


def test_decoder_validation(kernel):
    cfg = SamplerConfig(theta=0.1, alpha=1.0, T=1.0)
    train = SpikeTrain(np.array([0.5]), np.array([1.0]), cfg)
    with pytest.raises(LeakageSpecInvalid):
        AnsatzDecoder(train, 0.0, 1.0, kernel)
    with pytest.raises(IntervalInvalid):
        AnsatzDecoder(train, 1.0, -2.0, kernel)


def test_decode_empty_train(kernel):
    cfg = SamplerConfig(theta=0.1, alpha=1.0, T=1.0)
    train = SpikeTrain(np.empty(0), np.empty(0, dtype=complex), cfg)
    rec = decode(train, 1.0, 2.0, kernel, np.linspace(0.0, 1.0, 11))
    assert np.all(rec.values == 0.0)
    assert rec.truncation_flag == 0.0


def test_decode_translation_covariance(kernel):
    rng = np.random.default_rng(53)
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=6.0)
    times = np.sort(rng.uniform(1.0, 4.0, size=6))
    phases = np.exp(2j * np.pi * rng.uniform(size=6))
    train = SpikeTrain(times, phases, cfg)
    shift = 2.0
    cfg2 = SamplerConfig(theta=0.05, alpha=1.0, T=6.0 + shift)
    train2 = SpikeTrain(times + shift, phases, cfg2)
    grid = np.linspace(1.0, 5.0, 101)
    a = decode(train, 1.0, 4.0, kernel, grid)
    b = decode(train2, 1.0, 4.0, kernel, grid + shift)
    np.testing.assert_allclose(b.values, a.values, atol=1e-10)


def test_truncation_flags_track_kernel_coverage(kernel):
    cfg = SamplerConfig(theta=0.1, alpha=5.0, T=30.0)
    train = SpikeTrain(np.array([2.0, 3.0]), np.array([1.0, 1.0]), cfg)
    dec = AnsatzDecoder(train, 5.0, 8.0, kernel)
    # support is [2, 3 + log(1e12)/5] ~ [2, 8.5]; reach is 60/8 = 7.5
    vals, flags = dec.evaluate(np.array([4.0, 20.0]))
    assert flags[0] < flags[1]
    assert flags[0] == pytest.approx(dec._u_max * 1e-12)


def test_decode_refuses_when_kernel_radius_too_small(kernel):
    bad_kernel = dataclasses.replace(kernel, edge_C=50.0)
    cfg = SamplerConfig(theta=0.01, alpha=1.0, T=5.0)
    train = SpikeTrain(np.array([1.0, 2.0]), np.array([1.0, 1.0]), cfg)
    with pytest.raises(KernelRadiusTooSmall):
        decode(train, 1.0, 8.0, bad_kernel, np.linspace(0.0, 5.0, 51))


def test_end_to_end_reconstruction(kernel):
    # Fejer atoms at scale 1/4 are band-limited to [-4, 4], so decoding at
    # Omega = 4 with a small threshold must land close to the signal.
    m = fejer_signal()
    cfg = SamplerConfig(theta=0.01, alpha=1.0, T=12.0)
    train = encode(m, cfg)
    assert len(train) > 10
    charges = past_future_charge(m, 1.0, 0.0, t_anchor=float(train.times[-1]))
    window = inference_window(charges, cfg.theta, 1.0, 0.0, 4.0, cfg.T)
    grid = make_grid(window, 4.0)
    rec = decode(train, 1.0, 4.0, kernel, grid)
    assert rec.truncation_flag <= 1e-3 * cfg.theta
    sup_err = np.abs(rec.values - eval_signal(m, grid)).max()
    assert sup_err <= 0.15
    # reconstruction must actually track the signal, not just stay small
    assert np.abs(eval_signal(m, grid)).max() > 0.8
