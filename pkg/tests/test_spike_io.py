import json
import math

import numpy as np
import pytest

import helpers
from ifcodec import (ConfigInvalid, SamplerConfig, SpikeTrain, decode,
                     free_node_bandwidth, load_certificate, load_spike_train,
                     save_certificate, save_reconstruction_csv,
                     save_spike_train, sis_bandwidth)


def test_spike_train_roundtrip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(73)
    train = helpers.random_train(rng, n_max=12)
    path = tmp_path / "train.json"
    save_spike_train(train, path)
    back = load_spike_train(path)
    np.testing.assert_array_equal(back.times, train.times)
    np.testing.assert_array_equal(back.phases, train.phases)
    assert back.config == train.config


def test_spike_train_bytes_deterministic(tmp_path):
    rng = np.random.default_rng(79)
    train = helpers.random_train(rng)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_spike_train(train, a)
    save_spike_train(train, b)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith('{\n  "theta": ')
    assert "\r" not in text
    json.loads(text)  # well-formed


def test_empty_train_roundtrip(tmp_path):
    cfg = SamplerConfig(theta=0.1, alpha=1.0, T=2.0)
    train = SpikeTrain(np.empty(0), np.empty(0, dtype=complex), cfg)
    path = tmp_path / "empty.json"
    save_spike_train(train, path)
    back = load_spike_train(path)
    assert len(back) == 0
    assert back.config == cfg


def test_malformed_train_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    with pytest.raises(ConfigInvalid):
        load_spike_train(bad)
    missing = tmp_path / "missing.json"
    missing.write_text('{"theta": 0.1}')
    with pytest.raises(ConfigInvalid):
        load_spike_train(missing)


def test_certificate_roundtrip(tmp_path):
    cert = sis_bandwidth(N=2, A=0.5, D=1.0, s=2.0, theta=0.01)
    path = tmp_path / "cert.json"
    save_certificate(cert, path)
    back = load_certificate(path)
    assert back.omega == cert.omega
    assert back.tolerance == cert.tolerance
    assert back.method is cert.method
    assert dict(back.inputs) == dict(cert.inputs)


def test_certificate_roundtrip_with_infinite_separation(tmp_path):
    cert = free_node_bandwidth(0.5, math.inf, 1.0, 1.0, 0.01)
    path = tmp_path / "cert_inf.json"
    save_certificate(cert, path)
    assert "Infinity" in path.read_text()
    back = load_certificate(path)
    assert math.isinf(back.inputs["delta"])
    assert dict(back.inputs) == dict(cert.inputs)


def test_certificate_rejects_bad_method(tmp_path):
    path = tmp_path / "bad_cert.json"
    path.write_text('{"omega": 1.0, "tolerance": 0.1, '
                    '"method": "horoscope", "inputs": {}}')
    with pytest.raises(ConfigInvalid):
        load_certificate(path)


def test_reconstruction_csv_columns(tmp_path, kernel):
    cfg = SamplerConfig(theta=0.05, alpha=1.0, T=4.0)
    train = SpikeTrain(np.array([1.0, 2.0, 2.5]),
                       np.array([1.0, -1.0, 1.0]), cfg)
    rec = decode(train, 1.0, 2.0, kernel, np.linspace(0.5, 3.5, 21))
    path = tmp_path / "rec.csv"
    save_reconstruction_csv(rec, path)
    assert path.read_text().splitlines()[0] == "t,re,im,truncation_flag"
    data = np.genfromtxt(path, delimiter=",", names=True)
    np.testing.assert_array_equal(data["t"], rec.grid)
    np.testing.assert_array_equal(data["re"], rec.values.real)
    np.testing.assert_array_equal(data["im"], rec.values.imag)
    np.testing.assert_array_equal(data["truncation_flag"], rec.flags)
