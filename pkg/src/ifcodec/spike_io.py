"""File formats for spike trains, reconstructions and certificates.

All writers emit deterministic bytes: fixed key order, LF newlines, and
every float printed with 17 significant digits, which round-trips IEEE
doubles exactly.  Readers rebuild the full in-memory objects, so a
save/load cycle is bit-exact.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .ansatz_decoder import ReconstructedSignal
from .bounds import BandwidthCertificate, CertificateMethod
from .errors import ConfigInvalid
from .if_encoder import SamplerConfig, SpikeTrain

__all__ = ["save_spike_train", "load_spike_train", "save_reconstruction_csv",
           "save_certificate", "load_certificate"]


def _f(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if math.isnan(x):
        return "NaN"
    return format(x, ".17g")


def save_spike_train(train: SpikeTrain, path: str | Path) -> None:
    """Write a spike train as JSON with the sampler config inline."""
    cfg = train.config
    lines = ["{",
             f'  "theta": {_f(cfg.theta)},',
             f'  "alpha": {_f(cfg.alpha)},',
             f'  "T": {_f(cfg.T)},',
             f'  "time_tol": {_f(cfg.time_tol)},']
    rows = [f'    {{"t": {_f(t)}, "q_re": {_f(q.real)}, "q_im": {_f(q.imag)}}}'
            for t, q in zip(train.times, train.phases)]
    if rows:
        lines += ['  "spikes": [', ",\n".join(rows), "  ]"]
    else:
        lines.append('  "spikes": []')
    lines += ["}", ""]
    Path(path).write_text("\n".join(lines), encoding="ascii", newline="\n")


def load_spike_train(path: str | Path) -> SpikeTrain:
    """Read a spike train written by :func:`save_spike_train`."""
    try:
        doc = json.loads(Path(path).read_text(encoding="ascii"))
        cfg = SamplerConfig(theta=doc["theta"], alpha=doc["alpha"], T=doc["T"],
                            time_tol=doc["time_tol"])
        times = np.asarray([row["t"] for row in doc["spikes"]], dtype=float)
        phases = np.asarray([complex(row["q_re"], row["q_im"])
                             for row in doc["spikes"]], dtype=complex)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"malformed spike-train file {path}: {exc}") from exc
    return SpikeTrain(times=times, phases=phases, config=cfg)


def save_reconstruction_csv(rec: ReconstructedSignal, path: str | Path) -> None:
    """Write reconstruction samples as CSV: t, re, im, truncation_flag."""
    lines = ["t,re,im,truncation_flag"]
    for t, v, flag in zip(rec.grid, rec.values, rec.flags):
        lines.append(f"{_f(t)},{_f(v.real)},{_f(v.imag)},{_f(flag)}")
    lines.append("")
    Path(path).write_text("\n".join(lines), encoding="ascii", newline="\n")


def save_certificate(cert: BandwidthCertificate, path: str | Path) -> None:
    """Write a bandwidth certificate as JSON (inputs in sorted key order)."""
    lines = ["{",
             f'  "omega": {_f(cert.omega)},',
             f'  "tolerance": {_f(cert.tolerance)},',
             f'  "method": "{cert.method.value}",',
             '  "inputs": {']
    rows = [f'    "{key}": {_f(cert.inputs[key])}'
            for key in sorted(cert.inputs)]
    lines.append(",\n".join(rows))
    lines += ["  }", "}", ""]
    Path(path).write_text("\n".join(lines), encoding="ascii", newline="\n")


def load_certificate(path: str | Path) -> BandwidthCertificate:
    """Read a certificate written by :func:`save_certificate`."""
    try:
        doc = json.loads(Path(path).read_text(encoding="ascii"))
        cert = BandwidthCertificate(
            omega=float(doc["omega"]), tolerance=float(doc["tolerance"]),
            method=CertificateMethod(doc["method"]),
            inputs={k: float(v) for k, v in doc["inputs"].items()})
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"malformed certificate file {path}: {exc}") from exc
    return cert
