"""Shared factories for randomized test inputs."""

from __future__ import annotations

import math

import numpy as np

from ifcodec import SamplerConfig, SignalModel, SpikeTrain, build_signal


def random_atom_model(rng: np.random.Generator, family: str,
                      T: float = 5.0, *, complex_coeffs: bool = False,
                      n_max: int = 3) -> SignalModel:
    """Random small model of the given atom family, concentrated in [0, T].

    ``family`` is one of "fejer", "gaussian", "bspline"; the B-spline case
    produces a free-node model (unit scale, node gaps > 1).
    """
    n = int(rng.integers(1, n_max + 1))
    coeffs = rng.uniform(-1.0, 1.0, size=n)
    if complex_coeffs:
        coeffs = coeffs + 1j * rng.uniform(-1.0, 1.0, size=n)
    coeffs[np.abs(coeffs) < 0.1] += 0.2  # keep every atom visible

    if family == "bspline":
        order = int(rng.integers(2, 4))
        reach = (order + 1) / 2.0
        lo, hi = reach + 0.2, T - reach - 0.2
        gaps = rng.uniform(1.05, 1.9, size=n - 1) if n > 1 else np.empty(0)
        start = rng.uniform(lo, max(lo + 1e-6, hi - gaps.sum()))
        nodes = start + np.concatenate(([0.0], np.cumsum(gaps)))
        spec = {"kind": "free_node_spline", "nodes": nodes.tolist(),
                "generator": {"family": "bspline", "order": order}}
    else:
        kind = "fejer_atoms" if family == "fejer" else "gaussian_atoms"
        scale = float(rng.uniform(0.25, 0.6))
        gaps = rng.uniform(0.3, 1.2, size=n - 1) if n > 1 else np.empty(0)
        start = rng.uniform(0.8, max(0.81, T - 0.8 - gaps.sum()))
        nodes = start + np.concatenate(([0.0], np.cumsum(gaps)))
        spec = {"kind": kind, "nodes": nodes.tolist(), "scale": scale}

    if complex_coeffs:
        spec["coefficients"] = [[float(c.real), float(c.imag)] for c in coeffs]
    else:
        spec["coefficients"] = [float(c) for c in coeffs]
    return build_signal(spec)


def random_train(rng: np.random.Generator, theta: float = 0.05,
                 alpha: float = 1.0, T: float = 8.0, n_max: int = 25,
                 *, real_phases: bool = False) -> SpikeTrain:
    """Synthetic spike train (not produced by the encoder)."""
    cfg = SamplerConfig(theta=theta, alpha=alpha, T=T)
    n = int(rng.integers(1, n_max + 1))
    while True:
        times = np.sort(rng.uniform(0.0, T, size=n))
        if n == 1 or np.diff(times).min() > max(1e-4 * T, 4 * cfg.time_tol):
            break
    if real_phases:
        phases = rng.choice([-1.0, 1.0], size=n).astype(complex)
    else:
        phases = np.exp(2j * math.pi * rng.uniform(0.0, 1.0, size=n))
    return SpikeTrain(times=times, phases=phases, config=cfg)


def quadrature_spectrum(m: SignalModel, xi: float, reach: float) -> complex:
    """Fourier transform of f at xi by composite Gauss-Legendre panels.

    ``reach`` is the distance beyond the outermost nodes at which the signal
    is negligible (or exactly zero); panels are narrower than half an
    oscillation period so the rule converges spectrally.
    """
    lo = float(m.nodes.min()) - reach
    hi = float(m.nodes.max()) + reach
    width = min(0.2, 0.25 / max(abs(xi), 1.0))
    k = int(math.ceil((hi - lo) / width))
    edges = np.linspace(lo, hi, k + 1)
    gl_x, gl_w = np.polynomial.legendre.leggauss(12)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    xs = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    ws = (half[:, None] * gl_w[None, :]).ravel()
    from ifcodec import eval_signal
    vals = eval_signal(m, xs) * np.exp(-2j * np.pi * xi * xs)
    return complex(np.dot(ws, vals))
