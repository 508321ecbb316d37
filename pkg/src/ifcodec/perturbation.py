"""Controlled corruption of clean encoder output.

Experiments feed reconstruction with two uncertainty sources: the decoder
only knows the leakage rate up to a specification interval, and the spike
times may be decimated or jittered.  Both injections are deterministic
given their seed so that sweep cells are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import (ConfigInvalid, EmptyModel, LeakageSpecInvalid,
                     OrderUnrecoverable)
from .if_encoder import SpikeTrain
from .metrics import spike_uncertainty

__all__ = ["JitterMode", "JitterSpec", "jitter_spikes", "leakage_draw"]


class JitterMode(str, Enum):
    """How spike times are perturbed."""

    UNIFORM_JITTER = "uniform_jitter"
    GRID_SNAP = "grid_snap"


@dataclass(frozen=True)
class JitterSpec:
    """Spike-time perturbation request.

    ``budget`` is the target total displacement for uniform jitter;
    ``grid_step`` is the snap resolution for grid decimation.
    """

    mode: JitterMode
    budget: float = 0.0
    grid_step: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ConfigInvalid(f"jitter budget must be >= 0, got {self.budget}")
        if self.mode is JitterMode.GRID_SNAP and not self.grid_step > 0:
            raise ConfigInvalid("grid snapping requires a positive grid_step")


def _require_order(times: np.ndarray, gap: float, context: str) -> None:
    if times.size >= 2 and float(np.diff(times).min()) < gap:
        raise OrderUnrecoverable(
            f"{context}: spike gap below the minimum {gap:.3e}")


def jitter_spikes(train: SpikeTrain, spec: JitterSpec) -> tuple[SpikeTrain, float]:
    """Perturb spike times according to ``spec``; phases are untouched.

    Uniform jitter draws i.i.d. symmetric offsets, rescales them so the
    total displacement equals the budget, and then shrinks all offsets
    geometrically until the perturbed times are strictly increasing with a
    minimum gap of twice the encoder's time tolerance and stay inside
    [0, T].  Grid snapping rounds each time to the nearest multiple of
    ``grid_step``.  Returns the new train and the realized total
    displacement (which clipping and shrinking may leave below the budget).
    """
    times = train.times
    T = train.config.T
    gap = 2.0 * train.config.time_tol
    if len(train) == 0:
        if spec.budget > 0:
            raise EmptyModel("an empty train cannot absorb a jitter budget")
        return train, 0.0
    _require_order(times, gap, "input train")

    if spec.mode is JitterMode.GRID_SNAP:
        g = spec.grid_step
        snapped = np.round(times / g) * g
        snapped = np.clip(snapped, 0.0, np.floor(T / g) * g)
        _require_order(snapped, gap, "grid-snapped train")
        new_times = snapped
    else:
        rng = np.random.default_rng(spec.seed)
        offsets = rng.uniform(-1.0, 1.0, size=times.size)
        total = float(np.abs(offsets).sum())
        if spec.budget == 0.0 or total == 0.0:
            offsets = np.zeros_like(offsets)
        else:
            offsets *= spec.budget / total
        lam = 1.0
        new_times = None
        for _ in range(200):
            cand = np.clip(times + lam * offsets, 0.0, T)
            if cand.size < 2 or float(np.diff(cand).min()) >= gap:
                new_times = cand
                break
            lam *= 0.5
        if new_times is None:
            raise OrderUnrecoverable(
                "jitter budget cannot be shrunk into a strictly ordered train")

    jittered = replace(train, times=new_times)
    return jittered, spike_uncertainty(times, new_times)


def leakage_draw(alpha0: float, delta_alpha: float, seed: int) -> float:
    """Reproducible leakage rate drawn uniformly from [alpha0 - da, alpha0 + da]."""
    if not (alpha0 > 0 and delta_alpha >= 0 and alpha0 - delta_alpha > 0):
        raise LeakageSpecInvalid(
            f"need alpha0 - delta_alpha > 0, got {alpha0} +/- {delta_alpha}")
    if delta_alpha == 0.0:
        return float(alpha0)
    rng = np.random.default_rng(seed)
    return float(rng.uniform(alpha0 - delta_alpha, alpha0 + delta_alpha))
