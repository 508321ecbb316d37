"""Bandwidth-based reconstruction from spike trains.

The decoder forms the potential u(t) = theta sum_{k <= j(t)} q_k
e^(alpha0 (t_k - t)) of the (possibly perturbed) train and convolves it with
the tabulated decoder kernel K = alpha0 Omega psi(Omega .) + Omega^2
psi'(Omega .).  The potential is the leaky primitive of the encoded signal up
to a charge of at most 2 theta inside the inference window, and the kernel is
an approximate identity on signals whose spectrum is concentrated in
[-Omega, Omega], which is what makes K * u a reconstruction.

The convolution integrates u exactly per spike interval with Gauss-Legendre
panels no wider than 0.25 / Omega; the final interval extends past the last
spike until the potential has decayed below 1e-12 of its last value.  Kernel
mass outside the tabulated radius is accumulated per grid point into a
truncation flag, and decoding refuses to proceed if the flag exceeds
1e-3 * theta anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrals import leaky_integral, leaky_integral_cells
from .cutoff_kernel import CutoffKernel, eval_decoder_kernel, tail_l1_bound
from .errors import EmptyWindow, IntervalInvalid, KernelRadiusTooSmall, LeakageSpecInvalid
from .if_encoder import SpikeTrain
from .signal_models import ChargePair, SignalModel

__all__ = ["InferenceWindow", "ReconstructedSignal", "inference_window",
           "potential_eval", "potential_on_grid", "leaky_primitive",
           "leaky_primitive_grid", "AnsatzDecoder", "decode", "make_grid"]

_TAIL_DECAY = math.log(1e12)   # last interval truncated once e^(-alpha0 s) < 1e-12
_FLAG_BUDGET = 1e-3


@dataclass(frozen=True)
class InferenceWindow:
    """Time window on which the reconstruction guarantee applies."""

    T1: float
    T2: float
    sigma: float

    @property
    def empty(self) -> bool:
        return not (self.T1 <= self.T2)


def inference_window(charges: ChargePair, theta: float, alpha0: float,
                     delta_alpha: float, omega: float, T: float) -> InferenceWindow:
    """Window [T1, T2] with T1 = sigma/(alpha0 - delta_alpha) + 4 sigma^2 / Omega
    and T2 = T - 4 sigma^2 / Omega, where sigma = log+ (max charge / theta)."""
    if not (alpha0 > 0 and delta_alpha >= 0 and alpha0 - delta_alpha > 0):
        raise LeakageSpecInvalid(
            f"need alpha0 - delta_alpha > 0, got {alpha0} +/- {delta_alpha}")
    if not (omega > 0 and theta > 0 and T > 0):
        raise IntervalInvalid("omega, theta and T must be positive")
    ratio = max(charges.past, charges.future) / theta
    sigma = math.log(ratio) if ratio > 1.0 else 0.0
    pad = 4.0 * sigma * sigma / omega
    return InferenceWindow(T1=sigma / (alpha0 - delta_alpha) + pad,
                           T2=T - pad, sigma=sigma)


def _potential_prefix(train: SpikeTrain, alpha: float) -> np.ndarray:
    """u(t_j) just after each firing, by the stable running recursion."""
    theta = train.config.theta
    u = np.empty(len(train), dtype=complex)
    acc = 0.0 + 0.0j
    prev = None
    for j, (t, q) in enumerate(zip(train.times, train.phases)):
        if prev is not None:
            acc *= math.exp(-alpha * (t - prev))
        acc += theta * q
        u[j] = acc
        prev = t
    return u


def potential_on_grid(train: SpikeTrain, alpha: float, ts) -> np.ndarray:
    """Potential u_(tau, alpha) at arbitrary times (0 before the first spike)."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    out = np.zeros(ts.shape, dtype=complex)
    if not len(train):
        return out
    u = _potential_prefix(train, alpha)
    j = np.searchsorted(train.times, ts, side="right") - 1
    live = j >= 0
    jl = j[live]
    out[live] = u[jl] * np.exp(-alpha * (ts[live] - train.times[jl]))
    return out


def potential_eval(train: SpikeTrain, alpha: float, t: float) -> complex:
    """Scalar convenience wrapper around :func:`potential_on_grid`."""
    return complex(potential_on_grid(train, alpha, [t])[0])


def leaky_primitive(m: SignalModel, alpha: float, t: float) -> complex:
    """F_alpha(t) = integral_{-inf}^t f(x) e^(alpha (x - t)) dx.

    The lower limit is truncated where amp_bound e^(alpha (x - t)) / alpha
    drops below 1e-10, which bounds the discarded mass by the same amount.
    """
    if not alpha > 0:
        raise LeakageSpecInvalid(f"alpha must be positive, got {alpha}")
    if m.amp_bound == 0.0:
        return 0.0 + 0.0j
    depth = math.log(m.amp_bound / (alpha * 1e-10)) / alpha
    if depth <= 0.0:
        return 0.0 + 0.0j
    lo = t - depth
    if m.support is not None:
        lo = max(lo, m.support[0])
        if lo >= t:
            return 0.0 + 0.0j
    return leaky_integral(m, lo, t, alpha)


def leaky_primitive_grid(m: SignalModel, alpha: float, ts: np.ndarray) -> np.ndarray:
    """F_alpha on an increasing grid, built incrementally cell by cell."""
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.empty(0, dtype=complex)
    if np.any(np.diff(ts) <= 0):
        raise IntervalInvalid("grid must be strictly increasing")
    out = np.empty(ts.size, dtype=complex)
    out[0] = leaky_primitive(m, alpha, float(ts[0]))
    if ts.size > 1:
        cells = leaky_integral_cells(m, ts, alpha)
        decay = np.exp(-alpha * np.diff(ts))
        acc = out[0]
        for i in range(ts.size - 1):
            acc = acc * decay[i] + cells[i]
            out[i + 1] = acc
    return out


class AnsatzDecoder:
    """Precomputed convolution state for one train; evaluate at arbitrary times."""

    def __init__(self, train: SpikeTrain, alpha0: float, omega: float,
                 kernel: CutoffKernel, panel_width: float | None = None):
        if not alpha0 > 0:
            raise LeakageSpecInvalid(f"alpha0 must be positive, got {alpha0}")
        if not omega > 0:
            raise IntervalInvalid(f"omega must be positive, got {omega}")
        self.train = train
        self.alpha0 = float(alpha0)
        self.omega = float(omega)
        self.kernel = kernel
        self.theta = train.config.theta
        n = len(train)
        if n == 0:
            self._nodes = np.empty(0)
            self._wu = np.empty(0, dtype=complex)
            self._u_max = 0.0
            self._support = (0.0, 0.0)
            return
        width = panel_width if panel_width is not None else 0.25 / self.omega
        u = _potential_prefix(train, self.alpha0)
        tail_end = float(train.times[-1]) + _TAIL_DECAY / self.alpha0
        edges_all, owners = [], []
        bounds = np.concatenate((train.times, [tail_end]))
        for j in range(n):
            a, b = float(bounds[j]), float(bounds[j + 1])
            k = max(1, int(math.ceil((b - a) / width)))
            edges = np.linspace(a, b, k + 1)
            edges_all.append(edges[:-1])
            owners.append(np.full(k, j))
        starts = np.concatenate(edges_all)
        owner = np.concatenate(owners)
        ends = np.concatenate((starts[1:], [tail_end]))
        gl_x, gl_w = np.polynomial.legendre.leggauss(8)
        mid = (starts + ends) / 2.0
        half = (ends - starts) / 2.0
        nodes = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
        weights = (half[:, None] * gl_w[None, :]).ravel()
        node_owner = np.repeat(owner, gl_x.size)
        uvals = u[node_owner] * np.exp(
            -self.alpha0 * (nodes - train.times[node_owner]))
        self._nodes = nodes
        self._wu = weights * uvals
        self._u_max = float(np.abs(u).max())
        self._support = (float(train.times[0]), tail_end)

    def evaluate(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """Reconstruction values and per-point truncation flags at times ts."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        vals = np.zeros(ts.shape, dtype=complex)
        flags = np.zeros(ts.shape, dtype=float)
        if self._nodes.size == 0:
            return vals, flags
        reach = self.kernel.radius / self.omega
        block = max(1, 4_000_000 // self._nodes.size)
        for i in range(0, ts.size, block):
            chunk = ts[i:i + block]
            dt = chunk[:, None] - self._nodes[None, :]
            kv, _ = eval_decoder_kernel(self.kernel, self.alpha0, self.omega,
                                        dt.ravel())
            kv = kv.reshape(dt.shape)
            vals[i:i + block] = kv @ self._wu
        uncovered = (ts - reach > self._support[0]) | (ts + reach < self._support[1])
        tail = tail_l1_bound(self.kernel, self.alpha0, self.omega, reach)
        flags += self._u_max * 1e-12          # truncated exponential tail
        flags[uncovered] += self._u_max * tail
        return vals, flags


@dataclass(frozen=True, eq=False)
class ReconstructedSignal:
    """Reconstruction samples with truncation accounting."""

    grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    omega: float
    alpha0: float

    @property
    def truncation_flag(self) -> float:
        return float(self.flags.max()) if self.flags.size else 0.0


def make_grid(window: InferenceWindow, omega: float,
              points_per_band: int = 32) -> np.ndarray:
    """Uniform grid over the window at points_per_band samples per 1/Omega."""
    if window.empty:
        raise EmptyWindow(f"window [{window.T1}, {window.T2}] is empty")
    n = max(2, int(math.ceil((window.T2 - window.T1) * points_per_band * omega)) + 1)
    return np.linspace(window.T1, window.T2, n)


def decode(train: SpikeTrain, alpha0: float, omega: float,
           kernel: CutoffKernel, grid: np.ndarray) -> ReconstructedSignal:
    """Evaluate the bandwidth-based reconstruction on a grid.

    Raises
    ------
    KernelRadiusTooSmall
        If any per-point truncation flag exceeds 1e-3 * theta; rebuild the
        kernel tables with a larger radius in that case.
    """
    dec = AnsatzDecoder(train, alpha0, omega, kernel)
    grid = np.asarray(grid, dtype=float)
    vals, flags = dec.evaluate(grid)
    budget = _FLAG_BUDGET * train.config.theta
    if flags.size and flags.max() > budget:
        raise KernelRadiusTooSmall(
            f"truncation flag {flags.max():.3e} exceeds budget {budget:.3e}; "
            f"tabulate the cut-off to a larger radius")
    return ReconstructedSignal(grid=grid, values=vals, flags=flags,
                               omega=float(omega), alpha0=float(alpha0))
