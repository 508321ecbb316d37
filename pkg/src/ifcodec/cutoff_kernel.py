"""Frequency cut-off function psi and the tabulated decoder kernel.

The cut-off is constructed in the frequency domain as
psihat = v * indicator([-3/2, 3/2]), where v is the standard bump
c exp(-1 / (1/4 - t^2)) on (-1/2, 1/2) normalized to unit mass.  This makes
psihat smooth with psihat = 1 on [-1, 1], psihat = 0 outside [-2, 2] and
0 <= psihat <= 1 in between.  On the time side the construction is the
product

    psi(x) = vhat(x) * sin(3 pi x) / (pi x),

which is real, even, has psi(0) = 3 and unit integral, and decays faster
than exp(-sqrt(|x|)) times a constant.  psi and psi' are tabulated once on a
uniform grid and evaluated later by cubic interpolation; the decoder kernel
is K(t) = alpha0 * Omega * psi(Omega t) + Omega^2 * psi'(Omega t).

``decay_C`` is the fitted envelope constant max over the table of
|psi| e^(sqrt|x|) and |psi'| e^(sqrt|x|), so the envelope inequalities hold
pointwise on the table by construction and feed the documented L1 bound
integral |alpha psi + psi'| <= 4 decay_C (alpha + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, simpson

from .errors import IntervalInvalid, OutOfTabulatedRange, QuadratureFailure

__all__ = ["CutoffKernel", "CutoffReport", "build_cutoff", "verify_cutoff",
           "eval_decoder_kernel", "psi_values", "dpsi_values", "kernel_l1",
           "save_kernel", "load_kernel"]

_GL_FREQ_NODES = 1600


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    inside = np.abs(t) < 0.5
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (0.25 - ti * ti))
    return out


def _sinc_prime(u: np.ndarray) -> np.ndarray:
    """Derivative of numpy's normalized sinc, with a series branch near 0."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-3
    us = u[small]
    out[small] = (-np.pi ** 2 / 3.0) * us + (np.pi ** 4 / 30.0) * us ** 3 \
        - (np.pi ** 6 / 840.0) * us ** 5
    ub = u[~small]
    out[~small] = (np.cos(np.pi * ub) - np.sinc(ub)) / ub
    return out


def _vhat_tables(xs: np.ndarray, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """vhat and vhat' on xs >= 0 by Gauss-Legendre quadrature over [0, 1/2]."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_nodes)
    t = 0.25 * (gl_x + 1.0)          # nodes on [0, 1/2]
    w = 0.25 * gl_w
    c0, _ = quad(lambda s: math.exp(-1.0 / (0.25 - s * s)) if abs(s) < 0.5 else 0.0,
                 -0.5, 0.5, epsabs=1e-15, epsrel=1e-13, limit=200)
    v = _bump(t) / c0
    w_even = 2.0 * w * v             # for vhat = 2 int v cos(2 pi t x)
    w_odd = -4.0 * math.pi * w * t * v   # for vhat' = -4 pi int t v sin(2 pi t x)
    vhat = np.empty_like(xs)
    dvhat = np.empty_like(xs)
    block = max(1, 48_000_000 // (8 * n_nodes))
    for i in range(0, xs.size, block):
        ang = 2.0 * np.pi * np.outer(xs[i:i + block], t)
        vhat[i:i + block] = np.cos(ang) @ w_even
        dvhat[i:i + block] = np.sin(ang) @ w_odd
    return vhat, dvhat


@dataclass(frozen=True, eq=False)
class CutoffKernel:
    """Tabulated psi and psi' on [-radius, radius] with fitted decay constant."""

    radius: float
    grid_step: float
    table_x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    decay_C: float
    edge_C: float

    @property
    def n_half(self) -> int:
        return (self.table_x.size - 1) // 2


def build_cutoff(radius: float = 60.0, grid_step: float = 1e-3) -> CutoffKernel:
    """Tabulate psi and psi' on [-radius, radius] with the given step.

    Parameters
    ----------
    radius : float
        Table half-width; must be >= 50 so the suppressed tail is far below
        the decoder error budget.
    grid_step : float
        Uniform step of the table; must be <= 1e-3 so cubic interpolation
        stays within its share of the budget.

    Raises
    ------
    QuadratureFailure
        If the frequency quadrature fails its own resolution cross-check.
    """
    if radius < 50.0:
        raise IntervalInvalid(f"radius must be >= 50, got {radius}")
    if not (0 < grid_step <= 1e-3):
        raise IntervalInvalid(f"grid_step must be in (0, 1e-3], got {grid_step}")

    n_half = int(round(radius / grid_step))
    radius = n_half * grid_step
    xs = np.arange(n_half + 1) * grid_step
    vhat, dvhat = _vhat_tables(xs, _GL_FREQ_NODES)

    # resolution cross-check on a subsample
    sub = xs[:: max(1, n_half // 997)]
    v2, dv2 = _vhat_tables(sub, _GL_FREQ_NODES + _GL_FREQ_NODES // 2)
    err = max(np.abs(v2 - vhat[:: max(1, n_half // 997)]).max(),
              np.abs(dv2 - dvhat[:: max(1, n_half // 997)]).max())
    if err > 1e-11:
        raise QuadratureFailure(f"frequency quadrature self-check off by {err:.3e}")

    s_val = 3.0 * np.sinc(3.0 * xs)
    s_der = 9.0 * _sinc_prime(3.0 * xs)
    psi_pos = vhat * s_val
    dpsi_pos = dvhat * s_val + vhat * s_der

    # mirror: psi even, psi' odd; exact symmetry on the table
    table_x = np.concatenate((-xs[:0:-1], xs))
    psi = np.concatenate((psi_pos[:0:-1], psi_pos))
    dpsi = np.concatenate((-dpsi_pos[:0:-1], dpsi_pos))

    env = np.exp(np.sqrt(np.abs(xs)))
    prod = np.maximum(np.abs(psi_pos) * env, np.abs(dpsi_pos) * env)
    decay_C = float(prod.max())
    edge = xs >= 0.8 * radius
    edge_C = float(prod[edge].max())
    return CutoffKernel(radius=radius, grid_step=grid_step, table_x=table_x,
                        psi=psi, dpsi=dpsi, decay_C=decay_C, edge_C=edge_C)


def _interp_cubic(table: np.ndarray, n_half: int, h: float, q: np.ndarray,
                  out_mask: np.ndarray) -> np.ndarray:
    """4-point Lagrange cubic interpolation on the uniform symmetric table."""
    s = q / h + n_half
    i = np.floor(s).astype(np.int64)
    np.clip(i, 1, table.size - 3, out=i)
    f = s - i
    fm, f0, f1 = f + 1.0, f, f - 1.0
    f2 = f - 2.0
    wm = -f0 * f1 * f2 / 6.0
    w0 = fm * f1 * f2 / 2.0
    w1 = -fm * f0 * f2 / 2.0
    w2 = fm * f0 * f1 / 6.0
    vals = wm * table[i - 1] + w0 * table[i] + w1 * table[i + 1] + w2 * table[i + 2]
    vals[out_mask] = 0.0
    return vals


def psi_values(kernel: CutoffKernel, x, strict: bool = False) -> np.ndarray:
    """Interpolated psi(x); zero outside the table (or raise when strict)."""
    q = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.abs(q) > kernel.radius
    if strict and out.any():
        raise OutOfTabulatedRange(
            f"|x| up to {np.abs(q).max():.3g} exceeds radius {kernel.radius}")
    return _interp_cubic(kernel.psi, kernel.n_half, kernel.grid_step, q, out)


def dpsi_values(kernel: CutoffKernel, x, strict: bool = False) -> np.ndarray:
    """Interpolated psi'(x); zero outside the table (or raise when strict)."""
    q = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.abs(q) > kernel.radius
    if strict and out.any():
        raise OutOfTabulatedRange(
            f"|x| up to {np.abs(q).max():.3g} exceeds radius {kernel.radius}")
    return _interp_cubic(kernel.dpsi, kernel.n_half, kernel.grid_step, q, out)


def eval_decoder_kernel(kernel: CutoffKernel, alpha0: float, omega: float,
                        t) -> tuple[np.ndarray, np.ndarray]:
    """Decoder kernel alpha0 Omega psi(Omega t) + Omega^2 psi'(Omega t).

    Returns
    -------
    values : ndarray
        Kernel values; zero where Omega|t| exceeds the tabulated radius.
    out_of_range : ndarray of bool
        Mask of arguments outside the table, for truncation accounting.
    """
    q = np.atleast_1d(np.asarray(t, dtype=float)) * omega
    out = np.abs(q) > kernel.radius
    vals = alpha0 * omega * _interp_cubic(kernel.psi, kernel.n_half,
                                          kernel.grid_step, q, out) \
        + omega * omega * _interp_cubic(kernel.dpsi, kernel.n_half,
                                        kernel.grid_step, q, out)
    return vals, out


def kernel_l1(kernel: CutoffKernel, alpha: float) -> float:
    """Table quadrature of integral |alpha psi + psi'|."""
    return float(np.trapezoid(np.abs(alpha * kernel.psi + kernel.dpsi),
                              kernel.table_x))


def tail_l1_bound(kernel: CutoffKernel, alpha0: float, omega: float,
                  distance: float) -> float:
    """Upper estimate of integral over |y| > distance of the decoder kernel.

    Uses the fitted decay envelopes |psi|, |psi'| <= C e^(-sqrt|z|): the
    tighter edge constant is certified for z >= 0.8 radius, the global one
    on the rest of the table.  The mass past z = Omega * distance is at most
    (alpha0 + Omega) C * 4 (sqrt(z) + 1) e^(-sqrt z).
    """
    z = max(omega * distance, 0.0)
    C = kernel.edge_C if z >= 0.8 * kernel.radius else kernel.decay_C
    rz = math.sqrt(z)
    return (alpha0 + omega) * C * 4.0 * (rz + 1.0) * math.exp(-rz)


@dataclass(frozen=True)
class CutoffReport:
    """Numeric re-verification of the cut-off conditions from the tables."""

    passed: bool
    flatness_dev: float       # max |psihat - 1| on |xi| <= 1
    support_leak: float       # max |psihat| on 2 < |xi| <= 4
    global_dev: float         # max |psihat - 1| on |xi| <= 4
    psi_at_zero: float
    decay_C: float
    l1_psi: float
    l1_dpsi: float


def verify_cutoff(kernel: CutoffKernel, tol: float = 1e-6) -> CutoffReport:
    """Recompute psihat from the tables and check the cut-off conditions.

    psihat(xi) = 2 integral_0^radius psi(x) cos(2 pi xi x) dx is evaluated by
    composite Simpson quadrature on the stored grid over a xi grid on [0, 4]
    (psi is even, so negative frequencies are redundant).
    """
    n_half = kernel.n_half
    xs = kernel.table_x[n_half:]
    psi_pos = kernel.psi[n_half:]
    xi = np.linspace(0.0, 4.0, 1025)
    vals = np.empty_like(xi)
    block = 64
    for i in range(0, xi.size, block):
        integrand = np.cos(2.0 * np.pi * np.outer(xi[i:i + block], xs)) \
            * psi_pos[None, :]
        vals[i:i + block] = 2.0 * simpson(integrand, dx=kernel.grid_step, axis=1)
    flat = float(np.abs(vals[xi <= 1.0] - 1.0).max())
    leak = float(np.abs(vals[xi > 2.0]).max())
    global_dev = float(np.abs(vals - 1.0).max())
    report = CutoffReport(
        passed=bool(flat <= tol and leak <= tol and global_dev <= 1.0 + tol),
        flatness_dev=flat,
        support_leak=leak,
        global_dev=global_dev,
        psi_at_zero=float(kernel.psi[n_half]),
        decay_C=kernel.decay_C,
        l1_psi=float(np.trapezoid(np.abs(kernel.psi), kernel.table_x)),
        l1_dpsi=float(np.trapezoid(np.abs(kernel.dpsi), kernel.table_x)),
    )
    return report


def save_kernel(kernel: CutoffKernel, path) -> None:
    """Binary table dump; reload is bit-exact."""
    np.savez(path, radius=kernel.radius, grid_step=kernel.grid_step,
             decay_C=kernel.decay_C, edge_C=kernel.edge_C,
             table_x=kernel.table_x, psi=kernel.psi, dpsi=kernel.dpsi)


def load_kernel(path) -> CutoffKernel:
    with np.load(path) as data:
        return CutoffKernel(radius=float(data["radius"]),
                            grid_step=float(data["grid_step"]),
                            table_x=data["table_x"].copy(),
                            psi=data["psi"].copy(),
                            dpsi=data["dpsi"].copy(),
                            decay_C=float(data["decay_C"]),
                            edge_C=float(data["edge_C"]))
