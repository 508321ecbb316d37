"""Signal models with closed-form spectra.

Models are finite sums f(x) = sum_k c_k * phi((x - lambda_k) / scale) built
from one of three generator families (Gaussian, centered cardinal B-spline,
Fejer kernel), each of which has a closed-form Fourier transform under the
convention fhat(xi) = integral f(x) exp(-2 pi i xi x) dx.

Shift-invariant and free-node kinds fix scale = 1 and attach an explicit
generator record carrying a certified spectral envelope
|phihat(xi)| <= D (1 + |xi|)^(-s-1), a spectral floor on [-1/2, 1/2], and the
data needed by bandwidth certificates.  The envelope is enforced at xi = 0 and
on |xi| >= 1, which is the region bandwidth certificates consume (they only
integrate the envelope over |xi| > floor(Omega) >= 1).

A constant signal kind is included for encoder tests; it has no integrable
spectrum and spectral operations reject it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .errors import (
    EmptyModel,
    EnvelopeViolation,
    IntervalInvalid,
    LeakageSpecInvalid,
    NodeSeparationViolation,
    SpectrumUnavailable,
)

__all__ = [
    "GeneratorFamily",
    "SignalKind",
    "GeneratorSpec",
    "ChargePair",
    "SignalModel",
    "default_generator",
    "build_signal",
    "load_signal",
    "signal_to_dict",
    "eval_signal",
    "eval_spectrum",
    "signal_charge",
    "past_future_charge",
    "rescaled",
    "l2_norm",
    "riesz_lower_bound",
]

# Grid used to certify declared envelopes: xi = 0 plus a log grid on [1, 1e4].
_ENVELOPE_GRID = np.concatenate(([0.0], np.logspace(0.0, 4.0, 600)))
_FLOOR_GRID = np.linspace(0.0, 0.5, 2001)


class GeneratorFamily(str, Enum):
    GAUSSIAN = "gaussian"
    BSPLINE = "bspline"
    FEJER = "fejer"


class SignalKind(str, Enum):
    FEJER_ATOM_SUM = "fejer_atoms"
    GAUSSIAN_ATOM_SUM = "gaussian_atoms"
    SHIFT_INVARIANT = "shift_invariant"
    FREE_NODE_SPLINE = "free_node_spline"
    CONSTANT = "constant"


def _bspline_atom(x: np.ndarray, order: int) -> np.ndarray:
    """Centered cardinal B-spline of degree ``order`` (support width order+1)."""
    m = order
    out = np.zeros_like(x, dtype=float)
    for k in range(m + 2):
        out += (-1.0) ** k * math.comb(m + 1, k) * np.maximum(x + (m + 1) / 2.0 - k, 0.0) ** m
    return out / math.factorial(m)


def _atom_values(family: GeneratorFamily, order: int, u: np.ndarray) -> np.ndarray:
    if family is GeneratorFamily.GAUSSIAN:
        return np.exp(-np.pi * u * u)
    if family is GeneratorFamily.FEJER:
        return np.sinc(u) ** 2
    return _bspline_atom(u, order)


def _atom_spectrum(family: GeneratorFamily, order: int, xi: np.ndarray) -> np.ndarray:
    if family is GeneratorFamily.GAUSSIAN:
        return np.exp(-np.pi * xi * xi)
    if family is GeneratorFamily.FEJER:
        return np.maximum(0.0, 1.0 - np.abs(xi))
    return np.sinc(xi) ** (order + 1)


def _atom_envelope(family: GeneratorFamily, order: int, u: np.ndarray) -> np.ndarray:
    """Pointwise upper bound on |atom| used for certified amplitude bounds."""
    if family is GeneratorFamily.GAUSSIAN:
        return np.exp(-np.pi * u * u)
    if family is GeneratorFamily.FEJER:
        return np.minimum(1.0, 1.0 / (np.pi * np.maximum(np.abs(u), 1e-300)) ** 2)
    return np.where(np.abs(u) < (order + 1) / 2.0, _bspline_atom(np.zeros(1), order)[0], 0.0)


def _atom_reach(family: GeneratorFamily, order: int, scale: float) -> float:
    """Distance beyond which an atom's envelope is negligible or zero."""
    if family is GeneratorFamily.BSPLINE:
        return scale * (order + 1) / 2.0
    return 8.0 * scale


@dataclass(frozen=True)
class GeneratorSpec:
    """Generator family record with certified spectral constants.

    Attributes
    ----------
    family : GeneratorFamily
    order : int
        B-spline degree; ignored by the other families.
    envelope_D, envelope_s : float
        Declared decay envelope |phihat(xi)| <= D (1+|xi|)^(-s-1), certified
        at xi = 0 and on 1 <= |xi| <= 1e4.
    floor_tau : float
        Positive lower bound for |phihat| on [-1/2, 1/2].
    """

    family: GeneratorFamily
    order: int = 3
    envelope_D: float = 1.0
    envelope_s: float = 1.0
    floor_tau: float = 0.0

    def spectrum(self, xi) -> np.ndarray:
        return _atom_spectrum(self.family, self.order, np.asarray(xi, dtype=float))


def default_generator(family: GeneratorFamily | str, order: int = 3) -> GeneratorSpec:
    """Generator spec with envelope/floor constants valid for the family.

    D = 1 works for every family on the certified region: each base spectrum
    satisfies |phihat(xi)| <= (1+|xi|)^(-s-1) for |xi| >= 1 with s = 3
    (Gaussian), s = order (B-spline) or s = 2 (Fejer), with equality only
    at xi = 0.
    """
    family = GeneratorFamily(family)
    if family is GeneratorFamily.GAUSSIAN:
        s, tau = 3.0, math.exp(-math.pi / 4.0)
    elif family is GeneratorFamily.BSPLINE:
        s, tau = float(order), (2.0 / math.pi) ** (order + 1)
    else:
        s, tau = 2.0, 0.5
    return GeneratorSpec(family=family, order=order, envelope_D=1.0, envelope_s=s,
                         floor_tau=tau)


@dataclass(frozen=True)
class ChargePair:
    """Upper estimates of the charge a leaky integrator can see outside the record."""

    past: float
    future: float


@dataclass(frozen=True, eq=False)
class SignalModel:
    """Validated signal model; construct through :func:`build_signal`."""

    kind: SignalKind
    coefficients: np.ndarray
    nodes: np.ndarray
    scale: float
    generator: GeneratorSpec | None
    amp_bound: float
    support: tuple[float, float] | None = None

    @property
    def family(self) -> GeneratorFamily:
        if self.kind is SignalKind.FEJER_ATOM_SUM:
            return GeneratorFamily.FEJER
        if self.kind is SignalKind.GAUSSIAN_ATOM_SUM:
            return GeneratorFamily.GAUSSIAN
        if self.generator is None:
            raise SpectrumUnavailable("constant model has no generator family")
        return self.generator.family

    @property
    def order(self) -> int:
        return self.generator.order if self.generator is not None else 0


_KIND_ALIASES = {k.value: k for k in SignalKind}


def _as_complex_array(coefficients) -> np.ndarray:
    out = []
    for c in coefficients:
        if isinstance(c, (list, tuple)):
            out.append(complex(c[0], c[1]))
        else:
            out.append(complex(c))
    return np.asarray(out, dtype=complex)


def _verify_generator(gen: GeneratorSpec) -> None:
    if gen.envelope_D <= 0 or gen.envelope_s <= 0:
        raise EnvelopeViolation("envelope constants must be positive")
    spec = np.abs(gen.spectrum(_ENVELOPE_GRID))
    bound = gen.envelope_D * (1.0 + _ENVELOPE_GRID) ** (-gen.envelope_s - 1.0)
    if np.any(spec > bound * (1.0 + 1e-12) + 1e-300):
        i = int(np.argmax(spec - bound))
        raise EnvelopeViolation(
            f"|phihat({_ENVELOPE_GRID[i]:.6g})| = {spec[i]:.6g} exceeds declared "
            f"envelope {bound[i]:.6g}")
    if gen.floor_tau <= 0:
        raise EnvelopeViolation("floor_tau must be positive")
    floor = np.abs(gen.spectrum(_FLOOR_GRID)).min()
    if floor < gen.floor_tau * (1.0 - 1e-9):
        raise EnvelopeViolation(
            f"spectral floor {floor:.6g} below declared floor_tau {gen.floor_tau:.6g}")


def _amp_bound(kind, coefficients, nodes, scale, generator, support) -> float:
    family = {SignalKind.FEJER_ATOM_SUM: GeneratorFamily.FEJER,
              SignalKind.GAUSSIAN_ATOM_SUM: GeneratorFamily.GAUSSIAN}.get(kind)
    if family is None:
        family = generator.family
    order = generator.order if generator is not None else 0
    reach = _atom_reach(family, order, scale)
    lo, hi = nodes.min() - reach, nodes.max() + reach
    if support is not None:
        lo, hi = max(lo, support[0]), min(hi, support[1])
        if lo >= hi:
            return 0.0
    # >= 40 samples per atom width
    n = max(81, int(math.ceil((hi - lo) / (scale / 40.0))) + 1)
    n = min(n, 4_000_001)
    grid = np.linspace(lo, hi, n)
    u = (grid[:, None] - nodes[None, :]) / scale
    vals = _atom_values(family, order, u) @ coefficients
    grid_max = float(np.abs(vals).max())
    # |f| beyond the grid is at most sum|c_k| * envelope(reach/scale)
    tail = float(np.abs(coefficients).sum()) * float(
        _atom_envelope(family, order, np.asarray([reach / scale]))[0])
    return 1.05 * max(grid_max, tail)


def build_signal(spec: dict) -> SignalModel:
    """Build and validate a signal model from its dictionary description.

    Parameters
    ----------
    spec : dict
        Keys: ``kind`` (one of ``fejer_atoms``, ``gaussian_atoms``,
        ``shift_invariant``, ``free_node_spline``, ``constant``),
        ``coefficients`` (list of reals or [re, im] pairs), ``nodes``,
        optional ``scale`` (default 1.0), optional ``generator``
        ({family, order, envelope_D, envelope_s, floor_tau}), optional
        ``support`` ([a, b] hard time-domain clip; disables spectral ops).

    Raises
    ------
    EmptyModel, NodeSeparationViolation, EnvelopeViolation
    """
    try:
        kind = _KIND_ALIASES[spec["kind"]]
    except KeyError as exc:
        raise EmptyModel(f"unknown or missing signal kind: {spec.get('kind')!r}") from exc

    coefficients = _as_complex_array(spec.get("coefficients", []))
    if coefficients.size == 0:
        raise EmptyModel("coefficient list is empty")

    support = spec.get("support")
    if support is not None:
        support = (float(support[0]), float(support[1]))
        if not (support[0] < support[1]):
            raise IntervalInvalid(f"support interval invalid: {support}")

    if kind is SignalKind.CONSTANT:
        if coefficients.size != 1:
            raise EmptyModel("constant mode takes exactly one coefficient")
        amp = float(np.abs(coefficients[0]))
        return SignalModel(kind=kind, coefficients=coefficients,
                           nodes=np.zeros(1), scale=1.0, generator=None,
                           amp_bound=amp, support=support)

    nodes = np.asarray(spec.get("nodes", []), dtype=float)
    if nodes.size == 0:
        raise EmptyModel("node list is empty")
    if nodes.size != coefficients.size:
        raise EmptyModel(f"{coefficients.size} coefficients vs {nodes.size} nodes")
    if nodes.size > 1 and np.any(np.diff(nodes) <= 0):
        raise NodeSeparationViolation("nodes must be strictly increasing")

    scale = float(spec.get("scale", 1.0))
    if not (scale > 0):
        raise EmptyModel(f"scale must be positive, got {scale}")

    generator = None
    if kind in (SignalKind.SHIFT_INVARIANT, SignalKind.FREE_NODE_SPLINE):
        gspec = spec.get("generator", {"family": "bspline", "order": 3})
        if isinstance(gspec, GeneratorSpec):
            generator = gspec
        else:
            base = default_generator(gspec.get("family", "bspline"),
                                     int(gspec.get("order", 3)))
            overrides = {k: float(gspec[k]) for k in
                         ("envelope_D", "envelope_s", "floor_tau") if k in gspec}
            generator = replace(base, **overrides)
        _verify_generator(generator)
        if scale != 1.0:
            raise NodeSeparationViolation(
                f"{kind.value} models fix scale = 1, got {scale}")
        if kind is SignalKind.SHIFT_INVARIANT:
            if np.any(np.abs(nodes - np.round(nodes)) > 1e-12):
                raise NodeSeparationViolation("shift-invariant nodes must be integers")
            nodes = np.round(nodes)
        else:
            delta = float(np.diff(nodes).min()) if nodes.size > 1 else np.inf
            if not delta > 1.0:
                raise NodeSeparationViolation(
                    f"free-node separation must exceed 1, got {delta:.6g}")

    amp = _amp_bound(kind, coefficients, nodes, scale, generator, support)
    return SignalModel(kind=kind, coefficients=coefficients, nodes=nodes,
                       scale=scale, generator=generator, amp_bound=amp,
                       support=support)


def load_signal(path) -> SignalModel:
    """Read a signal spec JSON file and build the model."""
    with open(path, "r", encoding="utf-8") as fh:
        return build_signal(json.load(fh))


def signal_to_dict(m: SignalModel) -> dict:
    """Dictionary form of a model, round-trippable through build_signal."""
    out = {
        "kind": m.kind.value,
        "coefficients": [[float(c.real), float(c.imag)] for c in m.coefficients],
        "nodes": [float(x) for x in m.nodes],
        "scale": float(m.scale),
    }
    if m.generator is not None:
        g = m.generator
        out["generator"] = {"family": g.family.value, "order": g.order,
                            "envelope_D": g.envelope_D, "envelope_s": g.envelope_s,
                            "floor_tau": g.floor_tau}
    if m.support is not None:
        out["support"] = [m.support[0], m.support[1]]
    return out


def eval_signal(m: SignalModel, t):
    """Evaluate f at scalar or array t; complex output matches input shape."""
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ts = np.atleast_1d(ts)
    if m.kind is SignalKind.CONSTANT:
        vals = np.full(ts.shape, m.coefficients[0], dtype=complex)
    else:
        vals = np.empty(ts.shape, dtype=complex)
        block = max(1, 4_000_000 // m.nodes.size)
        for i in range(0, ts.size, block):
            chunk = ts[i:i + block]
            u = (chunk[:, None] - m.nodes[None, :]) / m.scale
            vals[i:i + block] = _atom_values(m.family, m.order, u) @ m.coefficients
    if m.support is not None:
        vals = np.where((ts >= m.support[0]) & (ts <= m.support[1]), vals, 0.0)
    return vals[0] if scalar else vals


def eval_spectrum(m: SignalModel, xi):
    """Closed-form spectrum fhat(xi) = (sum_k c_k e^(-2 pi i xi lambda_k)) * s*phihat(s*xi)."""
    if m.kind is SignalKind.CONSTANT or m.support is not None:
        raise SpectrumUnavailable(
            "spectrum is only available for unclipped atom-sum models")
    xis = np.asarray(xi, dtype=float)
    scalar = xis.ndim == 0
    xis = np.atleast_1d(xis)
    phase = np.exp(-2j * np.pi * xis[:, None] * m.nodes[None, :]) @ m.coefficients
    vals = phase * m.scale * _atom_spectrum(m.family, m.order, m.scale * xis)
    return vals[0] if scalar else vals


def signal_charge(m: SignalModel, a: float, b: float) -> float:
    """integral_a^b |f(x)| dx by adaptive quadrature (relative tolerance 1e-8)."""
    if not (np.isfinite(a) and np.isfinite(b)) or a > b:
        raise IntervalInvalid(f"invalid interval [{a}, {b}]")
    if a == b or m.amp_bound == 0.0:
        return 0.0
    lo, hi = a, b
    if m.support is not None:
        lo, hi = max(lo, m.support[0]), min(hi, m.support[1])
        if lo >= hi:
            return 0.0
    pts = [x for x in np.atleast_1d(m.nodes) if lo < x < hi]
    if m.support is not None:
        pts += [x for x in m.support if lo < x < hi]
    val, err = quad(lambda x: abs(eval_signal(m, x)), lo, hi,
                    points=sorted(pts) or None, limit=400,
                    epsabs=1e-13, epsrel=1e-8)
    return float(val)


def _leaky_weight_integral(m: SignalModel, t: float, alpha: float,
                           lo_floor: float | None = None) -> float:
    """integral_{lo}^t |f(x)| e^(alpha (x - t)) dx, truncated at e^-45.

    ``lo`` is -inf by default; ``lo_floor`` restricts the integral to start
    no earlier than a fixed anchor.
    """
    lo = t - 45.0 / alpha
    if lo_floor is not None:
        lo = max(lo, lo_floor)
    if m.support is not None:
        lo = max(lo, m.support[0])
    if lo >= t:
        return 0.0
    # panels split at nodes, width <= min(0.5/alpha, scale/2)
    width = min(0.5 / alpha, m.scale / 2.0)
    cuts = np.unique(np.concatenate((
        [lo, t], np.clip(m.nodes, lo, t))))
    xs, ws = [], []
    gl_x, gl_w = np.polynomial.legendre.leggauss(12)
    for a0, b0 in zip(cuts[:-1], cuts[1:]):
        if b0 <= a0:
            continue
        k = max(1, int(math.ceil((b0 - a0) / width)))
        edges = np.linspace(a0, b0, k + 1)
        mid = (edges[:-1] + edges[1:]) / 2.0
        half = (edges[1:] - edges[:-1]) / 2.0
        xs.append((mid[:, None] + half[:, None] * gl_x[None, :]).ravel())
        ws.append((half[:, None] * gl_w[None, :]).ravel())
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    vals = np.abs(eval_signal(m, x)) * np.exp(alpha * (x - t))
    return float(np.dot(w, vals))


def past_future_charge(m: SignalModel, alpha0: float, delta_alpha: float,
                       t_anchor: float | None = None) -> ChargePair:
    """Upper estimates of the past and future charge under a leakage spec.

    The past charge bounds sup over t <= 0 and alpha' in
    [alpha0 - delta_alpha, alpha0 + delta_alpha] of
    |integral_{-inf}^t f(x) e^(alpha'(x-t)) dx|; the future charge bounds
    sup over t > t_anchor of |integral_{t_anchor}^t f(x) e^(alpha'(x-t)) dx|.
    When ``t_anchor`` (normally the last firing time) is unknown the future
    estimate falls back to the anchor-free majorant
    sup_t integral_{-inf}^t |f| e^(alpha'(x-t)) dx, which dominates every
    anchored value.  Both estimates run through the nonnegative majorant |f|
    on a t grid and an 11-point alpha' grid, are inflated by 1.05, and are
    clipped to the safe bound amp_bound / (alpha0 - delta_alpha).
    """
    if not (alpha0 > 0 and delta_alpha >= 0 and alpha0 - delta_alpha > 0):
        raise LeakageSpecInvalid(
            f"need alpha0 - delta_alpha > 0, got alpha0={alpha0}, delta_alpha={delta_alpha}")
    a_min = alpha0 - delta_alpha
    safe = m.amp_bound / a_min
    if m.amp_bound == 0.0:
        return ChargePair(0.0, 0.0)
    alphas = np.linspace(a_min, alpha0 + delta_alpha, 11)

    def sup_over(ts: np.ndarray, lo_floor: float | None = None) -> float:
        best = 0.0
        for ap in alphas:
            for t in ts:
                best = max(best, _leaky_weight_integral(m, float(t), float(ap),
                                                        lo_floor))
        return best

    # Past: t from 0 downward; stop once the crude bound amp e^(a t)/a_min
    # falls below 1e-3 of the running max.
    if m.support is not None and m.support[0] >= 0.0:
        past = 0.0
    else:
        step = 0.5 / a_min
        ts, k = [], 0
        running = 0.0
        while True:
            t = -k * step
            ts.append(t)
            running = max(running, _leaky_weight_integral(m, t, float(a_min)))
            k += 1
            if k >= 8 and m.amp_bound * math.exp(a_min * (-k * step)) / a_min \
                    < 1e-3 * max(running, 1e-300):
                break
            if k > 4000:
                break
        past = min(1.05 * sup_over(np.asarray(ts)), safe)

    if m.kind is SignalKind.CONSTANT:
        lo_t, hi_t = 0.0, 45.0 / a_min
    else:
        reach = _atom_reach(m.family, m.order, m.scale)
        lo_t = float(m.nodes.min()) - reach
        hi_t = float(m.nodes.max()) + reach + 3.0 / a_min
    if m.support is not None:
        lo_t = max(lo_t, m.support[0])
        hi_t = min(hi_t, m.support[1] + 3.0 / a_min)
    if t_anchor is not None:
        lo_t = max(lo_t, t_anchor)
        hi_t = max(hi_t, t_anchor + 1e-9)
    n_t = max(8, int(math.ceil((hi_t - lo_t) / min(0.5 / a_min, m.scale / 2.0))) + 1)
    ts = np.linspace(lo_t, hi_t, min(n_t, 400))
    future = min(1.05 * sup_over(ts, lo_floor=t_anchor), safe)
    return ChargePair(past=float(past), future=float(future))


def rescaled(m: SignalModel, omega: float) -> SignalModel:
    """Model of x -> (1/omega) f(x / omega).

    Atom-sum and constant kinds are closed under this map (coefficients and
    amplitude scale by 1/omega, nodes and atom width by omega).  The
    node-constrained kinds are not, since their contracts pin unit scale and
    node structure, so they are rejected.
    """
    if not omega > 0:
        raise IntervalInvalid(f"rescale factor must be positive, got {omega}")
    new_support = None if m.support is None else \
        (m.support[0] * omega, m.support[1] * omega)
    if m.kind is SignalKind.CONSTANT:
        return replace(m, coefficients=m.coefficients / omega,
                       amp_bound=m.amp_bound / omega, support=new_support)
    if m.kind not in (SignalKind.FEJER_ATOM_SUM, SignalKind.GAUSSIAN_ATOM_SUM):
        raise ValueError(f"rescaling not defined for kind {m.kind.value}")
    return SignalModel(kind=m.kind, coefficients=m.coefficients / omega,
                       nodes=m.nodes * omega, scale=m.scale * omega,
                       generator=m.generator, amp_bound=m.amp_bound / omega,
                       support=new_support)


def l2_norm(m: SignalModel) -> float:
    """L2 norm via Plancherel on the closed-form spectrum."""
    if m.kind is SignalKind.CONSTANT or m.support is not None:
        raise SpectrumUnavailable("L2 norm needs a closed-form spectrum")
    csum = float(np.abs(m.coefficients).sum())
    if csum == 0.0:
        return 0.0
    if m.family is GeneratorFamily.FEJER:
        X = 1.0 / m.scale
    elif m.family is GeneratorFamily.GAUSSIAN:
        X = 6.0 / m.scale
    else:
        # remainder of integral of (s D (1+s xi)^(-s-1))^2 below 1e-13 relative
        s_env = m.generator.envelope_s if m.generator else float(m.order)
        X = ((csum * m.scale) ** 2 / (2 * s_env + 1) / 1e-13) ** (1.0 / (2 * s_env + 1))
        X = max(4.0, X) / m.scale
    gl_x, gl_w = np.polynomial.legendre.leggauss(48)
    halfw = min(0.5, 0.2 / max(1.0, float(np.abs(m.nodes).max())))
    # resolve the node oscillation on the head of the range; slowly-decaying
    # spectra (low spline orders) get geometrically widening panels past it,
    # where only the smooth envelope still carries mass
    fine_end = min(X, max(64.0, 16.0 / m.scale))
    edges = np.linspace(0.0, fine_end,
                        max(2, int(math.ceil(fine_end / halfw)) + 1))
    if X > fine_end:
        n_geo = int(math.ceil(math.log(X / fine_end) / math.log(1.12)))
        geo = fine_end * 1.12 ** np.arange(1, n_geo + 1)
        geo[-1] = X
        edges = np.concatenate((edges, geo))
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    xs = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    ws = (half[:, None] * gl_w[None, :]).ravel()
    vals = np.abs(eval_spectrum(m, xs)) ** 2 + np.abs(eval_spectrum(m, -xs)) ** 2
    return float(math.sqrt(np.dot(ws, vals)))


def riesz_lower_bound(gen: GeneratorSpec) -> float:
    """Lower Riesz bound A of the integer-shift system of the generator.

    A = min over xi in [0, 1] of sum_k |phihat(xi + k)|^2, evaluated on a
    fine grid and deflated by 1e-6 so the returned value never exceeds the
    true essential infimum.
    """
    if gen.family is GeneratorFamily.BSPLINE:
        K = 2000 if gen.order == 1 else 200
    else:
        K = 40
    xi = np.linspace(0.0, 1.0, 4001)
    ks = np.arange(-K, K + 1)
    tot = (np.abs(gen.spectrum(xi[:, None] + ks[None, :])) ** 2).sum(axis=1)
    return float(tot.min() * (1.0 - 1e-6))
