"""Closed-form error brackets and bandwidth certificates.

Every guarantee the experiments test against has the shape
``C * bracket(parameters)`` with an absolute constant ``C`` that the theory
does not quantify.  The functions here evaluate the brackets with the
constant slot set to 1 so that sweeps can fit the constant empirically.
Bandwidth certificates assert that a whole model class has spectral tail at
most ``tolerance`` beyond the certified band; they are validated numerically
against :func:`ifcodec.metrics.spectral_tail` on issue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .errors import (CertificateInvalid, ConfigInvalid, IntervalInvalid,
                     LeakageSpecInvalid, RegimeViolation, SeparationTooSmall)
from .signal_models import GeneratorFamily, SignalModel

__all__ = ["BoundReport", "BandwidthCertificate", "CertificateMethod",
           "reconstruction_bracket", "two_signal_bracket",
           "leakage_sensitivity_bound", "jitter_sensitivity_bound",
           "sis_bandwidth", "free_node_bandwidth", "numeric_tail_certificate",
           "tail_sum_bound", "validate_certificate"]


class CertificateMethod(str, Enum):
    """How a bandwidth certificate was derived."""

    SHIFT_INVARIANT = "shift_invariant"
    FREE_NODE = "free_node"
    NUMERIC_TAIL = "numeric_tail"


def _frozen(inputs: dict) -> Mapping[str, float]:
    return MappingProxyType(dict(inputs))


@dataclass(frozen=True)
class BoundReport:
    """An error bracket together with the inputs that produced it.

    ``bracket`` is the guarantee's parameter-dependent factor with the
    absolute constant set to 1; ``constant_slot`` is the multiplier an
    experiment fits empirically.
    """

    bracket: float
    inputs: Mapping[str, float]
    constant_slot: float = 1.0


@dataclass(frozen=True)
class BandwidthCertificate:
    """Certified band [-omega, omega] holding the spectral tail below tolerance."""

    omega: float
    tolerance: float
    method: CertificateMethod
    inputs: Mapping[str, float] = field(default_factory=dict)


def _check_leakage(alpha0: float, delta_alpha: float) -> None:
    if not (alpha0 > 0 and delta_alpha >= 0 and alpha0 - delta_alpha > 0):
        raise LeakageSpecInvalid(
            f"need alpha0 - delta_alpha > 0, got {alpha0} +/- {delta_alpha}")


def reconstruction_bracket(theta: float, omega: float, alpha0: float,
                           delta_alpha: float, delta_t: float,
                           n: int) -> BoundReport:
    """Error bracket for the bandwidth-based reconstruction of one signal.

    For omega >= 1 the bracket is
    ``theta (alpha0 + delta_alpha + omega) [1 + n delta_alpha/(alpha0 -
    delta_alpha) + delta_t (alpha0 + n omega)]``; below omega = 1 the
    leading constant term is kept separately:
    ``theta {1 + (alpha0 + delta_alpha + omega) [. . .]}``.
    """
    _check_leakage(alpha0, delta_alpha)
    if not (theta > 0 and omega > 0):
        raise IntervalInvalid(f"theta and omega must be positive, got {theta}, {omega}")
    if not (delta_t >= 0 and n >= 0):
        raise IntervalInvalid("delta_t and n must be nonnegative")
    inner = (1.0 + n * delta_alpha / (alpha0 - delta_alpha)
             + delta_t * (alpha0 + n * omega))
    outer = (alpha0 + delta_alpha + omega) * inner
    if omega < 1.0:
        outer += 1.0
    return BoundReport(bracket=theta * outer,
                       inputs=_frozen({"theta": theta, "omega": omega,
                                       "alpha0": alpha0,
                                       "delta_alpha": delta_alpha,
                                       "delta_t": delta_t, "n": float(n)}))


def two_signal_bracket(theta: float, omega: float, alpha0: float,
                       delta_alpha: float, delta_t: float, n: int) -> float:
    """Distinguishability bracket for two signals with identical spike output.

    Valid in the regime alpha0 + delta_alpha <= omega, where both per-signal
    brackets collapse to ``theta omega [1 + n delta_alpha/(alpha0 -
    delta_alpha) + delta_t n omega]``.
    """
    _check_leakage(alpha0, delta_alpha)
    if not (theta > 0 and omega > 0):
        raise IntervalInvalid(f"theta and omega must be positive, got {theta}, {omega}")
    if alpha0 + delta_alpha > omega:
        raise RegimeViolation(
            f"two-signal bracket needs alpha0 + delta_alpha <= omega, "
            f"got {alpha0 + delta_alpha} > {omega}")
    return theta * omega * (1.0 + n * delta_alpha / (alpha0 - delta_alpha)
                            + delta_t * n * omega)


def leakage_sensitivity_bound(theta: float, delta_alpha: float, alpha0: float,
                              n: int) -> float:
    """Sup-norm bound on the potential change under a leakage mismatch:
    ``theta delta_alpha n / (alpha0 - delta_alpha)``."""
    _check_leakage(alpha0, delta_alpha)
    return theta * delta_alpha * n / (alpha0 - delta_alpha)


def jitter_sensitivity_bound(theta: float, alpha: float, n: int,
                             delta_t: float) -> float:
    """Amalgam-norm bound on the potential change under spike jitter:
    ``delta_t theta (alpha + 4 n)``."""
    if not (theta > 0 and alpha > 0 and n >= 0 and delta_t >= 0):
        raise IntervalInvalid("jitter bound needs positive theta, alpha and "
                              "nonnegative n, delta_t")
    return delta_t * theta * (alpha + 4.0 * n)


def _smallest_certified_omega(threshold: float) -> float:
    """Smallest omega >= 1 whose integer floor is at least ``threshold``.

    A relative slack of 1e-12 absorbs float round-off so that thresholds
    that are integers up to arithmetic noise are not bumped to the next one.
    """
    n = math.ceil(threshold - 1e-12 * max(1.0, abs(threshold)))
    return float(max(1, n))


def sis_bandwidth(N: int, A: float, D: float, s: float,
                  theta: float) -> BandwidthCertificate:
    """Certified bandwidth for unit-energy signals built from N integer-shifted
    generators with lower frame constant A and spectral envelope
    ``D (1 + |xi|)^(-s-1)``.

    The tail of any such signal beyond omega is at most
    ``sqrt(N/A) 2D / (s floor(omega)^s)``, so the certificate needs
    ``floor(omega) >= (sqrt(N/A) 2D/(s theta))^(1/s)``.
    """
    if not (N >= 1 and float(N).is_integer()):
        raise ConfigInvalid(f"N must be a positive integer, got {N}")
    if not (A > 0 and D > 0 and s > 0 and theta > 0):
        raise ConfigInvalid("A, D, s, theta must all be positive")
    threshold = (math.sqrt(N / A) * 2.0 * D / (s * theta)) ** (1.0 / s)
    omega = _smallest_certified_omega(threshold)
    return BandwidthCertificate(
        omega=omega, tolerance=theta, method=CertificateMethod.SHIFT_INVARIANT,
        inputs=_frozen({"n_generators": float(N), "riesz_lower": A,
                        "envelope_d": D, "envelope_s": s, "theta": theta,
                        "threshold": threshold}))


def free_node_bandwidth(tau_floor: float, delta: float, D: float, s: float,
                        theta: float) -> BandwidthCertificate:
    """Certified bandwidth for unit-energy free-node generator sums.

    Nodes must be separated by at least ``delta > 1`` and the generator's
    spectrum must stay above ``tau_floor`` on [-1/2, 1/2] and below the
    envelope ``D (1 + |xi|)^(-s-1)``.  Nonharmonic-exponential frame bounds
    for separation delta give

        A = pi^2 (delta^2 - 1) / (8 delta^3)   for 1 < delta <= 2,
        A = pi^2 / 64                          for delta >= 2,
        B = 2 (delta + 1) / delta,

    (at delta = 2 both A branches hold; the larger is used), and the local
    spectral mass of the node exponential sum on any unit interval is
    controlled by C = sqrt(B/A).  Uniformly in delta, B/A <=
    192 / (pi^2 min(delta - 1, 1)), i.e. C <= (sqrt(192)/pi) /
    sqrt(min(delta - 1, 1)); the certificate uses the sharper per-delta C.
    The tail beyond omega is then at most
    ``2 C D / (tau_floor min(sqrt(delta - 1), 1) s floor(omega)^s)``.
    """
    if not delta > 1.0:
        raise SeparationTooSmall(f"node separation must exceed 1, got {delta}")
    if not (tau_floor > 0 and D > 0 and s > 0 and theta > 0):
        raise ConfigInvalid("tau_floor, D, s, theta must all be positive")
    a_high = math.pi ** 2 / 64.0
    if delta < 2.0:
        A = math.pi ** 2 * (delta ** 2 - 1.0) / (8.0 * delta ** 3)
    elif delta == 2.0:
        A = max(math.pi ** 2 * (delta ** 2 - 1.0) / (8.0 * delta ** 3), a_high)
    else:
        A = a_high
    # delta = inf (a single node) takes the limiting frame upper bound 2
    B = 2.0 if math.isinf(delta) else 2.0 * (delta + 1.0) / delta
    C = math.sqrt(B / A)
    sep = min(math.sqrt(delta - 1.0), 1.0)
    threshold = (2.0 * C * D / (tau_floor * sep * s * theta)) ** (1.0 / s)
    omega = _smallest_certified_omega(threshold)
    return BandwidthCertificate(
        omega=omega, tolerance=theta, method=CertificateMethod.FREE_NODE,
        inputs=_frozen({"tau_floor": tau_floor, "delta": delta,
                        "envelope_d": D, "envelope_s": s, "theta": theta,
                        "frame_lower": A, "frame_upper": B,
                        "threshold": threshold}))


def numeric_tail_certificate(m: SignalModel, theta: float) -> BandwidthCertificate:
    """Certificate for a concrete model by direct tail quadrature.

    For the compactly supported spectrum of the Fejer family the certified
    omega is the exact spectral support radius (floored at 1); otherwise the
    smallest omega >= 1 with numeric tail <= theta is bisected to three
    decimals.  The issued certificate is self-validated.
    """
    from .metrics import spectral_tail

    if not theta > 0:
        raise ConfigInvalid(f"theta must be positive, got {theta}")
    if m.family is GeneratorFamily.FEJER:
        omega = max(1.0, 1.0 / m.scale)
    else:
        lo, hi = 1.0, 1.0
        if spectral_tail(m, hi) > theta:
            while spectral_tail(m, hi) > theta:
                hi *= 2.0
                if hi > 2.0 ** 40:
                    raise CertificateInvalid(
                        f"no omega below 2^40 brings the tail under {theta}")
            lo = hi / 2.0
            while hi - lo > 1e-3:
                mid = 0.5 * (lo + hi)
                if spectral_tail(m, mid) <= theta:
                    hi = mid
                else:
                    lo = mid
        omega = hi
    cert = BandwidthCertificate(
        omega=omega, tolerance=theta, method=CertificateMethod.NUMERIC_TAIL,
        inputs=_frozen({"theta": theta, "scale": m.scale,
                        "n_atoms": float(m.nodes.size)}))
    validate_certificate(cert, m)
    return cert


def validate_certificate(cert: BandwidthCertificate, m: SignalModel) -> float:
    """Check a certificate against the numeric spectral tail of a model.

    Returns the validation margin ``tolerance - tail`` (>= 0); raises
    CertificateInvalid when the tail exceeds the certified tolerance.
    """
    from .metrics import spectral_tail

    tail = spectral_tail(m, cert.omega)
    margin = cert.tolerance - tail
    if margin < 0.0:
        raise CertificateInvalid(
            f"spectral tail {tail:.6e} exceeds certified tolerance "
            f"{cert.tolerance:.6e} at omega {cert.omega}")
    return float(margin)


def tail_sum_bound(M: int, s: float) -> float:
    """Closed-form majorant ``M^(-s)/s`` of ``sum_(l >= M) (1+l)^(-s-1)``."""
    if not (M >= 1 and float(M).is_integer()):
        raise ConfigInvalid(f"M must be a positive integer, got {M}")
    if not s > 0:
        raise ConfigInvalid(f"s must be positive, got {s}")
    return float(M) ** (-s) / s
