"""Exception types shared across the package."""


class IfcodecError(Exception):
    """Base class for all library errors."""


class EmptyModel(IfcodecError):
    """Signal model has no coefficients or nodes."""


class NodeSeparationViolation(IfcodecError):
    """Node list is not strictly increasing, or gaps violate the kind's minimum."""


class EnvelopeViolation(IfcodecError):
    """Measured generator spectrum exceeds the declared envelope or floor."""


class IntervalInvalid(IfcodecError):
    """Integration interval has a > b or non-finite endpoints."""


class LeakageSpecInvalid(IfcodecError):
    """Leakage interval violates alpha0 - delta_alpha > 0."""


class SpectrumUnavailable(IfcodecError):
    """Spectral operation requested on a model without a closed-form spectrum."""


class ConfigInvalid(IfcodecError):
    """Sampler configuration violates a precondition."""


class ResidualTooLarge(IfcodecError):
    """A firing equation residual exceeded its tolerance after encoding."""


class QuadratureFailure(IfcodecError):
    """Self-check of a quadrature rule disagreed beyond tolerance."""


class OutOfTabulatedRange(IfcodecError):
    """Kernel evaluation requested outside the tabulated radius.

    The decoder path never raises this; out-of-range contributions are
    zeroed and accumulated into a truncation flag instead.
    """


class KernelRadiusTooSmall(IfcodecError):
    """Accumulated kernel truncation mass exceeded its share of the error budget."""


class EmptyWindow(IfcodecError):
    """Requested sup-norm window is empty."""


class LengthMismatch(IfcodecError):
    """Paired spike trains differ in length."""


class OrderUnrecoverable(IfcodecError):
    """Jittered spike times cannot be restored to strictly increasing order."""


class SeparationTooSmall(IfcodecError):
    """Free-node certificate requested with node separation <= 1."""


class RegimeViolation(IfcodecError):
    """Two-signal bound requested outside its regime alpha0 + delta_alpha <= Omega."""


class CertificateInvalid(IfcodecError):
    """Issued bandwidth certificate failed its numeric self-validation."""
