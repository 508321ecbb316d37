"""Leaky integrate-and-fire time encoding with certified reconstruction.

The package turns a finite-rate-of-innovation signal into a sequence of
firing times and unit phases, reconstructs it with a bandlimited Ansatz,
and brackets the reconstruction error from parameter uncertainty (leakage
mismatch and spike jitter).  Bandwidth certificates bound the spectral
tail mass so the bracket's hypotheses are checkable, not assumed.

Layout:

- :mod:`ifcodec.signal_models`  — signal families, spectra, charge bounds
- :mod:`ifcodec.if_encoder`     — the integrate-and-fire sampler
- :mod:`ifcodec.cutoff_kernel`  — smooth frequency cut-off tables
- :mod:`ifcodec.ansatz_decoder` — inference window and reconstruction
- :mod:`ifcodec.metrics`        — sup-norm, amalgam, spike-train distances
- :mod:`ifcodec.bounds`         — error brackets and bandwidth certificates
- :mod:`ifcodec.perturbation`   — leakage draws and spike jitter
- :mod:`ifcodec.spike_io`       — deterministic file formats
- :mod:`ifcodec.cli`            — the ``ifcodec`` experiment command
"""

from .ansatz_decoder import (AnsatzDecoder, InferenceWindow,
                             ReconstructedSignal, decode, inference_window,
                             leaky_primitive, make_grid, potential_eval,
                             potential_on_grid)
from .bounds import (BandwidthCertificate, BoundReport, CertificateMethod,
                     free_node_bandwidth, jitter_sensitivity_bound,
                     leakage_sensitivity_bound, numeric_tail_certificate,
                     reconstruction_bracket, sis_bandwidth, tail_sum_bound,
                     two_signal_bracket, validate_certificate)
from .cutoff_kernel import (CutoffKernel, CutoffReport, build_cutoff,
                            dpsi_values, eval_decoder_kernel, kernel_l1,
                            load_kernel, psi_values, save_kernel,
                            tail_l1_bound, verify_cutoff)
from .errors import (CertificateInvalid, ConfigInvalid, EmptyModel,
                     EmptyWindow, EnvelopeViolation, IfcodecError,
                     IntervalInvalid, KernelRadiusTooSmall,
                     LeakageSpecInvalid, LengthMismatch,
                     NodeSeparationViolation, OrderUnrecoverable,
                     OutOfTabulatedRange, QuadratureFailure,
                     RegimeViolation, ResidualTooLarge,
                     SeparationTooSmall, SpectrumUnavailable)
from .if_encoder import (SamplerConfig, SpikeTrain, encode,
                         firing_residuals, spike_count_bound)
from .metrics import (WindowedDistance, amalgam_norm, spectral_tail,
                      spike_uncertainty, sup_norm_window, wasserstein1)
from .perturbation import JitterMode, JitterSpec, jitter_spikes, leakage_draw
from .signal_models import (ChargePair, GeneratorFamily, GeneratorSpec,
                            SignalKind, SignalModel, build_signal,
                            default_generator, eval_signal, eval_spectrum,
                            l2_norm, load_signal, past_future_charge,
                            rescaled, riesz_lower_bound, signal_charge,
                            signal_to_dict)
from .spike_io import (load_certificate, load_spike_train, save_certificate,
                       save_reconstruction_csv, save_spike_train)

__version__ = "0.1.0"

__all__ = [
    "AnsatzDecoder", "BandwidthCertificate", "BoundReport",
    "CertificateInvalid", "CertificateMethod", "ChargePair", "ConfigInvalid",
    "CutoffKernel", "CutoffReport", "EmptyModel", "EmptyWindow",
    "EnvelopeViolation", "GeneratorFamily", "GeneratorSpec", "IfcodecError",
    "InferenceWindow", "IntervalInvalid", "JitterMode", "JitterSpec",
    "KernelRadiusTooSmall", "LeakageSpecInvalid", "LengthMismatch",
    "NodeSeparationViolation", "OrderUnrecoverable", "OutOfTabulatedRange",
    "QuadratureFailure", "ReconstructedSignal", "RegimeViolation",
    "ResidualTooLarge", "SamplerConfig", "SeparationTooSmall", "SignalKind",
    "SignalModel", "SpectrumUnavailable", "SpikeTrain", "WindowedDistance",
    "amalgam_norm", "build_cutoff", "build_signal", "decode",
    "default_generator", "dpsi_values", "encode", "eval_decoder_kernel",
    "eval_signal", "eval_spectrum", "firing_residuals",
    "free_node_bandwidth", "inference_window", "jitter_sensitivity_bound",
    "jitter_spikes", "kernel_l1", "l2_norm", "leakage_draw",
    "leakage_sensitivity_bound", "leaky_primitive", "load_certificate",
    "load_kernel", "load_signal", "load_spike_train", "make_grid",
    "numeric_tail_certificate", "past_future_charge", "potential_eval",
    "potential_on_grid", "psi_values", "reconstruction_bracket", "rescaled",
    "riesz_lower_bound", "save_certificate", "save_kernel",
    "save_reconstruction_csv", "save_spike_train", "signal_charge",
    "signal_to_dict", "sis_bandwidth", "spectral_tail", "spike_count_bound",
    "spike_uncertainty", "sup_norm_window", "tail_l1_bound", "tail_sum_bound",
    "two_signal_bracket", "validate_certificate", "verify_cutoff",
    "wasserstein1", "__version__",
]
