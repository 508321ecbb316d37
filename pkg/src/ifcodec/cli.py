"""Experiment command line.

Subcommands (each takes an experiment manifest JSON as its positional
argument):

- ``encode``        run the sampler, write the spike-train file
- ``decode``        reconstruct from the spike-train file, write CSV + report
- ``certify``       issue and validate a bandwidth certificate
- ``sweep``         Cartesian parameter sweep, write a CSV table
- ``verify-kernel`` build/verify the frequency cut-off tables
- ``verify-lemmas`` randomized dominance checks of the sensitivity bounds

Manifest schema (paths are resolved relative to the manifest's directory)::

    {
      "signal": "signal.json",
      "sampler": {"theta": 0.01, "alpha0": 1.0, "T": 12.0},
      "uncertainty": {"delta_alpha": 0.0, "delta_t": 0.0,
                      "jitter_mode": "uniform_jitter", "grid_step": 0.0},
      "omega": {"mode": "explicit", "value": 4.0}
            or {"mode": "certificate", "method": "numeric_tail",
                "params": {...}},
      "kernel": {"radius": 60.0, "grid_step": 0.001, "cache": "kernel.npz"},
      "grid_points_per_band": 32,
      "seed": 1,
      "outputs": {"spikes": "spikes.json", "reconstruction": "recon.csv",
                  "report": "report.json", "certificate": "cert.json",
                  "sweep": "sweep.csv"},
      "sweep": {"axes": [{"name": "theta", "values": [0.1, 0.01]}]},
      "verify": {"draws": 50}
    }

Determinism: every pipeline run derives its randomness from
``SeedSequence([seed, cell_index])`` where the plain encode/decode commands
are cell 0 and sweep cells are numbered in row-major axis order, so a
one-cell sweep reproduces the encode + decode commands bit-exactly.  Sweep
cells run in a thread pool bounded by the ``IFCODEC_THREADS`` environment
variable; rows are written in cell order regardless of completion order.

Exit codes: 0 success, 2 validation failure (bad manifest, files, or
parameters), 3 numeric failure (residuals, truncation, certification or
ordering failures).  Machine-readable diagnostics go to stderr with an
``ERROR:`` prefix.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import errors
from .ansatz_decoder import AnsatzDecoder, decode, inference_window, make_grid, potential_on_grid
from .bounds import (BandwidthCertificate, free_node_bandwidth,
                     jitter_sensitivity_bound, leakage_sensitivity_bound,
                     numeric_tail_certificate, reconstruction_bracket,
                     sis_bandwidth, validate_certificate)
from .cutoff_kernel import CutoffKernel, build_cutoff, load_kernel, save_kernel, verify_cutoff
from .errors import ConfigInvalid, IfcodecError
from .if_encoder import SamplerConfig, SpikeTrain, encode, firing_residuals, spike_count_bound
from .metrics import amalgam_norm, spike_uncertainty, sup_norm_window
from .perturbation import JitterMode, JitterSpec, jitter_spikes, leakage_draw
from .signal_models import (ChargePair, SignalModel, eval_signal, l2_norm,
                            load_signal, past_future_charge,
                            riesz_lower_bound)
from .spike_io import (load_spike_train, save_certificate,
                       save_reconstruction_csv, save_spike_train)

__all__ = ["main"]

_VALIDATION_ERRORS = (
    ConfigInvalid, errors.IntervalInvalid, errors.LeakageSpecInvalid,
    errors.EmptyModel, errors.NodeSeparationViolation,
    errors.EnvelopeViolation, errors.SeparationTooSmall,
    errors.RegimeViolation, errors.LengthMismatch,
    errors.SpectrumUnavailable,
)

_SWEEP_AXES = ("theta", "omega", "delta_alpha", "delta_t")
_SWEEP_COLUMNS = ("theta", "omega", "delta_alpha", "delta_t", "n",
                  "sup_error", "bracket", "ratio")


def _f(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------- manifest


class _Manifest:
    """Validated view of a manifest file."""

    def __init__(self, path: str):
        p = Path(path)
        if not p.is_file():
            raise ConfigInvalid(f"manifest not found: {path}")
        try:
            self.doc: dict[str, Any] = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"manifest is not valid JSON: {exc}") from exc
        if not isinstance(self.doc, dict):
            raise ConfigInvalid("manifest must be a JSON object")
        self.base = p.parent

    def resolve(self, rel: str) -> Path:
        return (self.base / rel).resolve()

    def section(self, name: str, default: dict | None = None) -> dict:
        val = self.doc.get(name, default)
        if val is None:
            raise ConfigInvalid(f"manifest section {name!r} is required")
        if not isinstance(val, dict):
            raise ConfigInvalid(f"manifest section {name!r} must be an object")
        return val

    @property
    def seed(self) -> int:
        return int(self.doc.get("seed", 0))

    def output(self, key: str) -> Path:
        outputs = self.section("outputs", {})
        if key not in outputs:
            raise ConfigInvalid(f"manifest outputs.{key} is required")
        return self.resolve(str(outputs[key]))

    def signal(self) -> SignalModel:
        if "signal" not in self.doc:
            raise ConfigInvalid("manifest field 'signal' is required")
        path = self.resolve(str(self.doc["signal"]))
        if not path.is_file():
            raise ConfigInvalid(f"signal spec not found: {path}")
        return load_signal(path)

    def sampler(self) -> dict:
        sec = self.section("sampler")
        for key in ("theta", "alpha0", "T"):
            if key not in sec:
                raise ConfigInvalid(f"manifest sampler.{key} is required")
        return {"theta": float(sec["theta"]), "alpha0": float(sec["alpha0"]),
                "T": float(sec["T"]), "time_tol": float(sec.get("time_tol", 0.0))}

    def uncertainty(self) -> dict:
        sec = self.section("uncertainty", {})
        mode = str(sec.get("jitter_mode", JitterMode.UNIFORM_JITTER.value))
        try:
            jitter_mode = JitterMode(mode)
        except ValueError as exc:
            raise ConfigInvalid(f"unknown jitter_mode {mode!r}") from exc
        return {"delta_alpha": float(sec.get("delta_alpha", 0.0)),
                "delta_t": float(sec.get("delta_t", 0.0)),
                "jitter_mode": jitter_mode,
                "grid_step": float(sec.get("grid_step", 0.0))}

    def grid_points_per_band(self) -> int:
        return int(self.doc.get("grid_points_per_band", 32))

    def kernel(self) -> CutoffKernel:
        sec = self.section("kernel", {})
        radius = float(sec.get("radius", 60.0))
        step = float(sec.get("grid_step", 1e-3))
        cache = sec.get("cache")
        if cache is not None:
            cache_path = self.resolve(str(cache))
            if cache_path.is_file():
                kernel = load_kernel(cache_path)
                if kernel.radius == radius and kernel.grid_step == step:
                    return kernel
            kernel = build_cutoff(radius, step)
            save_kernel(kernel, cache_path)
            return kernel
        return build_cutoff(radius, step)


def _resolve_omega(man: _Manifest, model: SignalModel | None,
                   theta: float) -> float:
    sec = man.section("omega")
    mode = sec.get("mode")
    if mode == "explicit":
        if "value" not in sec:
            raise ConfigInvalid("omega.value is required for explicit mode")
        omega = float(sec["value"])
        if not omega > 0:
            raise ConfigInvalid(f"omega must be positive, got {omega}")
        return omega
    if mode == "certificate":
        if model is None:
            raise ConfigInvalid("certificate omega needs a signal spec")
        cert = _issue_certificate(man, model, theta)
        return cert.omega
    raise ConfigInvalid(f"omega.mode must be 'explicit' or 'certificate', got {mode!r}")


def _issue_certificate(man: _Manifest, model: SignalModel,
                       theta: float) -> BandwidthCertificate:
    sec = man.section("omega")
    method = sec.get("method")
    params = sec.get("params", {}) or {}
    tol = float(params.get("theta", theta))
    if method == "numeric_tail":
        return numeric_tail_certificate(model, tol)
    energy = l2_norm(model)
    if energy > 1.0 + 1e-9:
        raise ConfigInvalid(
            f"certificate hypotheses need ||f||_2 <= 1, got {energy:.6f}; "
            f"normalize the signal coefficients")
    gen = model.generator
    if gen is None:
        raise ConfigInvalid(
            f"method {method!r} needs a generator-based model "
            f"(shift_invariant or free_node_spline); use numeric_tail")
    if method == "shift_invariant":
        return sis_bandwidth(
            N=int(params.get("N", 1)),
            A=float(params.get("A", riesz_lower_bound(gen))),
            D=float(params.get("D", gen.envelope_D)),
            s=float(params.get("s", gen.envelope_s)),
            theta=tol)
    if method == "free_node":
        nodes = model.nodes
        gaps = np.diff(nodes)
        delta = float(params.get("delta", gaps.min() if gaps.size else np.inf))
        return free_node_bandwidth(
            tau_floor=float(params.get("tau", gen.floor_tau)),
            delta=delta,
            D=float(params.get("D", gen.envelope_D)),
            s=float(params.get("s", gen.envelope_s)),
            theta=tol)
    raise ConfigInvalid(
        f"omega.method must be one of numeric_tail, shift_invariant, "
        f"free_node; got {method!r}")


# ---------------------------------------------------------------- pipeline


def _cell_seeds(seed: int, cell_index: int) -> tuple[int, int]:
    children = np.random.SeedSequence([seed, cell_index]).spawn(2)
    return (int(children[0].generate_state(1)[0]),
            int(children[1].generate_state(1)[0]))


def _encode_cell(model: SignalModel, sampler: dict, unc: dict,
                 seed: int, cell_index: int) -> tuple[SpikeTrain, SpikeTrain, float]:
    """Encode with the true (drawn) leakage, then jitter.

    Returns (clean train, observed train, realized displacement).
    """
    leak_seed, jitter_seed = _cell_seeds(seed, cell_index)
    alpha_true = leakage_draw(sampler["alpha0"], unc["delta_alpha"], leak_seed)
    cfg = SamplerConfig(theta=sampler["theta"], alpha=alpha_true,
                        T=sampler["T"], time_tol=sampler["time_tol"])
    clean = encode(model, cfg)
    if unc["jitter_mode"] is JitterMode.GRID_SNAP and unc["grid_step"] > 0:
        spec = JitterSpec(mode=JitterMode.GRID_SNAP,
                          grid_step=unc["grid_step"], seed=jitter_seed)
    elif unc["delta_t"] > 0 and len(clean):
        spec = JitterSpec(mode=JitterMode.UNIFORM_JITTER,
                          budget=unc["delta_t"], seed=jitter_seed)
    else:
        return clean, clean, 0.0
    observed, actual_dt = jitter_spikes(clean, spec)
    return clean, observed, actual_dt


def _decode_train(model: SignalModel | None, train: SpikeTrain, sampler: dict,
                  unc: dict, omega: float, kernel: CutoffKernel,
                  points_per_band: int) -> dict:
    """Window, reconstruct and compare; returns the report fields."""
    theta, alpha0 = train.config.theta, sampler["alpha0"]
    T = train.config.T
    if model is not None:
        anchor = float(train.times[-1]) if len(train) else None
        charges = past_future_charge(model, alpha0, unc["delta_alpha"],
                                     t_anchor=anchor)
    else:
        charges = ChargePair(0.0, 0.0)
    window = inference_window(charges, theta, alpha0, unc["delta_alpha"],
                              omega, T)
    grid = make_grid(window, omega, points_per_band)
    rec = decode(train, alpha0, omega, kernel, grid)
    report = {"n": float(len(train)), "theta": theta, "omega": omega,
              "alpha0": alpha0, "delta_alpha": unc["delta_alpha"],
              "delta_t": unc["delta_t"], "window_T1": window.T1,
              "window_T2": window.T2, "sigma": window.sigma,
              "truncation_flag": rec.truncation_flag}
    report["_reconstruction"] = rec
    if model is not None:
        dec = AnsatzDecoder(train, alpha0, omega, kernel)
        dist = sup_norm_window(lambda ts: eval_signal(model, ts),
                               lambda ts: dec.evaluate(ts)[0], window,
                               max(1, int(math.ceil(points_per_band * omega))))
        bracket = reconstruction_bracket(theta, omega, alpha0,
                                         unc["delta_alpha"], unc["delta_t"],
                                         len(train)).bracket
        report.update(sup_error=dist.value, argmax_t=dist.argmax_t,
                      bracket=bracket, ratio=dist.value / bracket)
    return report


def _print_report(report: dict, stream=None) -> None:
    stream = stream or sys.stdout
    for key in sorted(k for k in report if not k.startswith("_")):
        print(f"{key} = {_f(report[key])}", file=stream)


def _write_report(report: dict, path: Path) -> None:
    keys = sorted(k for k in report if not k.startswith("_"))
    lines = ["{"]
    lines.append(",\n".join(f'  "{k}": {_f(report[k])}' for k in keys))
    lines += ["}", ""]
    path.write_text("\n".join(lines), encoding="ascii", newline="\n")


# ---------------------------------------------------------------- commands


def _cmd_encode(man: _Manifest) -> int:
    model = man.signal()
    sampler = man.sampler()
    unc = man.uncertainty()
    clean, observed, actual_dt = _encode_cell(model, sampler, unc,
                                              man.seed, cell_index=0)
    residuals = firing_residuals(model, clean)
    res_max = float(residuals.max()) if residuals.size else 0.0
    bound = spike_count_bound(model, clean.config)
    save_spike_train(observed, man.output("spikes"))
    print(f"n = {len(observed)}")
    print(f"spike_count_bound = {_f(bound)}")
    print(f"residual_max = {_f(res_max)}")
    print(f"actual_delta_t = {_f(actual_dt)}")
    return 0


def _cmd_decode(man: _Manifest) -> int:
    sampler = man.sampler()
    unc = man.uncertainty()
    spikes_path = man.output("spikes")
    if not spikes_path.is_file():
        raise ConfigInvalid(f"spike-train file not found: {spikes_path}")
    train = load_spike_train(spikes_path)
    model = man.signal() if "signal" in man.doc else None
    omega = _resolve_omega(man, model, sampler["theta"])
    kernel = man.kernel()
    report = _decode_train(model, train, sampler, unc, omega, kernel,
                           man.grid_points_per_band())
    save_reconstruction_csv(report.pop("_reconstruction"),
                            man.output("reconstruction"))
    outputs = man.section("outputs", {})
    if "report" in outputs:
        _write_report(report, man.output("report"))
    _print_report(report)
    return 0


def _cmd_certify(man: _Manifest) -> int:
    model = man.signal()
    sampler = man.sampler()
    cert = _issue_certificate(man, model, sampler["theta"])
    margin = validate_certificate(cert, model)
    stamped = replace(cert, inputs={**cert.inputs, "margin": margin})
    save_certificate(stamped, man.output("certificate"))
    print(f"omega = {_f(cert.omega)}")
    print(f"tolerance = {_f(cert.tolerance)}")
    print(f"method = {cert.method.value}")
    print(f"margin = {_f(margin)}")
    return 0


def _sweep_cells(man: _Manifest) -> tuple[list[str], list[dict]]:
    sec = man.section("sweep")
    axes = sec.get("axes")
    if not axes or not isinstance(axes, list):
        raise ConfigInvalid("sweep.axes must be a nonempty list")
    names, value_lists = [], []
    for axis in axes:
        name = axis.get("name")
        values = axis.get("values")
        if name not in _SWEEP_AXES:
            raise ConfigInvalid(
                f"sweep axis {name!r} not supported; valid axes: {_SWEEP_AXES}")
        if not values:
            raise ConfigInvalid(f"sweep axis {name!r} has no values")
        names.append(str(name))
        value_lists.append([float(v) for v in values])
    cells = [dict(zip(names, combo))
             for combo in itertools.product(*value_lists)]
    return names, cells


def _cmd_sweep(man: _Manifest) -> int:
    model = man.signal()
    sampler = man.sampler()
    unc = man.uncertainty()
    ppb = man.grid_points_per_band()
    kernel = man.kernel()
    _, cells = _sweep_cells(man)
    base_omega = None
    if not any("omega" in cell for cell in cells):
        base_omega = _resolve_omega(man, model, sampler["theta"])

    def run_cell(item: tuple[int, dict]) -> tuple[dict | None, str | None]:
        index, overrides = item
        cell_sampler = dict(sampler)
        cell_unc = dict(unc)
        cell_sampler["theta"] = overrides.get("theta", sampler["theta"])
        cell_unc["delta_alpha"] = overrides.get("delta_alpha", unc["delta_alpha"])
        cell_unc["delta_t"] = overrides.get("delta_t", unc["delta_t"])
        omega = overrides.get("omega", base_omega)
        if omega is None:
            omega = _resolve_omega(man, model, cell_sampler["theta"])
        try:
            _, observed, _ = _encode_cell(model, cell_sampler, cell_unc,
                                          man.seed, cell_index=index)
            report = _decode_train(model, observed, cell_sampler, cell_unc,
                                   omega, kernel, ppb)
            return report, None
        except IfcodecError as exc:
            params = ", ".join(f"{k}={v}" for k, v in sorted(overrides.items()))
            return None, f"sweep cell {index} ({params}): {exc}"

    threads = int(os.environ.get("IFCODEC_THREADS", "0")) or min(
        4, os.cpu_count() or 1)
    items = list(enumerate(cells))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_cell, items))
    else:
        results = [run_cell(item) for item in items]

    lines = [",".join(_SWEEP_COLUMNS)]
    n_failed = 0
    for (index, overrides), (report, error) in zip(items, results):
        if error is not None:
            n_failed += 1
            print(f"ERROR: {error}", file=sys.stderr)
            row = {**{k: math.nan for k in _SWEEP_COLUMNS},
                   "theta": overrides.get("theta", sampler["theta"]),
                   "omega": overrides.get("omega", base_omega or math.nan),
                   "delta_alpha": overrides.get("delta_alpha", unc["delta_alpha"]),
                   "delta_t": overrides.get("delta_t", unc["delta_t"])}
        else:
            row = report
        lines.append(",".join(_f(row.get(col, math.nan))
                              for col in _SWEEP_COLUMNS))
    lines.append("")
    man.output("sweep").write_text("\n".join(lines), encoding="ascii",
                                   newline="\n")
    print(f"cells = {len(items)}")
    print(f"failed = {n_failed}")
    return 0 if n_failed < len(items) else 3


def _cmd_verify_kernel(man: _Manifest) -> int:
    kernel = man.kernel()
    report = verify_cutoff(kernel)
    print(f"passed = {report.passed}")
    print(f"flatness_dev = {_f(report.flatness_dev)}")
    print(f"support_leak = {_f(report.support_leak)}")
    print(f"global_dev = {_f(report.global_dev)}")
    print(f"psi_at_zero = {_f(report.psi_at_zero)}")
    print(f"decay_C = {_f(report.decay_C)}")
    print(f"l1_psi = {_f(report.l1_psi)}")
    print(f"l1_dpsi = {_f(report.l1_dpsi)}")
    return 0 if report.passed else 3


def _cmd_verify_lemmas(man: _Manifest) -> int:
    sampler = man.sampler()
    unc = man.uncertainty()
    draws = int(man.doc.get("verify", {}).get("draws", 50))
    theta, alpha0, T = sampler["theta"], sampler["alpha0"], sampler["T"]
    delta_alpha = unc["delta_alpha"] or 0.25 * alpha0
    leak_ratio = jit_ratio = 0.0
    violations = 0
    for k in range(draws):
        rng = np.random.default_rng(np.random.SeedSequence([man.seed, k]))
        n = int(rng.integers(1, 26))
        times = np.sort(rng.uniform(0.0, T, size=n))
        while n > 1 and np.diff(times).min() < 1e-6 * T:
            times = np.sort(rng.uniform(0.0, T, size=n))
        phases = np.exp(2j * math.pi * rng.uniform(0.0, 1.0, size=n))
        cfg = SamplerConfig(theta=theta, alpha=alpha0, T=T)
        train = SpikeTrain(times=times, phases=phases, config=cfg)
        alpha = leakage_draw(alpha0, delta_alpha, int(rng.integers(2 ** 31)))

        ts = np.linspace(0.0, T + 5.0 / (alpha0 - delta_alpha), 4001)
        lhs = float(np.abs(potential_on_grid(train, alpha, ts)
                           - potential_on_grid(train, alpha0, ts)).max())
        bound = leakage_sensitivity_bound(theta, delta_alpha, alpha0, n)
        leak_ratio = max(leak_ratio, lhs / bound)
        if lhs > bound + 1e-9:
            violations += 1
            print(f"ERROR: leakage dominance violated on draw {k}: "
                  f"{lhs} > {bound}", file=sys.stderr)

        budget = float(rng.uniform(0.0, 0.02 * T))
        jittered, actual_dt = jitter_spikes(
            train, JitterSpec(mode=JitterMode.UNIFORM_JITTER, budget=budget,
                              seed=int(rng.integers(2 ** 31))))

        def diff(ts_arr, a=train, b=jittered, al=alpha):
            return potential_on_grid(a, al, ts_arr) - potential_on_grid(b, al, ts_arr)

        span = 30.0 / min(alpha, 1.0)
        value = amalgam_norm(diff, (0.0, T + span),
                             breakpoints=np.concatenate((train.times,
                                                         jittered.times)))
        jbound = jitter_sensitivity_bound(theta, alpha, n, actual_dt)
        if jbound > 0:
            jit_ratio = max(jit_ratio, value / jbound)
        if value > jbound + 1e-6:
            violations += 1
            print(f"ERROR: jitter dominance violated on draw {k}: "
                  f"{value} > {jbound}", file=sys.stderr)
    print(f"draws = {draws}")
    print(f"leakage_worst_ratio = {_f(leak_ratio)}")
    print(f"jitter_worst_ratio = {_f(jit_ratio)}")
    print(f"violations = {violations}")
    return 0 if violations == 0 else 3


# ---------------------------------------------------------------- entry


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ifcodec",
        description="Integrate-and-fire encoding experiments: encode, "
                    "reconstruct, certify bandwidths and sweep parameters.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("encode", "run the sampler and write the spike-train file"),
            ("decode", "reconstruct from spikes and write CSV plus report"),
            ("certify", "issue and validate a bandwidth certificate"),
            ("sweep", "run a parameter sweep and write a CSV table"),
            ("verify-kernel", "build and verify the cut-off kernel tables"),
            ("verify-lemmas", "randomized checks of the sensitivity bounds")]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("manifest", help="path to the experiment manifest JSON")
    args = parser.parse_args(argv)
    handlers = {"encode": _cmd_encode, "decode": _cmd_decode,
                "certify": _cmd_certify, "sweep": _cmd_sweep,
                "verify-kernel": _cmd_verify_kernel,
                "verify-lemmas": _cmd_verify_lemmas}
    try:
        return handlers[args.command](_Manifest(args.manifest))
    except _VALIDATION_ERRORS as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 2
    except IfcodecError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
