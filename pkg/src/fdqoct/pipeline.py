"""End-to-end evaluation of one object: synthesis, both algorithms, metrics."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analyze import ArtefactPrediction, measure_fwhm, ncc, predict_artefacts, suppression_report
from .averaging import AScan, averaged_ascan, min_layer_thickness, required_diagonal_count
from .fft2d import extract_diagonal_ascan, fft2_joint
from .model import ObjectSpec, SourceSpec, build_frequency_grid
from .scenario import AlgorithmSpec, NoiseSpec, SweepSpec
from .synth import JointSpectrum, synthesize_joint_spectrum

SUPPRESSION_THRESHOLD_DB = -20.0
FWHM_PAD = 8
# samples skipped at the start of an A-scan when correlating profiles
ZERO_OPD_GUARD = 5


def aligned(reference: AScan, other: AScan) -> AScan:
    """Trim ``other`` to the length of ``reference`` when the axes agree there."""
    n = reference.depth.size
    if other.depth.size < n or not np.allclose(other.depth[:n], reference.depth, rtol=1e-9, atol=1e-15):
        raise ValueError(f"{other.algorithm} A-scan does not share the reference depth axis")
    return other.truncated(n)


def structural_fwhm(js: JointSpectrum, depth: float) -> float:
    """Amplitude FWHM of the K=1 peak nearest ``depth``, on a finely padded axis."""
    fine = averaged_ascan(js, 1, n_fft=FWHM_PAD * js.size)
    try:
        return measure_fwhm(fine, depth)
    except ValueError:
        return float("nan")


def design_rules(source: SourceSpec, alg: AlgorithmSpec) -> dict[str, float]:
    grid = build_frequency_grid(source)
    span = (alg.k - 1) * grid.delta_lambda
    out = {
        "imaging_range_m": grid.imaging_range,
        "delta_lambda_m": grid.delta_lambda,
        "k": float(alg.k),
        "lambda0_span_m": span,
        "required_k_for_pump_fwhm": float(required_diagonal_count(source.antidiagonal_fwhm, grid.delta_lambda)),
        "min_thickness_bandwidth_m": min_layer_thickness(
            alg.oscillations, source.center_wavelength, source.diagonal_bandwidth
        ),
    }
    out["min_thickness_span_m"] = (
        min_layer_thickness(alg.oscillations, source.center_wavelength, span) if span > 0 else float("inf")
    )
    return out


def report_metrics(
    prefix: str, raw: AScan, cleaned: AScan, pred: ArtefactPrediction
) -> dict[str, float]:
    rep = suppression_report(raw, cleaned, pred)
    return {f"{prefix}_{k}": v for k, v in rep.as_flat().items()}


@dataclass(frozen=True, eq=False)
class Evaluation:
    js: JointSpectrum
    raw: AScan
    averaged: AScan
    fft2: AScan
    metrics: dict


def evaluate(
    obj: ObjectSpec,
    source: SourceSpec,
    alg: AlgorithmSpec,
    noise: NoiseSpec = NoiseSpec(),
) -> Evaluation:
    js = synthesize_joint_spectrum(obj, source, noise_snr_db=noise.snr_db, seed=noise.seed)
    raw = averaged_ascan(js, 1)
    avg = averaged_ascan(js, alg.k, beta=alg.kaiser_beta, fill=alg.fill)
    fft2 = extract_diagonal_ascan(fft2_joint(js, alg.pad))
    metrics = {"interfaces": float(len(obj)), **design_rules(source, alg)}
    if len(obj) and raw.amplitude.max() > 0:
        pred = predict_artefacts(obj)
        metrics["k1_fwhm_m"] = structural_fwhm(js, float(pred.structural[0]))
        metrics.update(report_metrics("avg", raw, avg, pred))
        try:
            f2 = aligned(raw, fft2)
        except ValueError:
            # only pad = 2 puts the 2D diagonal on the K = 1 axis
            pass
        else:
            metrics.update(report_metrics("fft2", raw, f2, pred))
            g = ZERO_OPD_GUARD
            metrics["ncc_avg_fft2"] = ncc(avg.amplitude[g:], f2.amplitude[g:])
    return Evaluation(js, raw, avg, fft2, metrics)


def swept_object(obj: ObjectSpec, sweep: SweepSpec, value: float) -> ObjectSpec:
    if sweep.param == "k":
        return obj
    if not 1 <= sweep.layer <= len(obj):
        raise ValueError(f"sweep layer {sweep.layer} outside 1..{len(obj)}")
    field = "thickness" if sweep.param == "thickness" else "beta2"
    return obj.with_segment(sweep.layer - 1, **{field: value})


def swept_algorithm(alg: AlgorithmSpec, sweep: SweepSpec, value: float) -> AlgorithmSpec:
    if sweep.param != "k":
        return alg
    k = int(round(value))
    return replace(alg, k=k if k % 2 else k + 1)


def transition_point(values: np.ndarray, residual_db: np.ndarray, threshold: float) -> float:
    """Smallest swept value beyond which residuals stay at or below ``threshold``.

    Interpolates linearly in dB between the last failing and the first
    passing sample. ``nan`` when the final sample still fails, the first
    value when every sample passes.
    """
    ok = residual_db <= threshold
    if not ok[-1]:
        return float("nan")
    fail = np.nonzero(~ok)[0]
    if fail.size == 0:
        return float(values[0])
    i = fail[-1]
    x0, x1, y0, y1 = values[i], values[i + 1], residual_db[i], residual_db[i + 1]
    return float(x0 + (threshold - y0) * (x1 - x0) / (y1 - y0))


SWEEP_COLUMNS = (
    "avg_artefact_worst_db", "avg_artefact_mean_db",
    "fft2_artefact_worst_db", "fft2_artefact_mean_db",
    "k1_fwhm_m", "ncc_avg_fft2",
)


def run_sweep(
    obj: ObjectSpec, source: SourceSpec, alg: AlgorithmSpec, noise: NoiseSpec, sweep: SweepSpec
) -> tuple[dict[str, np.ndarray], dict[str, float]]:
    values = np.array(sweep.values())
    cols: dict[str, list[float]] = {"value": [], "k": []}
    cols.update({c: [] for c in SWEEP_COLUMNS})
    for v in values:
        a = swept_algorithm(alg, sweep, v)
        ev = evaluate(swept_object(obj, sweep, v), source, a, noise)
        cols["value"].append(float(v))
        cols["k"].append(float(a.k))
        for c in SWEEP_COLUMNS:
            cols[c].append(ev.metrics.get(c, float("nan")))
    table = {k: np.array(v, dtype=float) for k, v in cols.items()}
    summary = {"steps": float(values.size), "threshold_db": SUPPRESSION_THRESHOLD_DB}
    for algo in ("avg", "fft2"):
        worst = table[f"{algo}_artefact_worst_db"]
        summary[f"{algo}_transition"] = (
            transition_point(values, worst, SUPPRESSION_THRESHOLD_DB)
            if np.all(np.isfinite(worst)) else float("nan")
        )
    if sweep.param == "thickness":
        summary["rule_min_thickness_m"] = min_layer_thickness(
            alg.oscillations, source.center_wavelength, source.diagonal_bandwidth
        )
    return table, summary
