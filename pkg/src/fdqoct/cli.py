"""Command-line front end.

Every stage reads the files written by the stage before it, so a run can
be replayed step by step::

    fdqoct simulate scenarios/fig1.scenario --out out/fig1
    fdqoct avg --in out/fig1 --k 101
    fdqoct fft2 --in out/fig1 --variant joint --pad 2
    fdqoct fft2 --in out/fig1 --variant stack
    fdqoct analyze --in out/fig1

``fdqoct run`` chains all of them (and the scenario's sweep, if any).
Exit codes: 0 success, 2 configuration error, 3 invariant violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .analyze import ncc, predict_from_depths
from .averaging import AScan, ascan_from_spectrum, averaged_ascan, complex_average
from .fft2d import extract_diagonal_ascan, fft2_joint, fft2_stack
from .model import SourceSpec, build_frequency_grid, effective_reflectance, optical_depths
from .pipeline import (
    ZERO_OPD_GUARD,
    aligned,
    design_rules,
    report_metrics,
    run_sweep,
    structural_fwhm,
)
from .scenario import SWEEP_PARAMS, AlgorithmSpec, Scenario, ScenarioError, SweepSpec, load_scenario
from .stack import DiagonalStack, extract_diagonals, fft_stack
from .synth import JointSpectrum, synthesize_joint_spectrum

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT, EXIT_IO = 0, 2, 3, 4


class UpstreamMissing(OSError):
    pass


def _need(path: Path) -> Path:
    if not path.exists():
        raise UpstreamMissing(f"missing upstream file {path}; run the earlier stage first")
    return path


def _write_ascan(path: Path, a: AScan) -> None:
    io.write_csv(path, {"depth_m": a.depth, "amplitude": a.amplitude})


def _read_ascan(path: Path, algorithm: str) -> AScan:
    t = io.read_csv(_need(path))
    return AScan(t["depth_m"], t["amplitude"], algorithm)


def _write_source(out: Path, source: SourceSpec) -> None:
    io.write_metrics(out / "source.csv", {
        "center_wavelength_m": source.center_wavelength,
        "diagonal_bandwidth_m": source.diagonal_bandwidth,
        "antidiagonal_fwhm_m": source.antidiagonal_fwhm,
        "grid_size": source.grid_size,
    })


def _read_source(out: Path) -> SourceSpec:
    m = io.read_metrics(_need(out / "source.csv"))
    return SourceSpec(
        m["center_wavelength_m"], m["diagonal_bandwidth_m"], m["antidiagonal_fwhm_m"], int(m["grid_size"])
    )


def _read_joint(out: Path) -> JointSpectrum:
    source = _read_source(out)
    data = io.read_matrix(_need(out / "joint_spectrum.qjs"))
    grid = build_frequency_grid(source)
    if data.shape != (grid.size, grid.size):
        raise ValueError(f"joint spectrum is {data.shape}, source expects {grid.size}x{grid.size}")
    return JointSpectrum(data, grid)


def _write_map(out: Path, stem: str, magnitude: np.ndarray, axes: dict[str, np.ndarray]) -> None:
    io.write_matrix(out / f"{stem}.qjs", magnitude)
    io.write_pgm(out / f"{stem}.pgm", magnitude)
    for name, values in axes.items():
        io.write_csv(out / f"{stem}_{name}.csv", {name: values})


# -- stages -----------------------------------------------------------------


def stage_simulate(scn: Scenario, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    js = synthesize_joint_spectrum(scn.object, scn.source, noise_snr_db=scn.noise.snr_db, seed=scn.noise.seed)
    grid = js.grid
    _write_source(out, scn.source)
    io.write_csv(out / "omega_grid.csv", {"omega_rad_s": grid.omega, "detuning_rad_s": grid.detuning})
    io.write_csv(out / "object.csv", {
        "optical_depth_m": optical_depths(scn.object),
        "effective_reflectance": effective_reflectance(scn.object),
    })
    io.write_matrix(out / "joint_spectrum.qjs", js.data)
    # image rows follow omega_beta, starting from the lowest frequency
    io.write_pgm(out / "joint_spectrum.pgm", js.data.T)
    _write_ascan(out / "ascan_k1.csv", averaged_ascan(js, 1))


def stage_avg(out: Path, alg: AlgorithmSpec) -> None:
    js = _read_joint(out)
    stack = extract_diagonals(js, alg.k, fill=alg.fill)
    _write_map(out, "stack", stack.rows, {
        "omega0_rad_s": stack.omega0_axis, "omega_prime_rad_s": stack.omega_prime_axis,
    })
    fs = fft_stack(stack)
    _write_map(out, "fft_stack", fs.rows, {"omega0_rad_s": fs.omega0_axis, "depth_m": fs.depth_axis})
    spec = complex_average(stack, window="kaiser" if alg.k > 1 else "uniform", beta=alg.kaiser_beta)
    _write_ascan(out / "ascan_avg.csv", ascan_from_spectrum(spec, stack.delta_omega, js.size))


def stage_fft2(out: Path, variant: str, pad: int) -> None:
    if variant == "joint":
        fmap = fft2_joint(_read_joint(out), pad)
        _write_map(out, "fourier_map", fmap.magnitude, {"z_alpha_m": fmap.axis0, "z_beta_m": fmap.axis1})
        _write_ascan(out / "ascan_fft2.csv", extract_diagonal_ascan(fmap))
        return
    rows = io.read_matrix(_need(out / "stack.qjs"))
    omega0 = io.read_csv(_need(out / "stack_omega0_rad_s.csv"))["omega0_rad_s"]
    prime = io.read_csv(_need(out / "stack_omega_prime_rad_s.csv"))["omega_prime_rad_s"]
    grid = build_frequency_grid(_read_source(out))
    stack = DiagonalStack(rows, omega0, prime, (rows.shape[0] - 1) * grid.delta_lambda, grid.delta_omega)
    fmap, ascan = fft2_stack(stack, pad)
    _write_map(out, "stack_map", fmap.magnitude, {"z_perp_m": fmap.axis0, "z_par_m": fmap.axis1})
    _write_ascan(out / "ascan_fft2_stack.csv", ascan)


CLEANED = (("avg", "ascan_avg.csv"), ("fft2", "ascan_fft2.csv"), ("fft2stack", "ascan_fft2_stack.csv"))


def stage_analyze(out: Path, alg: AlgorithmSpec) -> dict[str, float]:
    source = _read_source(out)
    obj = io.read_csv(_need(out / "object.csv"))
    raw = _read_ascan(out / "ascan_k1.csv", "k1")
    metrics = {"interfaces": float(obj["optical_depth_m"].size), **design_rules(source, alg)}
    if obj["optical_depth_m"].size and raw.amplitude.max() > 0:
        pred = predict_from_depths(obj["optical_depth_m"], obj["effective_reflectance"])
        metrics["k1_fwhm_m"] = structural_fwhm(_read_joint(out), float(pred.structural[0]))
        scans = {}
        for prefix, name in CLEANED:
            if (out / name).exists():
                scans[prefix] = aligned(raw, _read_ascan(out / name, prefix))
                metrics.update(report_metrics(prefix, raw, scans[prefix], pred))
        if "avg" in scans and "fft2" in scans:
            g = ZERO_OPD_GUARD
            metrics["ncc_avg_fft2"] = ncc(scans["avg"].amplitude[g:], scans["fft2"].amplitude[g:])
    io.write_metrics(out / "metrics.csv", metrics)
    return metrics


def stage_sweep(scn: Scenario, sweep: SweepSpec, out: Path) -> dict[str, float]:
    if sweep.param != "k" and not 1 <= sweep.layer <= len(scn.object):
        raise ScenarioError(f"sweep layer {sweep.layer} is outside 1..{len(scn.object)}")
    out.mkdir(parents=True, exist_ok=True)
    table, summary = run_sweep(scn.object, scn.source, scn.algorithm, scn.noise, sweep)
    io.write_csv(out / "sweep.csv", table)
    io.write_metrics(out / "sweep_summary.csv", summary)
    return summary


# -- argument handling --------------------------------------------------------


def _scenario(args) -> Scenario:
    scn = load_scenario(args.scenario)
    if getattr(args, "out", None):
        scn = replace(scn, output=Path(args.out))
    return scn


def _algorithm(args, base: AlgorithmSpec = AlgorithmSpec()) -> AlgorithmSpec:
    alg = base
    if getattr(args, "k", None) is not None:
        if args.k < 1 or args.k % 2 == 0:
            raise ScenarioError(f"--k must be odd and >= 1, got {args.k}")
        alg = replace(alg, k=args.k)
    if getattr(args, "beta", None) is not None:
        alg = replace(alg, kaiser_beta=args.beta)
    if getattr(args, "fill", None) is not None:
        alg = replace(alg, fill=args.fill)
    if getattr(args, "pad", None) is not None:
        if args.pad < 1:
            raise ScenarioError(f"--pad must be >= 1, got {args.pad}")
        alg = replace(alg, pad=args.pad)
    return alg


def cmd_run(args) -> None:
    scn = _scenario(args)
    out = scn.output
    stage_simulate(scn, out)
    stage_avg(out, scn.algorithm)
    stage_fft2(out, "joint", scn.algorithm.pad)
    stage_fft2(out, "stack", 1)
    metrics = stage_analyze(out, scn.algorithm)
    print(f"{scn.name}: wrote {out}")
    if math.isfinite(metrics.get("avg_artefact_worst_db", math.nan)):
        print(f"  worst artefact residual: averaging {metrics['avg_artefact_worst_db']:.1f} dB")
    if scn.sweep is not None:
        summary = stage_sweep(scn, scn.sweep, out)
        print(f"  {scn.sweep.param} sweep: averaging transition at {summary['avg_transition']:.4g}")


def cmd_simulate(args) -> None:
    scn = _scenario(args)
    stage_simulate(scn, scn.output)


def cmd_avg(args) -> None:
    stage_avg(Path(args.input), _algorithm(args))


def cmd_fft2(args) -> None:
    stage_fft2(Path(args.input), args.variant, _algorithm(args).pad)


def cmd_analyze(args) -> None:
    metrics = stage_analyze(Path(args.input), _algorithm(args))
    for k in ("avg_artefact_worst_db", "fft2_artefact_worst_db", "fft2stack_artefact_worst_db"):
        if k in metrics:
            print(f"{k} = {metrics[k]:.2f}")


def cmd_sweep(args) -> None:
    scn = _scenario(args)
    base = scn.sweep
    given = {"param": args.param, "start": args.start, "stop": args.stop, "steps": args.steps, "layer": args.layer}
    fields = {k: v if v is not None else (getattr(base, k) if base else None) for k, v in given.items()}
    fields["layer"] = fields["layer"] or 1
    missing = [k for k, v in fields.items() if v is None]
    if missing:
        flags = {"start": "--from", "stop": "--to"}
        raise ScenarioError("sweep needs " + ", ".join(flags.get(m, f"--{m}") for m in missing))
    if fields["steps"] < 1:
        raise ScenarioError("--steps must be >= 1")
    summary = stage_sweep(scn, SweepSpec(**fields), scn.output)
    for k, v in summary.items():
        print(f"{k} = {v:.6g}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fdqoct", description="Quantum OCT joint-spectrum simulation and artefact removal")
    sub = p.add_subparsers(dest="command", required=True)

    def with_scenario(name, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("scenario", help="scenario file (YAML)")
        sp.add_argument("--out", help="output directory (overrides the scenario)")
        return sp

    def with_input(name, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--in", dest="input", required=True, help="directory written by the previous stage")
        return sp

    with_scenario("run", "full pipeline for one scenario").set_defaults(func=cmd_run)
    with_scenario("simulate", "joint spectrum and K=1 A-scan").set_defaults(func=cmd_simulate)

    sp = with_input("avg", "complex averaging of diagonals")
    sp.add_argument("--k", type=int, default=101, help="number of diagonals (odd)")
    sp.add_argument("--beta", type=float, help="Kaiser window beta (default 6)")
    sp.add_argument("--fill", choices=("zero", "crop"), help="how shorter diagonals are handled")
    sp.set_defaults(func=cmd_avg)

    sp = with_input("fft2", "2D Fourier transform route")
    sp.add_argument("--variant", choices=("joint", "stack"), default="joint")
    sp.add_argument("--pad", type=int, default=2, help="zero-padding factor per axis")
    sp.set_defaults(func=cmd_fft2)

    sp = with_input("analyze", "suppression metrics for the A-scans present")
    sp.add_argument("--k", type=int, help="K used for the design-rule metrics")
    sp.set_defaults(func=cmd_analyze)

    sp = with_scenario("sweep", "vary one parameter and tabulate residuals")
    sp.add_argument("--param", choices=SWEEP_PARAMS)
    sp.add_argument("--from", dest="start", type=float)
    sp.add_argument("--to", dest="stop", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--layer", type=int, help="1-based interface whose preceding segment is varied")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ScenarioError as exc:
        print(f"fdqoct: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fdqoct: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"fdqoct: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
