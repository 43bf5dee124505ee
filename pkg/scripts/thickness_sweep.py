"""Worst artefact residual of a single layer versus its thickness.

Prints one row per thickness for both algorithms and the interpolated
thickness where each first stays at or below -20 dB, next to the
oscillation-count design rule.

Usage: python scripts/thickness_sweep.py [--front 300e-6] [--from 60e-6] [--to 200e-6] [--steps 29]
"""

import argparse

import numpy as np

from fdqoct import ObjectSpec, SourceSpec
from fdqoct.pipeline import SUPPRESSION_THRESHOLD_DB, run_sweep
from fdqoct.scenario import AlgorithmSpec, NoiseSpec, SweepSpec


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--front", type=float, default=300e-6, help="depth of the front surface (m)")
    p.add_argument("--from", dest="start", type=float, default=60e-6)
    p.add_argument("--to", dest="stop", type=float, default=200e-6)
    p.add_argument("--steps", type=int, default=29)
    p.add_argument("--k", type=int, default=101)
    p.add_argument("--antidiagonal-fwhm", type=float, default=SourceSpec().antidiagonal_fwhm)
    args = p.parse_args()

    source = SourceSpec(antidiagonal_fwhm=args.antidiagonal_fwhm)
    obj = ObjectSpec.from_depths([args.front, args.front + args.start])
    sweep = SweepSpec("thickness", args.start, args.stop, args.steps, layer=2)
    table, summary = run_sweep(obj, source, AlgorithmSpec(k=args.k), NoiseSpec(), sweep)

    print(f"{'thickness um':>12s} {'avg dB':>8s} {'2D dB':>8s}")
    for t, a, f in zip(table["value"], table["avg_artefact_worst_db"], table["fft2_artefact_worst_db"]):
        print(f"{t * 1e6:12.1f} {a:8.2f} {f:8.2f}")
    print(f"\nthreshold {SUPPRESSION_THRESHOLD_DB:.0f} dB")
    for key in ("avg_transition", "fft2_transition", "rule_min_thickness_m"):
        v = summary[key]
        print(f"  {key:22s} {v * 1e6:8.1f} um" if np.isfinite(v) else f"  {key:22s} not reached")


if __name__ == "__main__":
    main()
