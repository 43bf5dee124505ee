"""Residuals as a function of the pump (anti-diagonal) width.

The anti-diagonal FWHM sets how quickly diagonals far from the centre
fade, and so how hard the Kaiser-weighted average and the 2D transform
are tapered. This prints, for each width, the worst residual of both
algorithms on the three-interface object and on single layers of 60,
135 and 150 um, plus the largest per-artefact disagreement between the
two algorithms on the three-interface object.

Usage: python scripts/calibrate_antidiagonal.py [--widths 12e-9 16e-9 70e-9]
"""

import argparse

from fdqoct import (
    ObjectSpec,
    SourceSpec,
    averaged_ascan,
    extract_diagonal_ascan,
    fft2_joint,
    predict_artefacts,
    suppression_report,
    synthesize_joint_spectrum,
)

OBJECTS = {
    "3 interfaces": ObjectSpec.from_depths([200e-6, 340e-6, 480e-6]),
    "layer 60 um": ObjectSpec.from_depths([300e-6, 360e-6]),
    "layer 135 um": ObjectSpec.from_depths([300e-6, 435e-6]),
    "layer 150 um": ObjectSpec.from_depths([300e-6, 450e-6]),
}


def residuals(obj, source, k):
    js = synthesize_joint_spectrum(obj, source)
    raw = averaged_ascan(js, 1)
    pred = predict_artefacts(obj)
    avg = suppression_report(raw, averaged_ascan(js, k), pred)
    f2 = extract_diagonal_ascan(fft2_joint(js, 2)).truncated(raw.depth.size)
    two = suppression_report(raw, f2, pred)
    gap = max(abs(a["residual_db"] - b["residual_db"]) for a, b in zip(avg.counted, two.counted))
    return avg.worst_artefact_db, two.worst_artefact_db, gap


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--widths", type=float, nargs="+", default=[12e-9, 14e-9, 15e-9, 16e-9, 17e-9, 20e-9, 35e-9, 70e-9])
    p.add_argument("--k", type=int, default=101)
    args = p.parse_args()
    header = "".join(f"{name:>22s}" for name in OBJECTS)
    print(f"{'FWHM nm':>8s}{header}{'gap dB':>9s}")
    for w in args.widths:
        source = SourceSpec(antidiagonal_fwhm=w)
        cells, gap = [], 0.0
        for name, obj in OBJECTS.items():
            a, f, g = residuals(obj, source, args.k)
            if name == "3 interfaces":
                gap = g
            cells.append(f"{a:9.1f} / {f:7.1f}    ")
        print(f"{w * 1e9:8.1f}" + "".join(cells) + f"{gap:9.2f}")
    print("\ncells: worst residual in dB, averaging / 2D transform")


if __name__ == "__main__":
    main()
