"""Run the bundled figure scenarios and print their headline metrics.

Usage: python scripts/reproduce_figures.py [--out DIR]
"""

import argparse
import math
from pathlib import Path

from fdqoct import io
from fdqoct.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent
FIGURES = ("fig1", "fig2_k51", "fig4_minthickness", "dispersion")
KEYS = (
    "k1_fwhm_m", "avg_artefact_worst_db", "fft2_artefact_worst_db",
    "fft2stack_artefact_worst_db", "ncc_avg_fft2",
)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=ROOT / "out", help="parent directory for results")
    args = p.parse_args()
    for name in FIGURES:
        out = args.out / name
        code = cli_main(["run", str(ROOT / "scenarios" / f"{name}.scenario"), "--out", str(out)])
        if code:
            raise SystemExit(f"{name}: exit code {code}")
        m = io.read_metrics(out / "metrics.csv")
        print(f"\n{name}")
        for k in KEYS:
            if math.isfinite(m.get(k, math.nan)):
                scale, unit = (1e6, "um") if k.endswith("_m") else (1.0, "")
                print(f"  {k:32s} {m[k] * scale:10.3f} {unit}")


if __name__ == "__main__":
    main()
