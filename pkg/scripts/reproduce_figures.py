#!/usr/bin/env python3
"""Regenerate the four throughput-vs-budget experiments as CSV (+ PNG if matplotlib is present).

fig4/fig5: MRC, original vs improved, a single channel realization each.
fig6:      EGC and ZFC, original vs improved, averaged over trials.
fig7:      improved algorithm only, all three schemes.

Single-realization curves depend on the seed; only their shape is comparable.
"""

import argparse
import subprocess
import sys
from pathlib import Path

from mccdma_alloc.experiment import RunConfig, pmax_grid, run_sweep, sweep_csv_text

RUNS = {
    "fig4_mrc_single": dict(schemes=("mrc",), trials=1, seed=4),
    "fig5_mrc_single": dict(schemes=("mrc",), trials=1, seed=5),
    "fig6_egc_zfc": dict(schemes=("egc", "zfc"), trials=200, seed=6),
    "fig7_improved_all": dict(algorithms=("improved",), trials=200, seed=7),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("--step", type=float, default=1.0, help="dBW grid step")
    ap.add_argument("--no-plot", action="store_true")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    grid = pmax_grid(-20.0, 30.0, args.step)
    for name, kw in RUNS.items():
        path = args.outdir / f"{name}.csv"
        path.write_text(sweep_csv_text(run_sweep(RunConfig(pmax_dbw=grid, **kw))))
        print(f"wrote {path}")
        if not args.no_plot:
            subprocess.run(
                [sys.executable, str(Path(__file__).with_name("plot_sweep.py")), str(path),
                 "-o", str(path.with_suffix(".png")), "--title", name],
                check=False,
            )


if __name__ == "__main__":
    main()
