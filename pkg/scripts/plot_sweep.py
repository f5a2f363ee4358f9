#!/usr/bin/env python3
"""Plot mean throughput vs budget from a `mccdma-alloc sweep` CSV."""

import argparse
import collections
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from mccdma_alloc.experiment import read_sweep_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", type=Path)
    ap.add_argument("-o", "--output", type=Path, default=Path("sweep.png"))
    ap.add_argument("--title", default="Throughput vs maximum transmit power")
    args = ap.parse_args()

    _, summary = read_sweep_csv(args.csv.read_text())
    curves = collections.defaultdict(list)
    for row in summary:
        curves[row["scheme"], row["algorithm"]].append(
            (float(row["pmax_dbw"]), float(row["mean_throughput"]))
        )

    fig, ax = plt.subplots(figsize=(6, 4))
    for (scheme, alg), pts in sorted(curves.items()):
        x, y = zip(*sorted(pts))
        ax.plot(x, y, marker="o", ms=3, ls="-" if alg == "improved" else "--",
                label=f"{scheme.upper()} {alg}")
    ax.set_xlabel("maximum transmit power (dBW)")
    ax.set_ylabel("throughput (allocated channels)")
    ax.set_title(args.title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
