#!/usr/bin/env python3
"""Sample plots for dpsyn experiment outputs (non-load-bearing).

Usage:
    python3 docs/plot_results.py <out_dir>

Reads wpo_summary.csv and/or tco_summary.csv from <out_dir> (as written by
`dpsyn run-wpo` / `dpsyn run-tco`) and writes PNG figures next to them.
Requires matplotlib; the core library and CLI have no plotting dependency.
"""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path: Path):
    with path.open() as f:
        rows = [r for r in csv.DictReader(line for line in f if not line.startswith("#"))]
    return rows


def plot_wpo(out_dir: Path):
    path = out_dir / "wpo_summary.csv"
    if not path.exists():
        return
    rows = read_rows(path)
    real = next(float(r["mean_loss"]) for r in rows if r["method"] == "real")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for method, marker in (("laplace", "s"), ("wpo", "o")):
        pts = sorted(
            (float(r["alpha"]), float(r["mean_loss"]), float(r["p05"]), float(r["p95"]))
            for r in rows
            if r["method"] == method
        )
        alphas = [p[0] for p in pts]
        ax.errorbar(
            alphas,
            [p[1] for p in pts],
            yerr=[[p[1] - p[2] for p in pts], [p[3] - p[1] for p in pts]],
            marker=marker,
            capsize=3,
            label=method,
        )
    ax.axhline(real, color="k", ls="--", lw=1, label="real loss")
    ax.set_xlabel("adjacency level alpha (per unit)")
    ax.set_ylabel("ridge regression loss")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_dir / "wpo_summary.png", dpi=150)
    print(f"wrote {out_dir / 'wpo_summary.png'}")


def plot_tco(out_dir: Path):
    path = out_dir / "tco_summary.csv"
    if not path.exists():
        return
    rows = read_rows(path)
    horizons = sorted({int(r["T"]) for r in rows})
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.5))
    for (metric, label), ax in zip(
        (("inf_mean", "mean infeasible (%)"), ("sub_mean", "mean suboptimality (%)")), axes
    ):
        for t in horizons:
            pts = sorted((float(r["alpha"]), float(r[metric])) for r in rows if int(r["T"]) == t)
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"T={t}")
        ax.set_xlabel("adjacency level alpha (MW)")
        ax.set_ylabel(label)
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_dir / "tco_summary.png", dpi=150)
    print(f"wrote {out_dir / 'tco_summary.png'}")


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    out_dir = Path(sys.argv[1])
    plot_wpo(out_dir)
    plot_tco(out_dir)


if __name__ == "__main__":
    main()
