#!/usr/bin/env python3
"""Compare loss curves from one or more loss CSVs (step,loss,wall_ms).

Each positional argument is ``path.csv:label``; a bare path uses the file
name as its label.

Usage: losses.py <csv:label>... <png> [--logy]
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_HEADER = ["step", "loss", "wall_ms"]


def read_losses(path: str) -> tuple[list[int], list[float]]:
    steps, losses = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and header != EXPECTED_HEADER:
            raise SystemExit(f"{path}: expected header {','.join(EXPECTED_HEADER)}")
        for rec in reader:
            if not rec:
                continue
            steps.append(int(rec[0]))
            losses.append(float(rec[1]))
    return steps, losses


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("series", nargs="+", help="csv path or path:label")
    parser.add_argument("png")
    parser.add_argument("--logy", action="store_true")
    args = parser.parse_args(argv)

    fig, ax = plt.subplots(figsize=(7, 5))
    for spec in args.series:
        path, _, label = spec.partition(":")
        label = label or os.path.basename(path)
        steps, losses = read_losses(path)
        if steps:
            ax.plot(steps, losses, label=label)
    if args.logy:
        ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("diagram loss")
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.png, dpi=120)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
