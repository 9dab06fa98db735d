#!/usr/bin/env python3
"""Render a vineyard CSV (step,pair_id,dim,birth,death) as two projections.

Left: birth/death scatter colored by step, with the diagonal and, when a
threshold is given, the quadrant boundary lines.  Right: birth against step.
Infinite deaths are dropped.

Usage: vineyard.py <csv> <png> [--threshold a]
"""

from __future__ import annotations

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_HEADER = ["step", "pair_id", "dim", "birth", "death"]


def read_vineyard(path: str) -> list[dict]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and header != EXPECTED_HEADER:
            raise SystemExit(f"{path}: expected header {','.join(EXPECTED_HEADER)}")
        for rec in reader:
            if not rec:
                continue
            step, pair_id, dim, birth, death = rec
            if death == "inf":
                continue
            rows.append(
                {
                    "step": int(step),
                    "pair_id": int(pair_id),
                    "dim": int(dim),
                    "birth": float(birth),
                    "death": float(death),
                }
            )
    return rows


def render(rows: list[dict], out: str, threshold: float | None) -> None:
    fig, (ax_dgm, ax_birth) = plt.subplots(1, 2, figsize=(11, 5))
    if rows:
        steps = [r["step"] for r in rows]
        births = [r["birth"] for r in rows]
        deaths = [r["death"] for r in rows]
        sc = ax_dgm.scatter(births, deaths, c=steps, cmap="viridis", s=6, alpha=0.7)
        fig.colorbar(sc, ax=ax_dgm, label="step")
        lo = min(min(births), min(deaths))
        hi = max(max(births), max(deaths))
        pad = 0.05 * (hi - lo) if hi > lo else 1.0
        lo, hi = lo - pad, hi + pad
        ax_dgm.plot([lo, hi], [lo, hi], color="gray", lw=0.8)
        ax_dgm.set_xlim(lo, hi)
        ax_dgm.set_ylim(lo, hi)
        ax_birth.scatter(steps, births, c=steps, cmap="viridis", s=6, alpha=0.7)
    if threshold is not None:
        ax_dgm.axvline(threshold, color="tab:blue", lw=1.0)
        ax_dgm.axhline(threshold, color="tab:blue", lw=1.0)
    ax_dgm.set_xlabel("birth")
    ax_dgm.set_ylabel("death")
    ax_dgm.set_title("diagram trajectory")
    ax_birth.set_xlabel("step")
    ax_birth.set_ylabel("birth")
    ax_birth.set_title("birth by step")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv")
    parser.add_argument("png")
    parser.add_argument("--threshold", type=float, default=None)
    args = parser.parse_args(argv)
    render(read_vineyard(args.csv), args.png, args.threshold)
    return 0


if __name__ == "__main__":
    sys.exit(main())
