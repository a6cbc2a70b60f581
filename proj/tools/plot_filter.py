#!/usr/bin/env python3
"""Plot a filter-info CSV (quantity,arg,value) produced by `cfbound filter-info`.

Usage:
    cfbound filter-info --filter m02 -o /tmp/m02.csv
    tools/plot_filter.py /tmp/m02.csv -o m02.png

Without matplotlib (or with --ascii) prints a terminal sparkline per quantity.
"""

import argparse
import csv
import sys
from collections import defaultdict


def load(path):
    series = defaultdict(list)
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["quantity", "arg", "value"]:
            sys.exit(f"{path}: expected header quantity,arg,value, "
                     f"got {reader.fieldnames}")
        for row in reader:
            series[row["quantity"]].append(
                (float(row["arg"]), float(row["value"])))
    return {k: sorted(v) for k, v in series.items()}


def ascii_plot(series):
    blocks = " .:-=+*#%@"
    for name, pts in series.items():
        values = [v for _, v in pts]
        lo, hi = min(values), max(values)
        span = (hi - lo) or 1.0
        line = "".join(
            blocks[int((v - lo) / span * (len(blocks) - 1))] for v in values)
        print(f"{name:>8} [{lo:+.4g}, {hi:+.4g}]  {line}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv", help="filter-info CSV file")
    ap.add_argument("-o", "--output", help="image file (default: show)")
    ap.add_argument("--ascii", action="store_true",
                    help="terminal sparklines instead of matplotlib")
    args = ap.parse_args()

    series = load(args.csv)
    if not series:
        sys.exit("no data rows")

    if args.ascii:
        ascii_plot(series)
        return
    try:
        import matplotlib
        if args.output:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, falling back to ascii", file=sys.stderr)
        ascii_plot(series)
        return

    fig, axes = plt.subplots(len(series), 1, figsize=(8, 2.6 * len(series)),
                             squeeze=False)
    for ax, (name, pts) in zip(axes.flat, sorted(series.items())):
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        ax.plot(xs, ys, lw=1.2)
        ax.axhline(0.0, color="gray", lw=0.5)
        ax.set_title(name)
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    if args.output:
        fig.savefig(args.output, dpi=150)
        print(f"wrote {args.output}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
