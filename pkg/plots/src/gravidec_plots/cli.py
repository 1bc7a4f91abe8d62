"""Entry points: plot-contour <sweep.csv> <out.png>, plot-decay <series.csv> <out.png>."""

from __future__ import annotations

import argparse
import sys

from .render import render_contour, render_decay
from .tables import DecaySeries, SchemaError, SweepTable


def main_contour(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-contour",
        description="Render the decoherence-time contour from a sweep CSV")
    parser.add_argument("sweep_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    try:
        table = SweepTable.from_csv(args.sweep_csv)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    info = render_contour(table, args.out_png)
    print(f"wrote {args.out_png}: {len(info.levels)} decade levels, "
          f"electron line {'drawn' if info.electron_line_drawn else 'outside range'}, "
          f"physical line {'drawn' if info.physical_line_drawn else 'outside range'}")
    return 0


def main_decay(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-decay",
        description="Render the coherence-decay curve from an evolve CSV")
    parser.add_argument("series_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    try:
        series = DecaySeries.from_csv(args.series_csv)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    info = render_decay(series, args.out_png)
    print(f"wrote {args.out_png}: fitted rate {info.fitted_rate:.6g} 1/s "
          f"from {info.points_used} points")
    return 0
