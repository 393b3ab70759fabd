"""popplot: render popsmr bench CSVs into per-structure figures."""

from __future__ import annotations

import argparse
import sys

from .figures import METRICS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="popplot",
        description="throughput/memory figures from popsmr benchmark CSVs",
    )
    ap.add_argument("--csv", required=True, action="append",
                    help="input CSV (repeatable)")
    ap.add_argument("--metric", default="throughput_mops", choices=METRICS)
    ap.add_argument("--out", default="figs", help="output directory")
    ap.add_argument("--logy", action="store_true", help="log-scale y axis")
    ap.add_argument("--format", action="append", choices=("svg", "png"),
                    default=None, help="output format(s); default svg and png")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        csv_paths=args.csv,
        metric=args.metric,
        log_y=args.logy,
        out_dir=args.out,
        formats=tuple(args.format) if args.format else ("svg", "png"),
    )
    try:
        results = render(spec)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if not results:
        print("warning: no figures produced (empty or all-error CSV)", file=sys.stderr)
        return 1
    for stem in sorted(results):
        info = results[stem]
        print(f"{stem}:")
        for f in info["files"]:
            print(f"  wrote {f}")
        for rec in info["medians"]:
            pairs = ", ".join(
                f"{t}:{m}" for t, m in zip(info["threads"][rec], info["medians"][rec]))
            print(f"  median[{rec}] {pairs}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
