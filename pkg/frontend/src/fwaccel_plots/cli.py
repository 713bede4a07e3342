"""Command-line interface mirroring FigureSpec."""

import argparse
import sys

from .figures import GRIDS, FigureSpec, render_figures


def build_parser():
    parser = argparse.ArgumentParser(prog="fwaccel-plots")
    parser.add_argument("--results-dir", required=True,
                        help="directory of trace_r*_delta*.csv files")
    parser.add_argument("--grid", nargs="+", choices=list(GRIDS) + ["all"],
                        default=["all"],
                        help="which panel grid(s) to render")
    parser.add_argument("--out-dir", default="figures")
    parser.add_argument("--format", default="png", choices=("png", "pdf", "svg"))
    parser.add_argument("--linear-y", action="store_true",
                        help="linear instead of log-scale error axis")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    grids = tuple(GRIDS) if "all" in args.grid else tuple(dict.fromkeys(args.grid))
    spec = FigureSpec(results_dir=args.results_dir, grids=grids,
                      out_dir=args.out_dir, fmt=args.format,
                      log_y=not args.linear_y)
    try:
        paths = render_figures(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
