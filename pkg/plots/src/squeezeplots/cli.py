"""plots: batch figure rendering from su3squeeze CSV files.

    plots wigner --in a.csv b.csv c.csv --out fig1.png
    plots squeeze --in q.csv sc1.csv sc2.csv --out fig3.png
"""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import render_squeezing_overlay, render_wigner_panels


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", help="surface + contour panels per slice CSV")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("png", "svg"), default=None)

    p = sub.add_parser("squeeze", help="overlaid squeezing curves")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("png", "svg"), default=None)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "wigner":
            render_wigner_panels(args.inputs, args.out, fmt=args.format)
        else:
            render_squeezing_overlay(args.inputs, args.out, fmt=args.format)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
