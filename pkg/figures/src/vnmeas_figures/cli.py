"""Command line front end: vnmeas-render."""

from __future__ import annotations

import argparse
import sys

from .dataset import DatasetError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vnmeas-render",
        description="Render sweep CSV panels to SVG or PNG images.",
    )
    parser.add_argument(
        "targets",
        nargs="+",
        metavar="TARGET",
        help="figure name (expands to NAME_*.csv under --in-dir) or an explicit .csv path",
    )
    parser.add_argument("--in-dir", default=".", help="directory searched for panel CSVs")
    parser.add_argument(
        "--out-dir",
        default=None,
        help="directory for images (default: same as --in-dir)",
    )
    parser.add_argument(
        "--png",
        action="store_true",
        help="write PNG instead of the default SVG",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = "png" if args.png else "svg"
    try:
        written = render(args.targets, in_dir=args.in_dir, out_dir=args.out_dir, fmt=fmt)
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
