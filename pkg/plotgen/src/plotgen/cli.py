"""Render one figure from trace CSVs: rqcd-plotgen <tag> --input GLOB --out BASE."""
from __future__ import annotations

import argparse
import sys

from .figures import TAGS, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="rqcd-plotgen", description=__doc__)
    parser.add_argument("tag", choices=TAGS)
    parser.add_argument("--input", required=True, help="glob of trace CSVs")
    parser.add_argument("--out", required=True, help="output base path (writes .svg and .png)")
    args = parser.parse_args(argv)
    try:
        result = render(FigureSpec(tag=args.tag, input_glob=args.input, output=args.out))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in result.files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
