"""Command-line entry point: render one figure from one CSV.

Exit codes: 0 success, 1 anything wrong (usage, schema, content, I/O).
"""

from __future__ import annotations

import argparse
import sys

from .reader import SCHEMAS, PlotDataError, SchemaError
from .render import PlotSpec, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="plot",
        description="Render a cellcov3d sweep CSV as an image: "
        "analytic series as lines, simulated series as markers.",
    )
    parser.add_argument("--kind", required=True, choices=sorted(SCHEMAS), help="figure kind")
    parser.add_argument("--csv", required=True, metavar="PATH", help="input CSV from the sweep runner")
    parser.add_argument("--out", required=True, metavar="PATH", help="output image path")
    parser.add_argument("--dpi", type=int, default=None, help="raster resolution (default 150)")
    parser.add_argument("--title", default=None, help="optional figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    style = {}
    if args.dpi is not None:
        style["dpi"] = args.dpi
    if args.title is not None:
        style["title"] = args.title
    try:
        path = render(PlotSpec(csv_path=args.csv, kind=args.kind, out_path=args.out, style=style))
    except (SchemaError, PlotDataError, OSError) as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
