"""Command line entry point: ``plots <figure-kind> --inputs ... --out ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .io import PlotInputError
from .render import FIGURE_KINDS, render_figure, save_figure

EXIT_OK = 0
EXIT_INPUT = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render a figure from kickedmix runner output files.",
    )
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    parser.add_argument(
        "--inputs",
        nargs="+",
        required=True,
        help="runner output files (CSV series or JSON payloads)",
    )
    parser.add_argument(
        "--out", required=True, help="image path, .png or .svg"
    )
    args = parser.parse_args(argv)

    try:
        fig = render_figure(args.kind, [Path(p) for p in args.inputs])
        save_figure(fig, Path(args.out))
    except PlotInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
