"""CLI: render --figure <id> --in <csv...> --out <path> [--spec-out <json>].

Exits 0 on success, 2 on schema or argument errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .render import FIGURE_IDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anneal-render",
        description="Regenerate figures from experiment CSV outputs.",
    )
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--spec-out", default=None,
                        help="also write the plot-data layer as JSON")
    parser.add_argument("--linear-gap", action="store_true",
                        help="linear instead of log gap axis")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if args and args[0] == "render":  # tolerate a leading subcommand token
        args = args[1:]
    ns = build_parser().parse_args(args)
    try:
        spec = FigureSpec(
            figure=ns.figure,
            inputs=tuple(ns.inputs),
            output=ns.out,
            log_gap=not ns.linear_gap,
        )
        plot_spec = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if ns.spec_out:
        with open(ns.spec_out, "w") as handle:
            json.dump(plot_spec, handle, indent=2, sort_keys=True)
    print(ns.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
