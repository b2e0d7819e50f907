"""Command-line front end.

Subcommands: preset (paper-figure experiments), custom (config-driven
pipeline), mwis (classical brute-force solve), filter (frustrated-loop
report).  Exit codes: 0 success, 2 validation error, 3 solver
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalysts import all_sets, edge_sets, hierarchy_filter
from .experiments import PRESETS, custom_config_from_json, run_custom, run_preset
from .graphs import GraphError, WeightedGraph, brute_force_mwis
from .spectrum import SolverConvergenceError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--workers", type=int, default=1, help="process pool size")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--grid-points", type=int, default=None,
                        help="coarse scan grid density (>= 21)")
    parser.add_argument("--tol", type=float, default=None, help="eigensolver tolerance")
    parser.add_argument("--full", action="store_true",
                        help="run exhaustive sweeps instead of subsampling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwis-anneal",
        description="Spectral-gap experiments for catalyzed quantum annealing "
                    "of maximum weighted independent set instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_preset = sub.add_parser("preset", help="run a named figure preset")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    p_preset.add_argument("--n-instances", type=int, default=None,
                          help="ensemble size (appC)")
    _add_common(p_preset)

    p_custom = sub.add_parser("custom", help="run a custom config JSON")
    p_custom.add_argument("config", type=Path)
    _add_common(p_custom)

    p_mwis = sub.add_parser("mwis", help="brute-force MWIS of a graph JSON")
    p_mwis.add_argument("graph", type=Path)

    p_filter = sub.add_parser("filter", help="frustrated-loop filter report")
    p_filter.add_argument("graph", type=Path)
    p_filter.add_argument("--n", type=int, default=3, help="catalyst locality")
    p_filter.add_argument("--candidates", choices=("edges", "all"), default="edges",
                          help="candidate subsets: connected (edges) or every subset")
    return parser


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if args.workers:
        overrides["workers"] = args.workers
    if args.grid_points is not None:
        overrides["grid_points"] = args.grid_points
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.full:
        overrides["full"] = True
    if getattr(args, "n_instances", None) is not None:
        overrides["n_instances"] = args.n_instances
    return overrides


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            outputs = run_preset(args.name, _overrides_from_args(args))
            for path in outputs:
                print(path)
        elif args.command == "custom":
            config = custom_config_from_json(
                args.config.read_text(),
                out_dir=args.out,
                workers=args.workers or None,
            )
            for path in run_custom(config):
                print(path)
        elif args.command == "mwis":
            graph = WeightedGraph.from_json(args.graph.read_text())
            vertices, weight = brute_force_mwis(graph)
            print(json.dumps({"vertices": list(vertices), "weight": weight}))
        elif args.command == "filter":
            graph = WeightedGraph.from_json(args.graph.read_text())
            if args.candidates == "edges":
                subsets = edge_sets(graph, args.n)
            else:
                subsets = all_sets(graph.n_vertices, args.n)
            allowed, rejected = hierarchy_filter(graph, subsets)
            print(json.dumps({
                "n": args.n,
                "candidates": args.candidates,
                "allowed_count": len(allowed),
                "rejected_count": len(rejected),
                "allowed": [list(s) for s in allowed],
                "rejected": [list(s) for s in rejected],
            }))
    except (GraphError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverConvergenceError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
