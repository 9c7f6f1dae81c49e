"""Command-line front end.

Subcommands:

* ``run <config.json>``: execute a sweep, writing results.csv, summary.csv
  and meta.json into the output directory.
* ``bounds <config.json>``: print the guarantee/bound report for an index
  set and weight choice.
* ``solve``: one reconstruction instance from flags, printed as JSON.
* ``functions``: list builtin target functions.

Exit codes: 0 on success, 2 on configuration errors, 3 when every trial of
a sweep fails numerically.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .basis import BasisSpec
from .experiments import (
    ConfigError,
    ExperimentConfig,
    bounds_report,
    build_index_set,
    format_bounds_table,
    load_preset,
    run_experiment,
    write_meta,
    write_results,
    write_summary,
)
from .functions import BUILTIN_FUNCTIONS, builtin_function
from .guarantees import weights_from_strategy
from .reconstruction import reconstruct
from .solver import SolverOptions

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csinterp",
        description="Compressed-sensing function interpolation experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment sweep from a JSON config")
    p_run.add_argument("config", help="path to a config JSON, or the name of a shipped preset")
    p_run.add_argument("--out", type=Path, default=None,
                       help="output directory (default: results/<config name>)")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--quiet", action="store_true")

    p_bounds = sub.add_parser("bounds", help="guarantee/bound report from a JSON config")
    p_bounds.add_argument("config", type=Path)
    p_bounds.add_argument("--json", action="store_true", help="emit JSON instead of a table")

    p_solve = sub.add_parser("solve", help="solve a single instance from flags")
    p_solve.add_argument("--scenario", required=True, choices=["CC", "LU", "LC"])
    p_solve.add_argument("--dimension", type=int, default=1)
    p_solve.add_argument("--kind", default="TP", choices=["TP", "TD", "HC"])
    p_solve.add_argument("--K", type=int, required=True)
    p_solve.add_argument("--function", required=True)
    p_solve.add_argument("--m", type=int, required=True)
    p_solve.add_argument("--eta", type=float, default=0.0)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--strategy", default="unit")
    p_solve.add_argument("--alpha", type=float, default=None)
    p_solve.add_argument("--obj-tol", type=float, default=SolverOptions.obj_tol)
    p_solve.add_argument("--feas-tol", type=float, default=SolverOptions.feas_tol)
    p_solve.add_argument("--max-iters", type=int, default=SolverOptions.max_iters)
    p_solve.add_argument("--power-iters", type=int, default=SolverOptions.power_iters)

    sub.add_parser("functions", help="list builtin target functions")
    return parser


def _cmd_run(args) -> int:
    if Path(args.config).is_file():
        config = ExperimentConfig.from_json(args.config)
    else:
        config = load_preset(str(args.config))
    out_dir = args.out or Path("results") / config.name
    out_dir.mkdir(parents=True, exist_ok=True)

    progress = None
    if not args.quiet:
        def progress(done, total):
            print(f"\r{config.name}: {done}/{total} trials", end="", file=sys.stderr, flush=True)

    rows, summary = run_experiment(config, workers=args.workers, progress=progress)
    if not args.quiet:
        print(file=sys.stderr)
    write_results(rows, out_dir / "results.csv")
    write_summary(summary, out_dir / "summary.csv")
    write_meta(config, out_dir / "meta.json")
    total_ms = sum(r.wall_time_ms for r in rows)
    if not args.quiet:
        print(f"wrote {out_dir}/results.csv ({len(rows)} rows, {total_ms/1e3:.1f}s solve time)",
              file=sys.stderr)
    if all(not r.converged for r in rows) and all(math.isnan(r.linf_error) for r in rows):
        print("error: every trial failed numerically", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_bounds(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    report = bounds_report(raw)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(format_bounds_table(report))
    return EXIT_OK


def _cmd_solve(args) -> int:
    spec = BasisSpec.from_scenario(args.scenario, args.dimension)
    index_set = build_index_set(args.kind, args.dimension, args.K)
    target = builtin_function(args.function)
    if target.dimension != args.dimension:
        raise ConfigError(
            f"function {args.function!r} has dimension {target.dimension}, flags say {args.dimension}"
        )
    weights = weights_from_strategy(args.strategy, index_set, spec, alpha=args.alpha)
    opts = SolverOptions(
        obj_tol=args.obj_tol, feas_tol=args.feas_tol,
        max_iters=args.max_iters, power_iters=args.power_iters,
    )
    result, report = reconstruct(
        target, spec, index_set, weights, args.m, args.eta, args.seed, solver_opts=opts,
    )
    payload = {
        "scenario": args.scenario,
        "function": args.function,
        "m": args.m,
        "n": len(index_set),
        "eta": args.eta,
        "seed": args.seed,
        "objective": result.objective,
        "residual": result.residual_norm,
        "iterations": result.iterations,
        "converged": result.converged,
        "kkt_gap": result.kkt_gap,
        "linf_error": report.linf_error,
        "l2_coeff_error": report.l2_coeff_error,
        "interpolation_defect": report.interpolation_defect,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK if result.converged else EXIT_NUMERICAL


def _cmd_functions(_args) -> int:
    for fid in sorted(BUILTIN_FUNCTIONS):
        fn = BUILTIN_FUNCTIONS[fid]
        print(f"{fid:<14} d={fn.dimension}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "bounds": _cmd_bounds,
        "solve": _cmd_solve,
        "functions": _cmd_functions,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, KeyError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
