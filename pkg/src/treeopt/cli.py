"""Command-line interface: run experiments, evaluate single points, list registries."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness
from .design import (pressure_vessel_constraints, pressure_vessel_cost,
                     welded_beam_constraints, welded_beam_cost)
from .registry import ConfigError, make_problem, optimizer_ids, problem_ids, problem_info

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_DESIGN_FNS = {
    "welded_beam": (welded_beam_cost, welded_beam_constraints),
    "pressure_vessel": (pressure_vessel_cost, pressure_vessel_constraints),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treeopt",
                                     description="Tree-search optimizer benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep from a spec file")
    run.add_argument("--spec", required=True, help="path to the run-spec file")
    run.add_argument("--seed", type=int, help="override the master seed")
    run.add_argument("--budget", type=int, help="override evaluations per trial")
    run.add_argument("--trials", type=int, help="override trials per cell")
    run.add_argument("--out", help="override the output directory")
    run.add_argument("--log-points", action="store_true",
                     help="also write per-evaluation sampled-point files")

    evaluate = sub.add_parser("eval", help="evaluate one point through a named problem")
    evaluate.add_argument("problem", help="problem id (see `treeopt list`)")
    evaluate.add_argument("coords", nargs="+", type=float, help="raw coordinates")
    evaluate.add_argument("--noise", type=float, default=0.0,
                          help="injected uniform draw for stochastic problems")

    sub.add_parser("list", help="list registered problems and optimizers")
    return parser


def _cmd_run(args) -> int:
    spec = harness.parse_spec_file(args.spec)
    if args.seed is not None:
        spec.master_seed = args.seed
    if args.budget is not None:
        spec.budget = args.budget
    if args.trials is not None:
        spec.trials = args.trials
    if args.out is not None:
        spec.out_dir = args.out
    if args.log_points:
        spec.log_points = True
    outcome = harness.run_experiment(spec)
    sys.stdout.write(harness.emit_summary(outcome.rows, "text"))
    if spec.out_dir:
        print(f"wrote summary.csv, summary.json, metadata.json, traces/ to {spec.out_dir}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    objective = make_problem(args.problem)
    point = np.asarray(args.coords, dtype=float)
    if point.size != objective.space.dim:
        raise ConfigError(f"{args.problem} expects {objective.space.dim} coordinates, "
                          f"got {point.size}")
    if args.problem in _DESIGN_FNS:
        cost_fn, constraint_fn = _DESIGN_FNS[args.problem]
        report = constraint_fn(point)
        print(f"cost      {cost_fn(point):.6f}")
        print(f"feasible  {report.feasible}")
        print(f"violation {report.violation:.6g}")
        for i, g in enumerate(report.values, start=1):
            print(f"g{i}        {g:.6g}")
        print(f"penalized {objective.evaluate(point):.6f}")
    else:
        noise = args.noise if objective.noisy else None
        print(f"value     {objective.evaluate(point, noise):.6f}")
    return EXIT_OK


def _cmd_list() -> int:
    print("problems:")
    for pid in problem_ids():
        info = problem_info(pid)
        bounds = f"[{info['lower'][0]:g}, {info['upper'][0]:g}]"
        fmin = "-" if info["known_min"] is None else f"{info['known_min']:g}"
        print(f"  {pid:<16} dim={info['dim']:<3} bounds={bounds:<14} fmin={fmin}")
    print("optimizers:")
    for oid in optimizer_ids():
        print(f"  {oid}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_list()
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
