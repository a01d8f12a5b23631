"""Command-line entry point: ``coopsense {sweep,solve,bound,oracle,generate}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import algorithms, harness, scenarios


def _assignment_json(result: algorithms.AlgoResult) -> dict:
    return {"value": result.value, "sets": [sorted(s) for s in result.assignment.sets]}


def cmd_sweep(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.config).read_text()) if args.config else {}
    kind = args.kind or data.get("kind")
    for key in ("runs", "workers"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.seed is not None:
        data["base_seed"] = args.seed
    if args.grid:
        data["grid"] = args.grid
    spec = harness.spec_from_dict(data, kind=kind)
    start = time.perf_counter()
    rows = harness.run_sweep(spec)
    paths = harness.emit(rows, args.out, name=spec.kind, xlabel=spec.axis_name, plot=not args.no_plot)
    sys.stdout.write(harness.rows_to_csv(rows))
    logging.info("wrote %s in %.1fs", ", ".join(map(str, paths)), time.perf_counter() - start)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    scenario = scenarios.load(args.scenario)
    out = {
        "mwm": _assignment_json(algorithms.mwm_assign(scenario, weighting=args.weighting)),
        "mgdy": _assignment_json(algorithms.mgdy_assign(scenario)[0]),
        "greedy": _assignment_json(algorithms.greedy_baseline(scenario, np.random.default_rng([args.seed, 1]))),
        "random": _assignment_json(algorithms.random_baseline(scenario, np.random.default_rng([args.seed, 2]))),
        "upper_bound": scenario.upper_bound(),
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    scenario = scenarios.load(args.scenario)
    result, report = algorithms.mgdy_assign(scenario)
    out = report.as_dict()
    out["mgdy"] = _assignment_json(result)
    print(json.dumps(out, indent=2))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = scenarios.load(args.scenario)
    result = algorithms.brute_force_opt(scenario, cap=args.cap)
    print(json.dumps(_assignment_json(result), indent=2))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.config).read_text()) if args.config else {}
    for key in ("m", "n", "l_max", "seed"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    scenarios.save(scenarios.generate(scenarios.config_from_dict(data)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopsense", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run one simulation sweep and write CSV + plot")
    p.add_argument("--kind", choices=harness.KINDS)
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--runs", type=int, help="runs per grid point (default 100)")
    p.add_argument("--grid", type=float, nargs="+", help="override the swept values")
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    p.add_argument("--config", help="JSON file with SweepSpec/GenConfig fields")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("solve", help="run every algorithm on a scenario file")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized baselines")
    p.add_argument("--weighting", choices=("gain", "throughput"), default="gain")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bound", help="print the mu bound report of a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="exhaustive optimum of a small scenario file")
    p.add_argument("scenario")
    p.add_argument("--cap", type=int, default=algorithms.BRUTE_FORCE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="draw a random scenario and save it")
    p.add_argument("out")
    p.add_argument("--config", help="JSON file with GenConfig fields")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"coopsense {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
