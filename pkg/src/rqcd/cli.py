"""Command-line entry point.

Subcommands:
  run            one configuration -> one trace CSV
  scan-d         subspace-dimension scan (20 seeds per d by default)
  compare-d1     d=1 iteration-count comparison across qubit counts
  ground-energy  print the exact ground energy of the XXZ chain

Options may come from a JSON config file (--config); explicit flags win on
conflict.  RQCD_WORKERS caps sweep parallelism.  Exit codes: 0 success,
1 runtime failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import experiment
from .optimizers import ALGORITHMS, xxz_ground_energy


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON file with defaults for any flag")
    parser.add_argument("--n", type=int, help="qubit count")
    parser.add_argument("--delta", type=float, help="XXZ anisotropy (default 0.5)")
    parser.add_argument("--seed", type=int, help="base seed (default 0)")
    parser.add_argument("--runs", type=int, help="independent runs")
    parser.add_argument("--max-iters", type=int, help="iteration cap")
    parser.add_argument("--warm-start-vqa", type=int, help="VQA warm-start iterations")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="parallel workers")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rqcd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    p_run.add_argument("--algo", choices=ALGORITHMS)
    p_run.add_argument("--d", type=int, help="subspace dimension")
    _add_common(p_run)

    p_scan = sub.add_parser("scan-d", help="scan subspace dimensions")
    p_scan.add_argument("--d-values", type=int, nargs="+")
    p_scan.add_argument("--algos", nargs="+", choices=ALGORITHMS)
    _add_common(p_scan)

    p_cmp = sub.add_parser("compare-d1", help="d=1 comparison across qubit counts")
    p_cmp.add_argument("--n-values", type=int, nargs="+")
    p_cmp.add_argument("--algos", nargs="+", choices=ALGORITHMS)
    p_cmp.add_argument("--error-tol", type=float)
    _add_common(p_cmp)

    p_ge = sub.add_parser("ground-energy", help="print the exact ground energy")
    p_ge.add_argument("--n", type=int)
    p_ge.add_argument("--delta", type=float)
    p_ge.add_argument("--config", help="JSON file with defaults for any flag")

    return parser


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """Config-file values fill in; explicit flags win on conflict."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_values = json.load(fh)
        for key, value in file_values.items():
            merged[key.replace("-", "_")] = value
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            merged[key] = value
    return merged


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "ground-energy":
            opts = _merge(args, {"n": 4, "delta": 0.5})
            print(repr(xxz_ground_energy(int(opts["n"]), float(opts["delta"]))))
            return 0

        if args.command == "run":
            opts = _merge(
                args,
                {
                    "algo": "rrsn",
                    "n": 4,
                    "delta": 0.5,
                    "d": 1,
                    "seed": 0,
                    "runs": 1,
                    "max_iters": 500,
                    "warm_start_vqa": 0,
                    "out": "runs",
                    "workers": None,
                },
            )
            specs = [
                experiment.ExperimentSpec(
                    algorithm=opts["algo"],
                    n_qubits=int(opts["n"]),
                    delta=float(opts["delta"]),
                    d=int(opts["d"]),
                    seed=int(opts["seed"]) + r,
                    max_iters=int(opts["max_iters"]),
                    warm_start_vqa=int(opts["warm_start_vqa"]),
                )
                for r in range(int(opts["runs"]))
            ]
            paths = experiment.run_sweep(specs, opts["out"], opts["workers"])
            for path in paths:
                print(path)
            return 0

        if args.command == "scan-d":
            opts = _merge(
                args,
                {
                    "n": 4,
                    "delta": 0.5,
                    "d_values": list(experiment.DEFAULT_D_SCAN),
                    "algos": ["rrsgp-fixed", "rrsgp-exact", "rrsn"],
                    "seed": 0,
                    "runs": 20,
                    "max_iters": 100,
                    "warm_start_vqa": 200,
                    "out": "scan_d",
                    "workers": None,
                },
            )
            experiment.scan_d(
                n_qubits=int(opts["n"]),
                delta=float(opts["delta"]),
                d_values=tuple(opts["d_values"]),
                runs=int(opts["runs"]),
                algorithms=tuple(opts["algos"]),
                base_seed=int(opts["seed"]),
                max_iters=int(opts["max_iters"]),
                warm_start_vqa=int(opts["warm_start_vqa"]),
                out_dir=opts["out"],
                workers=opts["workers"],
            )
            print(f"{opts['out']}/summary.json")
            return 0

        if args.command == "compare-d1":
            opts = _merge(
                args,
                {
                    "n_values": list(experiment.DEFAULT_D1_QUBITS),
                    "delta": 0.5,
                    "algos": ["rrsgp-fixed", "rrsgp-exact", "rrsn-d1"],
                    "seed": 0,
                    "runs": 10,
                    "error_tol": 1e-5,
                    "max_iters": 200_000,
                    "warm_start_vqa": 200,
                    "out": "compare_d1",
                    "workers": None,
                },
            )
            experiment.compare_d1(
                n_values=tuple(opts["n_values"]),
                delta=float(opts["delta"]),
                runs=int(opts["runs"]),
                algorithms=tuple(opts["algos"]),
                base_seed=int(opts["seed"]),
                error_tol=float(opts["error_tol"]),
                max_iters=int(opts["max_iters"]),
                warm_start_vqa=int(opts["warm_start_vqa"]),
                out_dir=opts["out"],
                workers=opts["workers"],
            )
            print(f"{opts['out']}/summary.json")
            return 0

        raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure inside an experiment
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
