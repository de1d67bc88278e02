"""Experiment orchestration: run configurations, write machine-readable
traces, and aggregate sweeps.

One CSV per run with the fixed column order below; floats are written with
``repr`` so they round-trip exactly.  ``wall_ms`` is advisory timing and is
excluded from every correctness comparison.  Multi-run protocols derive the
run seeds as base_seed + run_index, so results are independent of worker
scheduling.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .optimizers import OptimizerConfig, OptimizerTrace, run

CSV_COLUMNS = [
    "run_id",
    "seed",
    "algorithm",
    "n_qubits",
    "delta",
    "d",
    "iter",
    "energy",
    "energy_error",
    "grad_norm",
    "step_size",
    "delta_k",
    "circuit_evals",
    "cumulative_gates",
    "wall_ms",
]

DEFAULT_D_SCAN = (1, 4, 8, 16, 32, 64, 128, 256)
DEFAULT_D1_QUBITS = (2, 3, 4, 5)


@dataclass
class ExperimentSpec:
    """One run to execute and persist.

    ``d`` is the requested subspace dimension as labeled in the output; it is
    clamped to the 4**n - 1 available non-identity words when it exceeds
    them (the identity direction carries no gradient or curvature, so the
    clamped run is equivalent).
    """

    algorithm: str
    n_qubits: int
    delta: float = 0.5
    d: int = 1
    seed: int = 0
    max_iters: int = 500
    warm_start_vqa: int = 0
    rel_energy_tol: float | None = 1e-10
    error_tol: float | None = None
    tag: str = "custom"

    def run_id(self) -> str:
        return f"{self.algorithm}_n{self.n_qubits}_d{self.d}_seed{self.seed}"

    def to_config(self) -> OptimizerConfig:
        d_eff = self.d
        if self.algorithm not in ("vqa",):
            d_eff = min(self.d, 4**self.n_qubits - 1)
        return OptimizerConfig(
            n_qubits=self.n_qubits,
            algorithm=self.algorithm,
            delta=self.delta,
            d=d_eff,
            seed=self.seed,
            max_iters=self.max_iters,
            rel_energy_tol=self.rel_energy_tol,
            error_tol=self.error_tol,
            warm_start_vqa=self.warm_start_vqa,
        )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))  # shortest round-trip decimal
    return str(value)


def write_trace(trace: OptimizerTrace, spec: ExperimentSpec, path: str) -> None:
    """Write one trace as CSV with the pinned schema."""
    cumulative = 0
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in trace.records:
                cumulative += rec.gates_appended
                writer.writerow(
                    [
                        spec.run_id(),
                        spec.seed,
                        spec.algorithm,
                        spec.n_qubits,
                        _fmt(float(spec.delta)),
                        spec.d,
                        rec.k,
                        _fmt(rec.energy),
                        _fmt(rec.energy_error),
                        _fmt(rec.grad_norm),
                        _fmt(rec.step_size),
                        _fmt(rec.delta_k),
                        rec.circuit_evals,
                        cumulative,
                        _fmt(rec.wall_ms),
                    ]
                )
    except OSError as exc:
        raise OSError(f"failed to write trace {path}: {exc}") from exc


def read_trace(path: str) -> dict[str, list]:
    """Read a trace CSV back into per-column lists (strings preserved)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected trace schema in {path}: {header}")
        rows = list(reader)
    return {name: [row[i] for row in rows] for i, name in enumerate(CSV_COLUMNS)}


def trace_bytes_without_wall(path: str) -> bytes:
    """File content with the advisory wall_ms column removed, for
    byte-identity comparisons."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            out.append(",".join(row[:-1]))
    return ("\n".join(out) + "\n").encode()


def run_and_write(spec: ExperimentSpec, out_dir: str) -> str:
    """Execute one spec and persist its trace; returns the CSV path."""
    trace = run(spec.to_config())
    path = os.path.join(out_dir, spec.run_id() + ".csv")
    write_trace(trace, spec, path)
    return path


def _worker(args):
    spec_fields, out_dir = args
    return run_and_write(ExperimentSpec(**spec_fields), out_dir)


def worker_count() -> int:
    env = os.environ.get("RQCD_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def run_sweep(specs: list[ExperimentSpec], out_dir: str, workers: int | None = None) -> list[str]:
    """Run many specs, one CSV each; parallel when workers allow."""
    os.makedirs(out_dir, exist_ok=True)
    if workers is None:
        workers = worker_count()
    if workers <= 1 or len(specs) <= 1:
        return [run_and_write(spec, out_dir) for spec in specs]
    payload = [({f.name: getattr(s, f.name) for f in fields(s)}, out_dir) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, payload))


def _mean_error_curve(paths: list[str]) -> list[float]:
    """Mean energy error per iteration index over runs; ragged traces are
    averaged over the runs that reached each index."""
    curves = []
    for path in paths:
        cols = read_trace(path)
        curves.append([float(v) for v in cols["energy_error"]])
    length = max(len(c) for c in curves)
    out = []
    for i in range(length):
        vals = [c[i] for c in curves if len(c) > i]
        out.append(sum(vals) / len(vals))
    return out


def scan_d(
    n_qubits: int = 4,
    delta: float = 0.5,
    d_values=DEFAULT_D_SCAN,
    runs: int = 20,
    algorithms=("rrsgp-fixed", "rrsgp-exact", "rrsn"),
    base_seed: int = 0,
    max_iters: int = 100,
    warm_start_vqa: int = 200,
    out_dir: str = "scan_d",
    workers: int | None = None,
) -> dict:
    """Subspace-dimension scan: every algorithm at every d, ``runs`` seeds
    each, identical iteration budgets."""
    specs = [
        ExperimentSpec(
            algorithm=algo,
            n_qubits=n_qubits,
            delta=delta,
            d=d,
            seed=base_seed + r,
            max_iters=max_iters,
            warm_start_vqa=warm_start_vqa,
            tag="fig5",
        )
        for algo in algorithms
        for d in d_values
        for r in range(runs)
    ]
    paths = run_sweep(specs, out_dir, workers)
    by_key: dict[tuple, list[str]] = {}
    for spec, path in zip(specs, paths):
        by_key.setdefault((spec.algorithm, spec.d), []).append(path)
    summary = {
        "experiment": "scan_d",
        "n_qubits": n_qubits,
        "delta": delta,
        "runs": runs,
        "max_iters": max_iters,
        "warm_start_vqa": warm_start_vqa,
        "results": [
            {
                "algorithm": algo,
                "d": d,
                "files": [os.path.basename(p) for p in group],
                "mean_final_error": float(
                    np.mean([float(read_trace(p)["energy_error"][-1]) for p in group])
                ),
                "mean_error_curve": _mean_error_curve(group),
            }
            for (algo, d), group in sorted(by_key.items())
        ],
    }
    _write_summary(summary, out_dir)
    return summary


def compare_d1(
    n_values=DEFAULT_D1_QUBITS,
    delta: float = 0.5,
    runs: int = 10,
    algorithms=("rrsgp-fixed", "rrsgp-exact", "rrsn-d1"),
    base_seed: int = 0,
    error_tol: float = 1e-5,
    max_iters: int = 200_000,
    warm_start_vqa: int = 200,
    out_dir: str = "compare_d1",
    workers: int | None = None,
) -> dict:
    """One-dimensional-subspace comparison: iterations to reach the energy
    error target, averaged over seeds, per qubit count and algorithm.

    The relative-energy stall criterion is disabled: single-direction steps
    legitimately make tiny progress long before the error target is met.
    """
    specs = [
        ExperimentSpec(
            algorithm=algo,
            n_qubits=n,
            delta=delta,
            d=1,
            seed=base_seed + r,
            max_iters=max_iters,
            warm_start_vqa=warm_start_vqa,
            rel_energy_tol=None,
            error_tol=error_tol,
            tag="fig7",
        )
        for algo in algorithms
        for n in n_values
        for r in range(runs)
    ]
    paths = run_sweep(specs, out_dir, workers)
    by_key: dict[tuple, list[str]] = {}
    for spec, path in zip(specs, paths):
        by_key.setdefault((spec.algorithm, spec.n_qubits), []).append(path)
    summary = {
        "experiment": "compare_d1",
        "delta": delta,
        "runs": runs,
        "error_tol": error_tol,
        "warm_start_vqa": warm_start_vqa,
        "results": [
            {
                "algorithm": algo,
                "n_qubits": n,
                "files": [os.path.basename(p) for p in group],
                "mean_iterations": float(
                    np.mean([int(read_trace(p)["iter"][-1]) for p in group])
                ),
                "mean_final_error": float(
                    np.mean([float(read_trace(p)["energy_error"][-1]) for p in group])
                ),
            }
            for (algo, n), group in sorted(by_key.items())
        ],
    }
    _write_summary(summary, out_dir)
    return summary


def _write_summary(summary: dict, out_dir: str) -> None:
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
