"""Reader for the experiment trace CSVs.

The schema is the producer's contract: one row per iteration, fixed column
order, floats in round-trip decimal, empty cells for not-applicable values,
and an advisory wall_ms column that carries no correctness weight.
"""
from __future__ import annotations

import csv
import glob as globlib
from dataclasses import dataclass

import numpy as np

SCHEMA = [
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


@dataclass
class TraceRun:
    path: str
    run_id: str
    seed: int
    algorithm: str
    n_qubits: int
    delta: float
    d: int
    iters: np.ndarray
    energy: np.ndarray
    energy_error: np.ndarray
    grad_norm: np.ndarray

    def __len__(self) -> int:
        return len(self.iters)


def read_trace(path: str) -> TraceRun:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SCHEMA:
            raise ValueError(f"{path}: header does not match the trace schema")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    cols = {name: [row[i] for row in rows] for i, name in enumerate(SCHEMA)}
    return TraceRun(
        path=path,
        run_id=cols["run_id"][0],
        seed=int(cols["seed"][0]),
        algorithm=cols["algorithm"][0],
        n_qubits=int(cols["n_qubits"][0]),
        delta=float(cols["delta"][0]),
        d=int(cols["d"][0]),
        iters=np.array([int(v) for v in cols["iter"]]),
        energy=np.array([float(v) for v in cols["energy"]]),
        energy_error=np.array([float(v) for v in cols["energy_error"]]),
        grad_norm=np.array([float(v) for v in cols["grad_norm"]]),
    )


def load_runs(pattern: str) -> list[TraceRun]:
    paths = sorted(globlib.glob(pattern))
    if not paths:
        raise ValueError(f"no trace files match {pattern!r}")
    return [read_trace(p) for p in paths]


def ragged_mean(series: list[np.ndarray]) -> np.ndarray:
    """Mean per iteration index over the runs that reached that index."""
    length = max(len(s) for s in series)
    out = np.empty(length)
    for i in range(length):
        vals = [s[i] for s in series if len(s) > i]
        out[i] = float(np.mean(vals))
    return out


def nearest_rank_quantile(values: np.ndarray, q: float) -> float:
    """Classic nearest-rank quantile (no interpolation)."""
    ordered = np.sort(np.asarray(values))
    rank = max(1, int(np.ceil(q * len(ordered))))
    return float(ordered[rank - 1])


def ragged_quantile(series: list[np.ndarray], q: float) -> np.ndarray:
    length = max(len(s) for s in series)
    out = np.empty(length)
    for i in range(length):
        vals = np.array([s[i] for s in series if len(s) > i])
        out[i] = nearest_rank_quantile(vals, q)
    return out
