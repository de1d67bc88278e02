"""Figure rendering from trace files.

Three layouts:

* ``fig3`` (also used for ``fig4``): per-algorithm convergence panels,
  energy error and gradient norm, each on linear and log scales.
* ``fig5`` / ``fig6``: subspace-dimension overlays grouped by (algorithm, d),
  mean curve with a 10-90% nearest-rank quantile band, linear and log panels.
* ``fig7``: mean total iteration count per qubit count, one line per
  algorithm, log-scale counts.

Rendering is read-only over the CSVs; the returned series are exactly the
arrays handed to matplotlib, so callers can audit the plotted data.  Every
figure is written as both SVG and PNG.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .traces import TraceRun, load_runs, ragged_mean, ragged_quantile

LOG_FLOOR = 1e-16

TAGS = ("fig3", "fig4", "fig5", "fig6", "fig7")


@dataclass
class FigureSpec:
    tag: str
    input_glob: str
    output: str  # base path; .svg and .png are appended

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown figure tag {self.tag!r}")


@dataclass
class RenderResult:
    files: list[str]
    series: dict = field(repr=False)


def _clamp_log(values: np.ndarray) -> np.ndarray:
    return np.maximum(values, LOG_FLOOR)


def _check_homogeneous(runs: list[TraceRun], fields=("n_qubits", "delta")):
    for name in fields:
        values = {getattr(r, name) for r in runs}
        if len(values) > 1:
            raise ValueError(f"input traces disagree on {name}: {sorted(values)}")


def _save(fig, base: str) -> list[str]:
    files = [base + ".svg", base + ".png"]
    for path in files:
        fig.savefig(path)
    plt.close(fig)
    return files


def _render_convergence(spec: FigureSpec) -> RenderResult:
    runs = load_runs(spec.input_glob)
    _check_homogeneous(runs)
    groups: dict[str, list[TraceRun]] = {}
    for r in runs:
        groups.setdefault(r.algorithm, []).append(r)
    series = {}
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for algo in sorted(groups):
        err = ragged_mean([g.energy_error for g in groups[algo]])
        grad = ragged_mean([g.grad_norm for g in groups[algo]])
        series[algo] = {"energy_error": err, "grad_norm": grad}
        ks = np.arange(len(err))
        axes[0, 0].plot(ks, err, label=algo)
        axes[0, 1].semilogy(ks, _clamp_log(err), label=algo)
        axes[1, 0].plot(ks, grad, label=algo)
        axes[1, 1].semilogy(ks, _clamp_log(grad), label=algo)
    for ax, title in zip(
        axes.flat,
        ["energy error", "energy error (log)", "gradient norm", "gradient norm (log)"],
    ):
        ax.set_xlabel("iteration")
        ax.set_title(title)
        ax.legend(fontsize=8)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), series=series)


def _render_band_overlay(spec: FigureSpec) -> RenderResult:
    runs = load_runs(spec.input_glob)
    _check_homogeneous(runs)
    groups: dict[tuple, list[TraceRun]] = {}
    for r in runs:
        groups.setdefault((r.algorithm, r.d), []).append(r)
    series = {}
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
    for algo, d in sorted(groups):
        members = [g.energy_error for g in groups[(algo, d)]]
        mean = ragged_mean(members)
        lo = ragged_quantile(members, 0.1)
        hi = ragged_quantile(members, 0.9)
        series[(algo, d)] = {"mean": mean, "q10": lo, "q90": hi}
        ks = np.arange(len(mean))
        label = f"{algo} d={d}"
        axes[0].plot(ks, mean, label=label)
        axes[0].fill_between(ks, lo, hi, alpha=0.2)
        axes[1].semilogy(ks, _clamp_log(mean), label=label)
        axes[1].fill_between(ks, _clamp_log(lo), _clamp_log(hi), alpha=0.2)
    for ax, title in zip(axes, ["energy error", "energy error (log)"]):
        ax.set_xlabel("iteration")
        ax.set_title(title)
        ax.legend(fontsize=7)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), series=series)


def _render_iteration_counts(spec: FigureSpec) -> RenderResult:
    runs = load_runs(spec.input_glob)
    groups: dict[tuple, list[TraceRun]] = {}
    for r in runs:
        groups.setdefault((r.algorithm, r.n_qubits), []).append(r)
    algos = sorted({a for a, _ in groups})
    ns = sorted({n for _, n in groups})
    series = {}
    fig, ax = plt.subplots(figsize=(6, 4.2))
    for algo in algos:
        counts = np.array(
            [
                float(np.mean([g.iters[-1] for g in groups[(algo, n)]]))
                for n in ns
                if (algo, n) in groups
            ]
        )
        series[algo] = {"n_qubits": np.array(ns, dtype=float), "mean_iterations": counts}
        ax.semilogy(ns, counts, marker="o", label=algo)
    ax.set_xlabel("qubits")
    ax.set_ylabel("mean iterations to target")
    ax.set_xticks(ns)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), series=series)


def render(spec: FigureSpec) -> RenderResult:
    if spec.tag in ("fig3", "fig4"):
        return _render_convergence(spec)
    if spec.tag in ("fig5", "fig6"):
        return _render_band_overlay(spec)
    return _render_iteration_counts(spec)
