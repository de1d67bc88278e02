"""Acceptance gate: every criterion runs at its stated tolerance and prints
one PASS/FAIL line (visible with ``pytest -s`` or on failure).

The heavy convergence studies are shared module-scoped fixtures so the
per-iteration invariants can be checked on the same runs they came from.
"""
import os
import time

import numpy as np
import pytest

from rqcd import (
    OptimizerConfig,
    StateVector,
    assemble_sample,
    build_xxz,
    run,
    word_from_index,
    xxz_ground_energy,
)
from rqcd import estimators, oracle
from rqcd.estimators import eval_shifted, eval_shifted2
from rqcd.experiment import ExperimentSpec, run_and_write, trace_bytes_without_wall
from conftest import random_hermitian, random_skew, random_state, random_pauli_sum

RHO = 0.1
ERROR_FLOOR = 1e-13  # measurement floor for converged energy errors


def _verdict(name: str, ok: bool, detail: str = ""):
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"{name}: {detail}"


def _fit_slope(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _log_linear_tail(errors, r2_min=0.9):
    """Fit log10(error) over the decaying tail; returns (ok, slope, r2)."""
    e = np.asarray(errors)
    e = e[e > 1e-13]
    start = next((i for i, v in enumerate(e) if v < 0.1 * e[0]), 0)
    w = np.log10(e[start:])
    if len(w) < 6:
        return False, 0.0, 0.0
    k = np.arange(len(w))
    slope, icpt = np.polyfit(k, w, 1)
    resid = w - (slope * k + icpt)
    r2 = 1.0 - np.sum(resid**2) / np.sum((w - w.mean()) ** 2)
    return bool(slope < 0 and r2 >= r2_min), float(slope), float(r2)


def _longest_quadratic_run(errors, bound=10.0, window=1e-2):
    """Longest run of consecutive k with error_k < window and
    error_{k+1} <= bound * error_k**2."""
    best = cur = 0
    for k in range(len(errors) - 1):
        if errors[k] < window and errors[k + 1] <= bound * errors[k] ** 2:
            cur += 1
            best = max(best, cur)
        else:
            cur = 0
    return best


# --- shared heavy runs ------------------------------------------------------


@pytest.fixture(scope="module")
def fig3_traces():
    tic = time.perf_counter()
    full = 4**4 - 1
    traces = {
        "rrsn": run(OptimizerConfig(n_qubits=4, algorithm="rrsn", d=full, seed=0, max_iters=50)),
        "rrsgp-fixed": run(
            OptimizerConfig(n_qubits=4, algorithm="rrsgp-fixed", d=full, seed=0, max_iters=500)
        ),
        "rrsgp-exact": run(
            OptimizerConfig(n_qubits=4, algorithm="rrsgp-exact", d=full, seed=0, max_iters=500)
        ),
    }
    return traces, time.perf_counter() - tic


@pytest.fixture(scope="module")
def fig5_results():
    tic = time.perf_counter()
    cells = [("rrsn", 64, 25), ("rrsn", 256, 25), ("rrsgp-fixed", 32, 150), ("rrsgp-fixed", 256, 150)]
    out = {}
    for algo, d_label, iters in cells:
        d_eff = min(d_label, 255)
        traces = [
            run(
                OptimizerConfig(
                    n_qubits=4,
                    algorithm=algo,
                    d=d_eff,
                    seed=seed,
                    max_iters=iters,
                    warm_start_vqa=200,
                )
            )
            for seed in range(20)
        ]
        out[(algo, d_label)] = traces
    return out, time.perf_counter() - tic


@pytest.fixture(scope="module")
def fig7_results():
    tic = time.perf_counter()
    out = {}
    for n in (2, 3, 4, 5):
        for algo in ("rrsgp-fixed", "rrsgp-exact", "rrsn-d1"):
            out[(algo, n)] = [
                run(
                    OptimizerConfig(
                        n_qubits=n,
                        algorithm=algo,
                        d=1,
                        seed=seed,
                        max_iters=20000,
                        rel_energy_tol=None,
                        error_tol=1e-5,
                        warm_start_vqa=200,
                    )
                )
                for seed in range(10)
            ]
    return out, time.perf_counter() - tic


# --- criteria ---------------------------------------------------------------


def test_c01_estimator_oracle_equivalence():
    tic = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for i in range(50):
        n = (1, 2, 3)[i % 3]
        state = random_state(rng, n)
        op = random_pauli_sum(rng, n, 5)
        indices = list(range(1, 4**n))
        sample = assemble_sample(state, op, indices)
        dense_op = oracle.dense_of(op)
        psi = oracle.dense_of(state)
        words = [oracle.dense_of(word_from_index(j, n)) for j in indices]
        grad_ref = np.array(
            [(-1j * np.trace(w @ (psi @ dense_op - dense_op @ psi))).real for w in words]
        )
        applied = [oracle.hessian_apply_tilde(dense_op, psi, w) for w in words]
        hess_ref = np.array(
            [[np.trace(wr @ ls).real for ls in applied] for wr in words]
        )
        worst = max(
            worst,
            float(np.max(np.abs(sample.grad - grad_ref))),
            float(np.max(np.abs(sample.hess - hess_ref))),
        )
    elapsed = time.perf_counter() - tic
    _verdict(
        "c01 estimator/oracle equivalence",
        worst < 1e-10 and elapsed < 30.0,
        f"worst |diff| {worst:.2e}, {elapsed:.1f}s",
    )


def test_c02_lemma_finite_differences():
    tic = time.perf_counter()
    rng = np.random.default_rng(202)
    worst1 = worst2 = 0.0
    half = np.pi / 2
    for i in range(50):
        n = (1, 2, 3)[i % 3]
        state = random_state(rng, n)
        op = random_pauli_sum(rng, n, 5)
        js = rng.choice(4**n - 1, size=2, replace=False) + 1
        ws, wr = (word_from_index(int(j), n) for j in js)
        # first derivative, h = 1e-5
        h = 1e-5
        fd = (eval_shifted(state, op, ws, h) - eval_shifted(state, op, ws, -h)) / (2 * h)
        rule = 0.5 * (eval_shifted(state, op, ws, half) - eval_shifted(state, op, ws, -half))
        worst1 = max(worst1, abs(fd - rule))
        # second derivatives, h = 1e-4
        h = 1e-4

        def g(x, y):
            return eval_shifted2(state, op, ws, wr, x, y)

        fd_xx = (g(h, 0) + g(-h, 0) - 2 * g(0, 0)) / h**2
        rule_xx = 0.5 * (g(half, 0) + g(-half, 0) - 2 * g(0, 0))
        fd_xy = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4 * h**2)
        rule_xy = 0.25 * (g(half, half) - g(half, -half) - g(-half, half) + g(-half, -half))
        worst2 = max(worst2, abs(fd_xx - rule_xx), abs(fd_xy - rule_xy))
    elapsed = time.perf_counter() - tic
    _verdict(
        "c02 lemma proofs as finite differences",
        worst1 < 1e-7 and worst2 < 1e-6 and elapsed < 30.0,
        f"first {worst1:.2e}, second {worst2:.2e}, {elapsed:.1f}s",
    )


def test_c03_hessian_operator_property_suite():
    rng = np.random.default_rng(303)
    p = 8
    worst = {"adjoint": 0.0, "linear": 0.0, "ilinear": 0.0, "selfC": 0.0, "selfH": 0.0, "selfU": 0.0}
    for _ in range(100):
        o = random_hermitian(rng, p)
        psi = oracle.dense_of(random_state(rng, 3))
        x = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
        y = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))

        def L(m):
            return oracle.hessian_apply_tilde(o, psi, m)

        worst["adjoint"] = max(worst["adjoint"], np.max(np.abs(L(x.conj().T) - L(x).conj().T)))
        a, b = rng.normal(), rng.normal()
        worst["linear"] = max(worst["linear"], np.max(np.abs(L(a * x + b * y) - a * L(x) - b * L(y))))
        worst["ilinear"] = max(worst["ilinear"], np.max(np.abs(L(1j * x) - 1j * L(x))))
        # self-adjointness on C^{pxp}, H(p), u(p)
        worst["selfC"] = max(
            worst["selfC"], abs(np.trace(L(x).conj().T @ y) - np.trace(x.conj().T @ L(y)))
        )
        ah, bh = random_hermitian(rng, p), random_hermitian(rng, p)
        worst["selfH"] = max(
            worst["selfH"],
            abs((np.trace(L(ah).conj().T @ bh) - np.trace(ah.conj().T @ L(bh))).real),
        )
        au, bu = random_skew(rng, p), random_skew(rng, p)
        worst["selfU"] = max(
            worst["selfU"],
            abs((np.trace(L(au).conj().T @ bu) - np.trace(au.conj().T @ L(bu))).real),
        )
    bad = {k: v for k, v in worst.items() if v >= 1e-10}
    _verdict(
        "c03 Hessian operator property suite",
        not bad,
        " ".join(f"{k}={v:.1e}" for k, v in worst.items()),
    )


def test_c04_retraction_axioms():
    rng = np.random.default_rng(404)
    ts = np.logspace(-1, -4, 7)
    n = 2
    slopes_exp, slopes_trt, slopes_dev = [], [], []
    for _ in range(5):
        u = oracle.exp_skew(random_skew(rng, 4))
        js = rng.choice(15, size=4, replace=False) + 1
        words = [word_from_index(int(j), n) for j in js]
        coeffs = rng.normal(size=4)
        tilde = sum(1j * c * oracle.dense_of(w) for c, w in zip(coeffs, words))
        eta = tilde @ u
        err_exp, err_trt, devs = [], [], []
        for t in ts:
            r_exp = oracle.exp_map(t * tilde, u)
            r_trt = oracle.trotter_map(words, coeffs, t, u)
            err_exp.append(np.linalg.norm((r_exp - u) / t - eta))
            err_trt.append(np.linalg.norm((r_trt - u) / t - eta))
            devs.append(np.linalg.norm(r_trt - r_exp))
        slopes_exp.append(_fit_slope(ts, err_exp))
        slopes_trt.append(_fit_slope(ts, err_trt))
        slopes_dev.append(_fit_slope(ts, devs))
    ok = all(0.9 <= s <= 1.1 for s in slopes_exp + slopes_trt) and all(
        1.8 <= s <= 2.2 for s in slopes_dev
    )
    _verdict(
        "c04 retraction axioms",
        ok,
        f"tangency exp {min(slopes_exp):.2f}..{max(slopes_exp):.2f}, "
        f"trt {min(slopes_trt):.2f}..{max(slopes_trt):.2f}, "
        f"deviation {min(slopes_dev):.2f}..{max(slopes_dev):.2f}",
    )


def test_c05_gradient_norm_identity():
    rng = np.random.default_rng(505)
    from rqcd import riemannian_grad_norm

    worst = 0.0
    for i in range(100):
        n = (1, 2, 3)[i % 3]
        state = random_state(rng, n)
        op = random_pauli_sum(rng, n, 5)
        dense = oracle.dense_of(op)
        psi = oracle.dense_of(state)
        ref = np.linalg.norm(psi @ dense - dense @ psi)
        worst = max(worst, abs(riemannian_grad_norm(op, state) - ref))
    _verdict("c05 gradient-norm identity", worst < 1e-9, f"worst |diff| {worst:.2e}")


def test_c06_fig3_convergence_shapes(fig3_traces):
    traces, build_seconds = fig3_traces
    rrsn = traces["rrsn"].errors()
    fixed = traces["rrsgp-fixed"].errors()
    exact = traces["rrsgp-exact"].errors()

    reached = bool(np.any(rrsn < 1e-9)) and len(rrsn) <= 51
    quad_run = _longest_quadratic_run(rrsn)
    quad_ok = quad_run >= 3
    fixed_ok, fixed_slope, fixed_r2 = _log_linear_tail(fixed)
    exact_ok, exact_slope, exact_r2 = _log_linear_tail(exact)
    m = min(len(fixed), len(exact))
    dominates = bool(np.all(exact[:m] <= fixed[:m] * (1 + 1e-9) + 1e-13))
    _verdict(
        "c06 fig3 analogue",
        reached and quad_ok and fixed_ok and exact_ok and dominates and build_seconds < 300,
        f"rrsn<1e-9 {reached}, quadratic-run {quad_run} (need >=3), "
        f"fixed tail slope {fixed_slope:.2f} R2 {fixed_r2:.3f}, "
        f"exact tail slope {exact_slope:.2f} R2 {exact_r2:.3f}, exact<=fixed {dominates}, "
        f"runs {build_seconds:.0f}s",
    )


def test_c07_vqa_baseline():
    tic = time.perf_counter()
    trace = run(OptimizerConfig(n_qubits=4, algorithm="vqa", max_iters=500))
    elapsed = time.perf_counter() - tic
    final = trace.errors()[-1]
    _verdict(
        "c07 VQA baseline plateau",
        final >= 0.5 and elapsed < 120.0,
        f"final error {final:.3f} (needs >= 0.5), {elapsed:.0f}s",
    )


def test_c08_fig5_robustness(fig5_results):
    results, build_seconds = fig5_results

    def mean_final(algo, d):
        return float(
            np.mean([max(t.errors()[-1], ERROR_FLOOR) for t in results[(algo, d)]])
        )

    rrsn_64, rrsn_256 = mean_final("rrsn", 64), mean_final("rrsn", 256)
    gp_32, gp_256 = mean_final("rrsgp-fixed", 32), mean_final("rrsgp-fixed", 256)
    rrsn_ok = rrsn_64 <= 10.0 * rrsn_256
    gp_ok = gp_32 > 10.0 * gp_256
    _verdict(
        "c08 fig5 analogue (subspace robustness)",
        rrsn_ok and gp_ok and build_seconds < 1800,
        f"rrsn d64 {rrsn_64:.2e} vs d256 {rrsn_256:.2e} (ratio {rrsn_64 / rrsn_256:.1f}); "
        f"rrsgp d32 {gp_32:.2e} vs d256 {gp_256:.2e} (ratio {gp_32 / gp_256:.1f}); "
        f"runs {build_seconds:.0f}s",
    )


def test_c09_fig7_iteration_counts(fig7_results):
    results, build_seconds = fig7_results
    means = {
        key: float(np.mean([t.iterations for t in traces]))
        for key, traces in results.items()
    }
    strict = all(
        means[("rrsn-d1", n)] < means[("rrsgp-fixed", n)]
        and means[("rrsn-d1", n)] < means[("rrsgp-exact", n)]
        for n in (2, 3, 4, 5)
    )
    evals_equal = all(
        all(
            rec.circuit_evals == 2
            for t in results[(algo, n)]
            for rec in t.records[1:]
        )
        for n in (2, 3, 4, 5)
        for algo in ("rrsn-d1", "rrsgp-fixed")
    )
    detail = "; ".join(
        f"N={n}: fixed {means[('rrsgp-fixed', n)]:.0f} exact {means[('rrsgp-exact', n)]:.0f} "
        f"rrsn {means[('rrsn-d1', n)]:.0f}"
        for n in (2, 3, 4, 5)
    )
    _verdict(
        "c09 fig7 analogue (d=1 iteration counts)",
        strict and evals_equal and build_seconds < 1800,
        detail + f"; per-iter evals equal {evals_equal}; runs {build_seconds:.0f}s",
    )


def test_c10_rrsn_iteration_invariants(fig3_traces, fig5_results, fig7_results):
    traces = [fig3_traces[0]["rrsn"]]
    traces += fig5_results[0][("rrsn", 64)] + fig5_results[0][("rrsn", 256)]
    for n in (2, 3, 4, 5):
        traces += fig7_results[0][("rrsn-d1", n)]
    checked = 0
    ok = True
    detail = ""
    for trace in traces:
        energies = trace.energies()
        if np.any(np.diff(energies) > 1e-12):
            ok, detail = False, "energy increased under Armijo"
            break
        for rec in trace.records[1:]:
            if rec.uninformative:
                continue
            checked += 1
            if not (rec.g_dot_omega is not None and rec.g_dot_omega > 0.0):
                ok, detail = False, f"descent violated at k={rec.k}"
                break
            if not rec.lam_min_reg >= RHO - 1e-9:
                ok, detail = False, f"regularized lambda_min {rec.lam_min_reg:.3e}"
                break
            if not rec.halvings <= 60:
                ok, detail = False, f"halvings {rec.halvings}"
                break
        if not ok:
            break
    _verdict(
        "c10 RRSN per-iteration invariants",
        ok and checked > 0,
        detail or f"{checked} informative iterations across {len(traces)} runs",
    )


def test_c11_determinism(tmp_path):
    specs = [
        ExperimentSpec(algorithm="rrsn", n_qubits=4, d=20, seed=7, max_iters=10),
        ExperimentSpec(algorithm="rrsgp-exact", n_qubits=3, d=12, seed=3, max_iters=15),
        ExperimentSpec(algorithm="vqa", n_qubits=2, seed=0, max_iters=20),
    ]
    ok = True
    for i, spec in enumerate(specs):
        d1 = tmp_path / f"a{i}"
        d2 = tmp_path / f"b{i}"
        os.makedirs(d1)
        os.makedirs(d2)
        f1 = run_and_write(spec, str(d1))
        f2 = run_and_write(spec, str(d2))
        if trace_bytes_without_wall(f1) != trace_bytes_without_wall(f2):
            ok = False
            break
    _verdict(
        "c11 determinism (byte-identical traces)",
        ok,
        "wall_ms column excluded (advisory timing)",
    )
