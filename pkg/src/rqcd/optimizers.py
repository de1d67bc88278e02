"""Optimization drivers for ground-state circuit design on the unitary group.

Four algorithms share one loop:

* ``rrsgp-fixed`` / ``rrsgp-exact``: random-subspace gradient projection.
  Each iteration samples d Pauli directions, estimates the projected-gradient
  coefficients by parameter shift, scales them by 1/2**n, and appends the
  d rotation gates with a fixed step (0.1) or an exact line-search step.
* ``rrsn``: random-subspace Newton.  Builds the d x d curvature matrix on the
  sampled directions, regularizes it to lambda_min >= rho, solves for the
  Newton coefficients, and Armijo-backtracks from t = 1.
* ``rrsn-d1``: the d = 1 special case, where the curvature is a scalar that
  comes for free with the gradient evaluations and the Newton coefficient is
  g / max(L, rho).
* ``vqa``: the fixed-ansatz baseline, a two-layer hardware-efficient circuit
  (RY row, RZ row, CNOT chain per layer) trained with Adam on parameter-shift
  gradients from an all-zero start.

Termination: gradient norm below ``grad_tol``, relative energy change below
``rel_energy_tol``, optional energy-error target ``error_tol``, or the
iteration cap.  All randomness flows through one seeded generator per run, so
traces are bit-reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import estimators
from .hamiltonian import PauliSum, build_xxz, ground_energy
from .pauli import sample_subspace, word_from_index
from .statevector import (
    StateVector,
    apply_gate_raw,
    apply_rotation_raw,
    apply_word_raw,
    expectation_raw,
    riemannian_grad_norm_raw,
)

ALGORITHMS = ("rrsgp-fixed", "rrsgp-exact", "rrsn", "rrsn-d1", "vqa")

# subspace components at or below fp-noise scale are treated as an
# uninformative draw: the direction is numerically zero and Armijo could not
# measure a decrease against rounding error
_COMPONENT_FLOOR = 1e-13

_GROUND_CACHE: dict[tuple[int, float], float] = {}
_WARM_CACHE: dict[tuple, tuple[np.ndarray, tuple]] = {}


def xxz_ground_energy(n_qubits: int, delta: float) -> float:
    key = (n_qubits, float(delta))
    if key not in _GROUND_CACHE:
        _GROUND_CACHE[key] = ground_energy(build_xxz(n_qubits, delta))
    return _GROUND_CACHE[key]


@dataclass
class OptimizerConfig:
    n_qubits: int
    algorithm: str = "rrsn"
    delta: float = 0.5
    d: int = 1
    seed: int = 0
    fixed_step: float = 0.1
    ls_max_inner: int = 30
    ls_lr: float = 0.1
    ls_t0: float = 0.1
    rho: float = 0.1
    armijo_c: float = 1e-4
    armijo_beta: float = 0.5
    armijo: bool = True
    max_iters: int = 500
    grad_tol: float = 1e-9
    rel_energy_tol: float | None = 1e-10
    error_tol: float | None = None
    warm_start_vqa: int = 0
    vqa_layers: int = 2
    vqa_lr: float = 0.01

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "rrsn-d1":
            self.d = 1
        if self.algorithm != "vqa":
            n_words = 4**self.n_qubits - 1
            if not 1 <= self.d <= n_words:
                raise ValueError(f"d={self.d} out of range [1, {n_words}]")
        for name in ("grad_tol", "rho", "armijo_c", "armijo_beta", "fixed_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.rel_energy_tol is not None and self.rel_energy_tol <= 0:
            raise ValueError("rel_energy_tol must be positive or None")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class IterationRecord:
    k: int
    energy: float
    energy_error: float
    grad_norm: float
    step_size: float | None
    delta_k: float | None
    circuit_evals: int
    gates_appended: int
    wall_ms: float
    g_dot_omega: float | None = None
    lam_min_reg: float | None = None
    halvings: int | None = None
    uninformative: bool = False


@dataclass
class OptimizerTrace:
    algorithm: str
    n_qubits: int
    delta: float
    d: int
    seed: int
    f_ground: float
    status: str
    records: list[IterationRecord]
    gates: list = field(repr=False)
    warm_gate_count: int = 0
    final_amplitudes: np.ndarray | None = field(default=None, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.records) - 1

    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    def errors(self) -> np.ndarray:
        return np.array([r.energy_error for r in self.records])

    def grad_norms(self) -> np.ndarray:
        return np.array([r.grad_norm for r in self.records])


class Adam:
    """Adam with bias correction; beta1=0.9, beta2=0.999, eps=1e-8."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = 0.0
        self.v = 0.0

    def step(self, params, grads):
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grads
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grads**2
        m_hat = self.m / (1.0 - self.beta1**self.t)
        v_hat = self.v / (1.0 - self.beta2**self.t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def _apply_direction(amps: np.ndarray, words, angles) -> np.ndarray:
    for word, angle in zip(words, angles):
        amps = apply_rotation_raw(amps, word, angle)
    return amps


def _phi_and_derivative(psi, op, words, omegas, t):
    """phi(t) = <chi(t)| O |chi(t)> along chi(t) = prod_j exp(i w_j t P_j) psi
    (first word applied first), and its exact derivative d phi / d t by a
    reverse sweep over the gates."""
    chi = psi
    for word, w in zip(words, omegas):
        chi = apply_rotation_raw(chi, word, w * t)
    lam = op.apply_vec(chi)
    phi = float(np.vdot(chi, lam).real)
    dphi = 0.0
    fj = chi
    for word, w in zip(reversed(words), reversed(omegas)):
        # d phi / d theta_j = 2 Re <lambda_j| i P_j |f_j> = -2 Im <lambda_j|P_j f_j>
        pf = apply_word_raw(fj, word)
        dphi += w * (-2.0) * np.vdot(lam, pf).imag
        fj = apply_rotation_raw(fj, word, -w * t)
        lam = apply_rotation_raw(lam, word, -w * t)
    return phi, dphi


def exact_line_search(
    amps: np.ndarray,
    op: PauliSum,
    words,
    omegas,
    max_inner: int = 30,
    lr: float = 0.1,
    t0: float = 0.1,
) -> tuple[float, float]:
    """Minimize phi(t) along the sampled direction with Adam on the scalar t.

    Starts from t0, runs ``max_inner`` Adam steps, and returns the best
    (t, phi) seen among the evaluated points, which always include t0.
    """
    omegas = np.asarray(omegas, dtype=float)
    if not np.any(omegas):
        raise ValueError("all-zero direction; caller should have terminated")
    adam = Adam(lr)
    t = t0
    best_t, best_phi = t0, math.inf
    for _ in range(max_inner):
        phi, dphi = _phi_and_derivative(amps, op, words, omegas, t)
        if phi < best_phi:
            best_t, best_phi = t, phi
        t = float(adam.step(t, dphi))
    return best_t, best_phi


@dataclass
class _StepResult:
    amps: np.ndarray
    f_new: float
    step_size: float | None
    delta_k: float | None
    evals: int
    gates: list
    g_dot_omega: float | None = None
    lam_min_reg: float | None = None
    halvings: int | None = None
    uninformative: bool = False


def _component_floor(op: PauliSum) -> float:
    return _COMPONENT_FLOOR * max(1.0, op.coefficient_bound())


def _rrsgp_step(amps, op, cfg: OptimizerConfig, rng, exact: bool) -> _StepResult:
    n = cfg.n_qubits
    indices = sample_subspace(rng, n, cfg.d)
    state = StateVector(n, amps)
    comps, _, evals = estimators.gradient_only(state, op, indices)
    words = [word_from_index(j, n) for j in indices]
    omegas = comps / float(2**n)
    uninformative = float(np.max(np.abs(comps))) <= _component_floor(op)
    if uninformative:
        gates = [("prot", w, 0.0) for w in words]
        f = expectation_raw(op, amps)
        return _StepResult(amps, f, None, None, evals, gates, uninformative=True)
    if exact:
        t, _ = exact_line_search(
            amps, op, words, omegas, cfg.ls_max_inner, cfg.ls_lr, cfg.ls_t0
        )
    else:
        t = cfg.fixed_step
    angles = omegas * t
    new_amps = _apply_direction(amps, words, angles)
    f_new = expectation_raw(op, new_amps)
    gates = [("prot", w, a) for w, a in zip(words, angles)]
    return _StepResult(new_amps, f_new, t, None, evals, gates)


def _armijo_backtrack(amps, op, words, omegas, f_k, g_dot_omega, cfg: OptimizerConfig):
    """Backtracking from t = 1 until f_new <= f_k - c t g.Omega; raises after
    60 halvings, which would signal a non-descent direction."""
    t = 1.0
    for halvings in range(61):
        trial = _apply_direction(amps, words, omegas * t)
        f_new = expectation_raw(op, trial)
        if f_new <= f_k - cfg.armijo_c * t * g_dot_omega:
            return t, f_new, trial, halvings
        t *= cfg.armijo_beta
    raise RuntimeError("Armijo backtracking exceeded 60 halvings")


def _rrsn_step(amps, op, cfg: OptimizerConfig, rng, f_k: float) -> _StepResult:
    from . import linalg

    n = cfg.n_qubits
    indices = sample_subspace(rng, n, cfg.d)
    state = StateVector(n, amps)
    sample = estimators.assemble_sample(state, op, indices, f=f_k)
    words = list(sample.words)
    if float(np.max(np.abs(sample.grad))) <= _component_floor(op):
        gates = [("prot", w, 0.0) for w in words]
        return _StepResult(
            amps, f_k, None, None, sample.n_evals, gates, uninformative=True
        )
    lam_min = linalg.min_eigenvalue(sample.hess)
    delta_k = max(0.0, cfg.rho - lam_min)
    regularized = sample.hess + delta_k * np.eye(cfg.d)
    omegas = linalg.solve_spd(regularized, sample.grad)
    g_dot_omega = float(sample.grad @ omegas)
    if g_dot_omega <= 0.0:
        raise RuntimeError(f"Newton direction lost descent: g.Omega = {g_dot_omega:.3e}")
    if cfg.armijo:
        t, f_new, new_amps, halvings = _armijo_backtrack(
            amps, op, words, omegas, f_k, g_dot_omega, cfg
        )
    else:
        t, halvings = 1.0, 0
        new_amps = _apply_direction(amps, words, omegas)
        f_new = expectation_raw(op, new_amps)
    gates = [("prot", w, w_coeff * t) for w, w_coeff in zip(words, omegas)]
    return _StepResult(
        new_amps,
        f_new,
        t,
        delta_k,
        sample.n_evals,
        gates,
        g_dot_omega=g_dot_omega,
        lam_min_reg=lam_min + delta_k,
        halvings=halvings,
    )


def _rrsn_d1_step(amps, op, cfg: OptimizerConfig, rng, f_k: float) -> _StepResult:
    n = cfg.n_qubits
    indices = sample_subspace(rng, n, 1)
    state = StateVector(n, amps)
    comps, shifted, evals = estimators.gradient_only(state, op, indices)
    word = word_from_index(indices[0], n)
    g = float(comps[0])
    g_plus, g_minus = shifted[indices[0]]
    curvature = estimators.hess_diag(f_k, g_plus, g_minus)
    delta_k = max(0.0, cfg.rho - curvature)
    if abs(g) <= _component_floor(op):
        return _StepResult(
            amps, f_k, None, delta_k, evals, [("prot", word, 0.0)], uninformative=True
        )
    omega = g / max(curvature, cfg.rho)
    g_dot_omega = g * omega
    if cfg.armijo:
        t, f_new, new_amps, halvings = _armijo_backtrack(
            amps, op, [word], np.array([omega]), f_k, g_dot_omega, cfg
        )
    else:
        t, halvings = 1.0, 0
        new_amps = apply_rotation_raw(amps, word, omega)
        f_new = expectation_raw(op, new_amps)
    return _StepResult(
        new_amps,
        f_new,
        t,
        delta_k,
        evals,
        [("prot", word, omega * t)],
        g_dot_omega=g_dot_omega,
        lam_min_reg=max(curvature, cfg.rho),
        halvings=halvings,
    )


# --- VQA baseline ---------------------------------------------------------


def vqa_gates(params: np.ndarray, n_qubits: int, layers: int) -> list:
    """Hardware-efficient ansatz: per layer an RY on every qubit, an RZ on
    every qubit, then an open CNOT chain (control l -> target l+1)."""
    gates = []
    i = 0
    for _ in range(layers):
        for q in range(n_qubits):
            gates.append(("ry", q, float(params[i])))
            i += 1
        for q in range(n_qubits):
            gates.append(("rz", q, float(params[i])))
            i += 1
        for q in range(n_qubits - 1):
            gates.append(("cnot", q, q + 1))
    return gates


def _vqa_apply(params, start_amps, n_qubits, layers):
    amps = start_amps
    for gate in vqa_gates(params, n_qubits, layers):
        amps = apply_gate_raw(amps, n_qubits, gate)
    return amps


def _vqa_energy(params, start_amps, op, n_qubits, layers) -> float:
    return expectation_raw(op, _vqa_apply(params, start_amps, n_qubits, layers))


def vqa_run(
    op: PauliSum,
    start: StateVector,
    layers: int = 2,
    iters: int = 500,
    lr: float = 0.01,
    f_ground: float | None = None,
) -> OptimizerTrace:
    """Train the hardware-efficient ansatz with Adam from all-zero parameters.

    Gradients use the standard parameter-shift rule per parameter,
    g'(theta) = [f(theta + pi/2) - f(theta - pi/2)] / 2.
    """
    n = start.n_qubits
    if f_ground is None:
        f_ground = ground_energy(op)
    n_params = 2 * layers * n
    params = np.zeros(n_params)
    adam = Adam(lr)
    start_amps = start.amplitudes

    def make_record(k, f, amps, evals, wall):
        return IterationRecord(
            k=k,
            energy=f,
            energy_error=abs(f - f_ground),
            grad_norm=riemannian_grad_norm_raw(op, amps),
            step_size=lr if k > 0 else None,
            delta_k=None,
            circuit_evals=evals,
            gates_appended=0,
            wall_ms=wall,
        )

    amps = _vqa_apply(params, start_amps, n, layers)
    f = expectation_raw(op, amps)
    records = [make_record(0, f, amps, 0, 0.0)]
    for k in range(1, iters + 1):
        tic = time.perf_counter()
        grads = np.empty(n_params)
        for i in range(n_params):
            shift = np.zeros(n_params)
            shift[i] = np.pi / 2
            e_plus = _vqa_energy(params + shift, start_amps, op, n, layers)
            e_minus = _vqa_energy(params - shift, start_amps, op, n, layers)
            grads[i] = 0.5 * (e_plus - e_minus)
        params = adam.step(params, grads)
        amps = _vqa_apply(params, start_amps, n, layers)
        f = expectation_raw(op, amps)
        records.append(
            make_record(k, f, amps, 2 * n_params, (time.perf_counter() - tic) * 1e3)
        )
    return OptimizerTrace(
        algorithm="vqa",
        n_qubits=n,
        delta=math.nan,
        d=0,
        seed=0,
        f_ground=f_ground,
        status="max_iters",
        records=records,
        gates=vqa_gates(params, n, layers),
        final_amplitudes=amps,
    )


def _warm_start(n_qubits, delta, layers, iters, lr):
    """State after a short VQA run from the uniform state; cached because the
    zero-initialized VQA consumes no randomness."""
    key = (n_qubits, float(delta), layers, iters, lr)
    if key not in _WARM_CACHE:
        op = build_xxz(n_qubits, delta)
        trace = vqa_run(
            op,
            StateVector.uniform(n_qubits),
            layers=layers,
            iters=iters,
            lr=lr,
            f_ground=xxz_ground_energy(n_qubits, delta),
        )
        _WARM_CACHE[key] = (trace.final_amplitudes, tuple(trace.gates))
    amps, gates = _WARM_CACHE[key]
    return amps.copy(), list(gates)


def run(config: OptimizerConfig, initial_state: StateVector | None = None) -> OptimizerTrace:
    """Run one optimization to termination and return the full trace.

    The start state is the uniform superposition unless ``initial_state`` is
    given; an optional VQA warm start is applied on top of it.
    """
    n = config.n_qubits
    op = build_xxz(n, config.delta)
    f_ground = xxz_ground_energy(n, config.delta)

    if config.algorithm == "vqa":
        start = initial_state or StateVector.uniform(n)
        trace = vqa_run(
            op,
            start,
            layers=config.vqa_layers,
            iters=config.max_iters,
            lr=config.vqa_lr,
            f_ground=f_ground,
        )
        trace.delta = config.delta
        trace.seed = config.seed
        return trace

    rng = np.random.default_rng(config.seed)
    gates: list = []
    warm_count = 0
    if initial_state is not None:
        amps = initial_state.amplitudes.copy()
    else:
        amps = StateVector.uniform(n).amplitudes
    if config.warm_start_vqa > 0:
        amps, gates = _warm_start(
            n, config.delta, config.vqa_layers, config.warm_start_vqa, config.vqa_lr
        )
        warm_count = len(gates)

    f = expectation_raw(op, amps)
    grad_norm = riemannian_grad_norm_raw(op, amps)
    records = [
        IterationRecord(
            k=0,
            energy=f,
            energy_error=abs(f - f_ground),
            grad_norm=grad_norm,
            step_size=None,
            delta_k=None,
            circuit_evals=0,
            gates_appended=0,
            wall_ms=0.0,
        )
    ]
    status = "max_iters"
    for k in range(1, config.max_iters + 1):
        if grad_norm < config.grad_tol:
            status = "grad_converged"
            break
        if config.error_tol is not None and abs(f - f_ground) < config.error_tol:
            status = "error_converged"
            break
        tic = time.perf_counter()
        if config.algorithm == "rrsgp-fixed":
            step = _rrsgp_step(amps, op, config, rng, exact=False)
        elif config.algorithm == "rrsgp-exact":
            step = _rrsgp_step(amps, op, config, rng, exact=True)
        elif config.algorithm == "rrsn":
            step = _rrsn_step(amps, op, config, rng, f)
        else:  # rrsn-d1
            step = _rrsn_d1_step(amps, op, config, rng, f)
        wall = (time.perf_counter() - tic) * 1e3
        gates.extend(step.gates)
        grad_norm = riemannian_grad_norm_raw(op, step.amps)
        records.append(
            IterationRecord(
                k=k,
                energy=step.f_new,
                energy_error=abs(step.f_new - f_ground),
                grad_norm=grad_norm,
                step_size=step.step_size,
                delta_k=step.delta_k,
                circuit_evals=step.evals,
                gates_appended=len(step.gates),
                wall_ms=wall,
                g_dot_omega=step.g_dot_omega,
                lam_min_reg=step.lam_min_reg,
                halvings=step.halvings,
                uninformative=step.uninformative,
            )
        )
        f_prev, f = f, step.f_new
        amps = step.amps
        # a resampled-but-uninformative draw is not an energy plateau signal
        if (
            config.rel_energy_tol is not None
            and not step.uninformative
            and abs(f - f_prev) <= config.rel_energy_tol * max(abs(f_prev), 1e-300)
        ):
            status = "energy_stalled"
            break
    return OptimizerTrace(
        algorithm=config.algorithm,
        n_qubits=n,
        delta=config.delta,
        d=config.d,
        seed=config.seed,
        f_ground=f_ground,
        status=status,
        records=records,
        gates=gates,
        warm_gate_count=warm_count,
        final_amplitudes=amps,
    )
