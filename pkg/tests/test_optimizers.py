import numpy as np
import pytest

from rqcd import (
    Adam,
    OptimizerConfig,
    PauliSum,
    StateVector,
    build_xxz,
    exact_line_search,
    expectation,
    replay,
    run,
    vqa_run,
    word_from_index,
    xxz_ground_energy,
)
from rqcd.optimizers import _phi_and_derivative, _rrsn_d1_step, _rrsgp_step

Y1 = word_from_index(2, 1)
ZOP = PauliSum(1, [(1.0, word_from_index(3, 1))])


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(n_qubits=2, algorithm="nope")
    with pytest.raises(ValueError):
        OptimizerConfig(n_qubits=2, d=16)
    with pytest.raises(ValueError):
        OptimizerConfig(n_qubits=2, grad_tol=-1.0)
    cfg = OptimizerConfig(n_qubits=3, algorithm="rrsn-d1", d=7)
    assert cfg.d == 1


def test_adam_quadratic_descent():
    adam = Adam(lr=0.1)
    x = np.array([3.0, -2.0])
    for _ in range(400):
        x = adam.step(x, 2.0 * x)
    assert np.max(np.abs(x)) < 1e-3


def test_adam_first_step_size():
    adam = Adam(lr=0.05)
    x = adam.step(1.0, 123.4)
    # bias-corrected first step is ~lr regardless of gradient scale
    assert x == pytest.approx(1.0 - 0.05, abs=1e-3)


def test_phi_derivative_matches_finite_difference(rng):
    n = 3
    op = build_xxz(n, 0.5)
    amps = StateVector.uniform(n).amplitudes
    words = [word_from_index(int(j), n) for j in (5, 17, 40)]
    omegas = np.array([0.3, -0.7, 0.2])
    h = 1e-6
    for t in (0.0, 0.3, -1.1):
        phi, dphi = _phi_and_derivative(amps, op, words, omegas, t)
        fp, _ = _phi_and_derivative(amps, op, words, omegas, t + h)
        fm, _ = _phi_and_derivative(amps, op, words, omegas, t - h)
        assert dphi == pytest.approx((fp - fm) / (2 * h), abs=1e-6)


def test_exact_line_search_sinusoid():
    # phi(t) = -sin(2t): minimizer pi/4, minimum -1
    amps = StateVector.uniform(1).amplitudes
    t, phi = exact_line_search(amps, ZOP, [Y1], np.array([-1.0]))
    assert abs(t - np.pi / 4) < 0.15
    assert phi <= -0.95


def test_exact_line_search_never_worse_than_default(rng):
    n = 2
    op = build_xxz(n, 0.5)
    for _ in range(5):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps = v / np.linalg.norm(v)
        words = [word_from_index(int(j), n) for j in (3, 9)]
        omegas = rng.normal(size=2)
        t, phi = exact_line_search(amps, op, words, omegas)
        phi_default, _ = _phi_and_derivative(amps, op, words, omegas, 0.1)
        assert phi <= phi_default + 1e-12


def test_exact_line_search_rejects_zero_direction():
    amps = StateVector.uniform(1).amplitudes
    with pytest.raises(ValueError):
        exact_line_search(amps, ZOP, [Y1], np.array([0.0]))


def test_rrsgp_step_hand_value():
    # single direction Y on |+> with O = Z: omega = -1, energy -> -sin(0.2)
    cfg = OptimizerConfig(n_qubits=1, algorithm="rrsgp-fixed", d=1, fixed_step=0.1)
    rng = np.random.default_rng(0)
    amps = StateVector.uniform(1).amplitudes
    for _ in range(50):  # the sampler must eventually draw Y (index 2)
        probe = np.random.default_rng(int(rng.integers(1 << 31)))
        if probe.choice(3, size=1, replace=False)[0] + 1 == 2:
            step = _rrsgp_step(amps, ZOP, cfg, probe, exact=False)
            assert step.f_new == pytest.approx(-np.sin(0.2), abs=1e-12)
            assert step.gates[0][2] == pytest.approx(-0.1, abs=1e-12)
            return
    pytest.fail("sampler never drew the Y direction")


def test_rrsn_d1_hand_values():
    # |+>, O = Z, direction Y: g = -2, curvature 0, omega = -20, Armijo at t=1
    cfg = OptimizerConfig(n_qubits=1, algorithm="rrsn-d1")
    amps = StateVector.uniform(1).amplitudes
    for probe_seed in range(50):
        probe = np.random.default_rng(probe_seed)
        if probe.choice(3, size=1, replace=False)[0] + 1 == 2:
            step = _rrsn_d1_step(amps, ZOP, cfg, probe, f_k=0.0)
            assert step.g_dot_omega == pytest.approx(40.0, abs=1e-10)
            assert step.gates[0][2] == pytest.approx(-20.0 * step.step_size)
            assert step.f_new <= 0.0 - 1e-4 * step.step_size * 40.0
            return
    pytest.fail("sampler never drew the Y direction")


def test_rrsn_d1_critical_point_regularization():
    # |0>, O = Z, direction X: g = 0, curvature -4, delta = 4.1, no-op
    cfg = OptimizerConfig(n_qubits=1, algorithm="rrsn-d1")
    amps = StateVector.zero(1).amplitudes
    for probe_seed in range(50):
        probe = np.random.default_rng(probe_seed)
        if probe.choice(3, size=1, replace=False)[0] + 1 == 1:
            step = _rrsn_d1_step(amps, ZOP, cfg, probe, f_k=1.0)
            assert step.uninformative
            assert step.delta_k == pytest.approx(4.1)
            assert step.f_new == 1.0
            return
    pytest.fail("sampler never drew the X direction")


def test_run_immediate_convergence_at_eigenstate():
    # the variance at an exact eigenstate carries ~1e-14 floating-point
    # noise, so the norm floor is ~1e-7; a tolerance above that floor must
    # return before the first step
    cfg = OptimizerConfig(n_qubits=2, algorithm="rrsn", d=5, max_iters=50, grad_tol=1e-6)
    amps = np.zeros(4, dtype=complex)
    amps[1] = 1 / np.sqrt(2)  # singlet (|01> - |10>)/sqrt(2)
    amps[2] = -1 / np.sqrt(2)
    trace = run(cfg, initial_state=StateVector(2, amps))
    assert trace.status == "grad_converged"
    assert trace.iterations == 0
    assert trace.errors()[0] < 1e-9


def test_run_deterministic_trace():
    cfg = OptimizerConfig(n_qubits=3, algorithm="rrsn", d=8, seed=11, max_iters=12)
    a = run(cfg)
    b = run(cfg)
    assert a.status == b.status
    assert np.array_equal(a.energies(), b.energies())
    assert np.array_equal(a.grad_norms(), b.grad_norms())
    assert len(a.gates) == len(b.gates)


def test_run_gate_depth_accounting():
    cfg = OptimizerConfig(
        n_qubits=3, algorithm="rrsgp-fixed", d=5, seed=4, max_iters=7, rel_energy_tol=None
    )
    trace = run(cfg)
    assert trace.iterations == 7
    assert len(trace.gates) == 7 * 5
    assert all(r.gates_appended == 5 for r in trace.records[1:])


def test_run_gate_record_replays_to_final_state():
    cfg = OptimizerConfig(n_qubits=3, algorithm="rrsn", d=10, seed=2, max_iters=8)
    trace = run(cfg)
    replayed = replay(trace.gates, StateVector.uniform(3))
    assert np.max(np.abs(replayed.amplitudes - trace.final_amplitudes)) < 1e-10


def test_rrsn_invariants_along_run():
    cfg = OptimizerConfig(n_qubits=3, algorithm="rrsn", d=20, seed=5, max_iters=40)
    trace = run(cfg)
    energies = trace.energies()
    assert np.all(np.diff(energies) <= 1e-12)  # Armijo monotonicity
    for rec in trace.records[1:]:
        if rec.uninformative:
            continue
        assert rec.g_dot_omega > 0.0
        assert rec.lam_min_reg >= 0.1 - 1e-9
        assert rec.halvings <= 60


def test_rrsn_converges_small_system():
    cfg = OptimizerConfig(n_qubits=2, algorithm="rrsn", d=15, seed=0, max_iters=60)
    trace = run(cfg)
    assert trace.errors()[-1] < 1e-9


def test_vqa_zero_parameters_reproducible():
    op = build_xxz(3, 0.5)
    a = vqa_run(op, StateVector.uniform(3), iters=3)
    b = vqa_run(op, StateVector.uniform(3), iters=3)
    assert a.records[0].energy == b.records[0].energy
    assert a.energies().tolist() == b.energies().tolist()


def test_vqa_zero_circuit_is_cnot_chain_only():
    # all-zero angles: RY/RZ act as identity; the CNOT chain fixes |+...+>
    op = build_xxz(3, 0.5)
    trace = vqa_run(op, StateVector.uniform(3), iters=1)
    assert trace.records[0].energy == pytest.approx(
        expectation(op, StateVector.uniform(3))
    )


def test_vqa_parameter_count_and_improvement():
    op = build_xxz(2, 0.5)
    trace = vqa_run(op, StateVector.uniform(2), layers=2, iters=40)
    assert len(trace.gates) == 2 * (2 * 2 + 1)  # per layer: 2n rotations + n-1 cnots
    assert trace.energies()[-1] < trace.energies()[0]


def test_warm_start_prefix_recorded():
    cfg = OptimizerConfig(
        n_qubits=2, algorithm="rrsgp-fixed", d=3, seed=1, max_iters=3, warm_start_vqa=5
    )
    trace = run(cfg)
    assert trace.warm_gate_count == 2 * (2 * 2 + 1)
    replayed = replay(trace.gates, StateVector.uniform(2))
    assert np.max(np.abs(replayed.amplitudes - trace.final_amplitudes)) < 1e-10


def test_error_tol_termination():
    # warm-started per the d=1 comparison protocol; cold starts on the tiny
    # chain can legitimately land on excited critical points instead
    cfg = OptimizerConfig(
        n_qubits=2,
        algorithm="rrsn-d1",
        seed=3,
        max_iters=5000,
        rel_energy_tol=None,
        error_tol=1e-5,
        warm_start_vqa=200,
    )
    trace = run(cfg)
    assert trace.status == "error_converged"
    assert trace.errors()[-1] < 1e-5


def test_xxz_ground_energy_cache():
    assert xxz_ground_energy(2, 0.5) == pytest.approx(-5.0, abs=1e-9)
    assert xxz_ground_energy(2, 0.5) == xxz_ground_energy(2, 0.5)
