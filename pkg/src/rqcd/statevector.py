"""Exact statevector simulation of Pauli-word and ansatz gates.

A state on n qubits is a vector of 2**n complex amplitudes; bit ``l`` of the
basis index is qubit ``l``.  All gates are unitary, so norms are preserved to
machine precision.

Two rotation conventions coexist by design:

* Pauli-word rotations use exp(i * theta * P), the native gate of the
  Riemannian updates.  The parameter-shift circuits exp(i * x * P / 2) are
  realized by calling the same kernel with theta = x / 2.
* Ansatz rotations use the standard exp(-i * theta * sigma / 2) for RY / RZ.
"""
from __future__ import annotations

import math

import numpy as np

from .pauli import PauliWord

_INDEX_CACHE: dict[int, np.ndarray] = {}
_WORD_CACHE: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray]] = {}
_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)


def _indices(n_qubits: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(n_qubits)
    if idx is None:
        idx = np.arange(1 << n_qubits, dtype=np.int64)
        _INDEX_CACHE[n_qubits] = idx
    return idx


def _parity(v: np.ndarray) -> np.ndarray:
    v = v ^ (v >> 16)
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    return v & 1


def word_action(word: PauliWord) -> tuple[np.ndarray, np.ndarray]:
    """(source indices, phases) such that (P psi)[b] = phases[b] * psi[src[b]]."""
    key = (word.n_qubits, word.x_mask, word.z_mask)
    cached = _WORD_CACHE.get(key)
    if cached is None:
        idx = _indices(word.n_qubits)
        src = idx ^ word.x_mask
        signs = 1.0 - 2.0 * _parity(src & word.z_mask)
        phases = _I_POW[word.y_count % 4] * signs
        cached = (src, phases)
        _WORD_CACHE[key] = cached
    return cached


def apply_word_raw(amps: np.ndarray, word: PauliWord) -> np.ndarray:
    src, phases = word_action(word)
    return phases * amps[src]


def apply_rotation_raw(amps: np.ndarray, word: PauliWord, theta: float) -> np.ndarray:
    """exp(i * theta * P) acting on raw amplitudes; exact since P**2 = I."""
    return math.cos(theta) * amps + (1j * math.sin(theta)) * apply_word_raw(amps, word)


class StateVector:
    """2**n complex amplitudes; immutable by convention outside this module."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (1 << n_qubits,):
            raise ValueError(f"expected {1 << n_qubits} amplitudes, got {amplitudes.shape}")
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def uniform(cls, n_qubits: int) -> "StateVector":
        dim = 1 << n_qubits
        return cls(n_qubits, np.full(dim, 1.0 / math.sqrt(dim), dtype=complex))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_match(word: PauliWord, state: StateVector):
    if word.n_qubits != state.n_qubits:
        raise ValueError("mismatched qubit counts")


def apply_pauli(word: PauliWord, state: StateVector) -> StateVector:
    """P |psi>."""
    _check_match(word, state)
    return StateVector(state.n_qubits, apply_word_raw(state.amplitudes, word))


def apply_pauli_rotation(word: PauliWord, theta: float, state: StateVector) -> StateVector:
    """exp(i * theta * P) |psi> = cos(theta) |psi> + i sin(theta) P |psi>.

    The identity word gives a global phase exp(i * theta).
    """
    _check_match(word, state)
    return StateVector(state.n_qubits, apply_rotation_raw(state.amplitudes, word, theta))


def _qubit_split(n_qubits: int, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
    idx = _indices(n_qubits)
    i0 = idx[(idx >> qubit) & 1 == 0]
    return i0, i0 | (1 << qubit)


def apply_ry_raw(amps: np.ndarray, n_qubits: int, qubit: int, theta: float) -> np.ndarray:
    i0, i1 = _qubit_split(n_qubits, qubit)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    out = np.empty_like(amps)
    a0, a1 = amps[i0], amps[i1]
    out[i0] = c * a0 - s * a1
    out[i1] = s * a0 + c * a1
    return out


def apply_rz_raw(amps: np.ndarray, n_qubits: int, qubit: int, theta: float) -> np.ndarray:
    i0, i1 = _qubit_split(n_qubits, qubit)
    out = np.empty_like(amps)
    out[i0] = np.exp(-0.5j * theta) * amps[i0]
    out[i1] = np.exp(0.5j * theta) * amps[i1]
    return out


def apply_cnot_raw(amps: np.ndarray, n_qubits: int, control: int, target: int) -> np.ndarray:
    if control == target:
        raise ValueError("control and target must differ")
    idx = _indices(n_qubits)
    if not (0 <= control < n_qubits and 0 <= target < n_qubits):
        raise ValueError("qubit index out of range")
    sel = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    out = amps.copy()
    out[sel], out[sel | (1 << target)] = amps[sel | (1 << target)], amps[sel]
    return out


def apply_ry(qubit: int, theta: float, state: StateVector) -> StateVector:
    """exp(-i * theta * Y / 2) on one qubit."""
    return StateVector(state.n_qubits, apply_ry_raw(state.amplitudes, state.n_qubits, qubit, theta))


def apply_rz(qubit: int, theta: float, state: StateVector) -> StateVector:
    """exp(-i * theta * Z / 2) on one qubit."""
    return StateVector(state.n_qubits, apply_rz_raw(state.amplitudes, state.n_qubits, qubit, theta))


def apply_cnot(control: int, target: int, state: StateVector) -> StateVector:
    """Flip the target qubit where the control bit is set."""
    return StateVector(
        state.n_qubits, apply_cnot_raw(state.amplitudes, state.n_qubits, control, target)
    )


# Gates are recorded as plain tuples, in application order:
#   ("prot", word, angle)   exp(i * angle * word)
#   ("ry", qubit, angle)    exp(-i * angle * Y / 2)
#   ("rz", qubit, angle)    exp(-i * angle * Z / 2)
#   ("cnot", control, target)
GateTuple = tuple


def apply_gate_raw(amps: np.ndarray, n_qubits: int, gate: GateTuple) -> np.ndarray:
    kind = gate[0]
    if kind == "prot":
        return apply_rotation_raw(amps, gate[1], gate[2])
    if kind == "ry":
        return apply_ry_raw(amps, n_qubits, gate[1], gate[2])
    if kind == "rz":
        return apply_rz_raw(amps, n_qubits, gate[1], gate[2])
    if kind == "cnot":
        return apply_cnot_raw(amps, n_qubits, gate[1], gate[2])
    raise ValueError(f"unknown gate kind {kind!r}")


def replay(gates, state: StateVector) -> StateVector:
    """Apply a recorded gate list to a state, in order."""
    amps = state.amplitudes
    for gate in gates:
        amps = apply_gate_raw(amps, state.n_qubits, gate)
    return StateVector(state.n_qubits, amps)


def expectation(op, state: StateVector) -> float:
    """<psi| O |psi> for a PauliSum O; raises if the residual imaginary part
    exceeds 1e-9 (a corrupted, non-Hermitian operator)."""
    return expectation_raw(op, state.amplitudes)


def expectation_raw(op, amps: np.ndarray) -> float:
    val = np.vdot(amps, op.apply_vec(amps))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def riemannian_grad_norm(op, state: StateVector) -> float:
    """Frobenius norm of the commutator [|psi><psi|, O] for normalized psi.

    Equals sqrt(2 * (<O**2> - <O>**2)); computed from the single vector
    O|psi> in O(T * 2**n) for T operator terms.
    """
    return riemannian_grad_norm_raw(op, state.amplitudes)


def riemannian_grad_norm_raw(op, amps: np.ndarray) -> float:
    phi = op.apply_vec(amps)
    mean = np.vdot(amps, phi).real
    var = float(np.vdot(phi, phi).real - mean * mean)
    if var < 0.0:
        if var < -1e-12:
            raise ValueError(f"variance {var:.3e} is negative beyond tolerance")
        var = 0.0
    return math.sqrt(2.0 * var)
