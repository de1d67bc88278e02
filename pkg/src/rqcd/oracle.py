"""Dense-matrix reference implementations of the geometric objects: tangent
projection, gradient commutator, Hessian operator, and exponential map.

Everything here is rebuilt from Kronecker products and plain matrix algebra,
independent of the statevector kernels, so the fast paths cannot confirm
their own bugs.  Test-only; never on the optimization hot path.
"""
from __future__ import annotations

import numpy as np

from . import linalg
from .hamiltonian import PauliSum, embed_hermitian
from .pauli import PauliWord
from .statevector import StateVector

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

HERMITIAN_TOL = 1e-10


def assert_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL):
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")


def assert_skew_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL):
    if np.max(np.abs(m + m.conj().T)) > tol:
        raise ValueError("matrix is not skew-Hermitian within tolerance")


def assert_unitary(m: np.ndarray, tol: float = HERMITIAN_TOL):
    if np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) > tol:
        raise ValueError("matrix is not unitary within tolerance")


def dense_of(obj) -> np.ndarray:
    """Dense matrix of a PauliWord or PauliSum, or the projector |psi><psi|
    of a StateVector.  Budget: 8 qubits."""
    if isinstance(obj, PauliWord):
        if obj.n_qubits > 8:
            raise ValueError("dense budget is 8 qubits")
        m = np.array([[1.0 + 0j]])
        # qubit 0 is the least-significant basis bit, so it sits innermost
        for q in range(obj.n_qubits):
            m = np.kron(_SINGLE[obj.letter(q)], m)
        return m
    if isinstance(obj, PauliSum):
        if obj.n_qubits > 8:
            raise ValueError("dense budget is 8 qubits")
        dim = 1 << obj.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for coeff, word in obj.terms:
            out += coeff * dense_of(word)
        return out
    if isinstance(obj, StateVector):
        psi = obj.amplitudes
        return np.outer(psi, psi.conj())
    raise TypeError(f"cannot densify {type(obj).__name__}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def skew_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a - a.conj().T)


def skew_project(z: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an ambient matrix Z onto the tangent space at
    the unitary U: Skew(Z U^dag) U."""
    assert_unitary(u)
    return skew_part(z @ u.conj().T) @ u


def riemannian_gradient_tilde(o: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Left skew-Hermitian representation of the Riemannian gradient of
    Tr{O U psi0 U^dag}: the commutator [O, psi]."""
    return commutator(o, psi)


def hessian_apply_tilde(o: np.ndarray, psi: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Hessian operator on the Lie algebra:
    L(Omega) = 0.5 * ([O, [Omega, psi]] + [[O, Omega], psi]).

    Accepts Hermitian as well as skew-Hermitian inputs; the output stays in
    the adjoint class of the input.
    """
    return 0.5 * (
        commutator(o, commutator(omega, psi)) + commutator(commutator(o, omega), psi)
    )


def pauli_pairing(word: PauliWord, skew: np.ndarray) -> float:
    """<i P, K> = Re Tr{(iP)^dag K} = -i Tr{P K} for skew-Hermitian K."""
    return float((-1j * np.trace(dense_of(word) @ skew)).real)


def gradient_component(o: np.ndarray, psi: np.ndarray, word: PauliWord) -> float:
    """<i P, [psi, O]> = -i Tr{psi [O, P]} (the unnormalized coefficient)."""
    return pauli_pairing(word, commutator(psi, o))


def hessian_entry(o: np.ndarray, psi: np.ndarray, word_r: PauliWord, word_s: PauliWord) -> float:
    """<i P^r, L(i P^s)> with the 1/2-prefactor operator; equals
    0.5 * (Tr{psi [[P^r, O], P^s]} + Tr{psi [[P^s, O], P^r]})."""
    lhs = dense_of(word_r)
    val = np.trace(lhs @ hessian_apply_tilde(o, psi, dense_of(word_s)))
    return float(val.real)


def _unembed(m: np.ndarray) -> np.ndarray:
    p = m.shape[0] // 2
    return m[:p, :p] + 1j * m[p:, :p]


def exp_skew(omega: np.ndarray) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian matrix via the Hermitian
    eigendecomposition of i * Omega, computed with the Jacobi solver on the
    real symmetric embedding."""
    assert_skew_hermitian(omega)
    h = 1j * omega
    w, v = linalg.jacobi_eig(embed_hermitian(h))
    # exp(-iH) = cos(H) - i sin(H); each real function of H is recovered
    # from the embedding, whose blocks encode real and imaginary parts
    cos_m = _unembed((v * np.cos(w)) @ v.T)
    sin_m = _unembed((v * np.sin(w)) @ v.T)
    return cos_m - 1j * sin_m


def exp_map(omega: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Exponential-map retraction: exp(Omega) U for skew-Hermitian Omega."""
    out = exp_skew(omega) @ u
    assert_unitary(out)
    return out


def word_exponential(word: PauliWord, theta: float) -> np.ndarray:
    """exp(i theta P) = cos(theta) I + i sin(theta) P, exact since P**2 = I."""
    p = dense_of(word)
    return np.cos(theta) * np.eye(p.shape[0]) + 1j * np.sin(theta) * p


def trotter_map(words, coeffs, t: float, u: np.ndarray) -> np.ndarray:
    """Product retraction (prod_j exp(i w_j t P_j)) U.

    Words are supplied in the order they would be applied to a state, i.e.
    the first word is the rightmost factor next to U.
    """
    out = u
    for word, w in zip(words, coeffs):
        out = word_exponential(word, w * t) @ out
    return out
