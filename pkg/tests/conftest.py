import numpy as np
import pytest

from rqcd import PauliSum, StateVector, word_from_index
from rqcd.oracle import exp_skew


def random_state(rng, n_qubits: int) -> StateVector:
    v = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return StateVector(n_qubits, v / np.linalg.norm(v))


def random_pauli_sum(rng, n_qubits: int, n_terms: int = 4) -> PauliSum:
    count = min(n_terms, 4**n_qubits - 1)
    picks = rng.choice(4**n_qubits - 1, size=count, replace=False) + 1
    terms = [(rng.normal(), word_from_index(int(j), n_qubits)) for j in picks]
    return PauliSum(n_qubits, terms)


def random_skew(rng, p: int) -> np.ndarray:
    m = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
    return 0.5 * (m - m.conj().T)


def random_hermitian(rng, p: int) -> np.ndarray:
    m = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
    return 0.5 * (m + m.conj().T)


def random_unitary(rng, p: int) -> np.ndarray:
    u = exp_skew(random_skew(rng, p))
    # polish to machine-exact unitarity (Newton-Schulz toward the polar factor)
    for _ in range(2):
        u = 1.5 * u - 0.5 * (u @ u.conj().T @ u)
    return u


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
