"""Pauli-sum observables, the periodic Heisenberg XXZ chain, and exact
ground-state energies for the error metric."""
from __future__ import annotations

import numpy as np

from . import linalg
from .pauli import PauliWord, index_of, word_from_index
from .statevector import apply_word_raw, word_action

_DENSE_CACHE_MAX_QUBITS = 7  # cache the 2**n operator matrix up to 128 x 128


class PauliSum:
    """Real-weighted sum of Pauli words on a fixed qubit count.

    Duplicate words are merged and exact-zero coefficients dropped on
    construction; terms are kept sorted by word index, so equal operators
    built from reordered inputs compare and evaluate identically.  Identity
    terms are rejected unless explicitly permitted.
    """

    __slots__ = ("n_qubits", "terms", "_dense")

    def __init__(self, n_qubits: int, terms, allow_identity: bool = False):
        merged: dict[int, tuple[float, PauliWord]] = {}
        for coeff, word in terms:
            coeff = float(coeff)
            if word.n_qubits != n_qubits:
                raise ValueError("term qubit count does not match operator")
            if word.is_identity and not allow_identity:
                raise ValueError("identity term not permitted")
            j = index_of(word)
            if j in merged:
                merged[j] = (merged[j][0] + coeff, word)
            else:
                merged[j] = (coeff, word)
        self.n_qubits = n_qubits
        self.terms = tuple(
            (c, w) for _, (c, w) in sorted(merged.items()) if c != 0.0
        )
        self._dense = None

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient_bound(self) -> float:
        """Sum of |coefficients|, an operator-norm bound."""
        return float(sum(abs(c) for c, _ in self.terms))

    def dense_matrix(self) -> np.ndarray:
        """2**n x 2**n matrix assembled from the simulator's word action.

        (P psi)[b] = phases[b] * psi[src[b]] means P has entry phases[b] at
        row b, column src[b].
        """
        if self._dense is None:
            dim = 1 << self.n_qubits
            rows = np.arange(dim)
            out = np.zeros((dim, dim), dtype=complex)
            for coeff, word in self.terms:
                src, phases = word_action(word)
                out[rows, src] += coeff * phases
            self._dense = out
        return self._dense

    def apply_vec(self, amps: np.ndarray) -> np.ndarray:
        """O |psi>; uses the cached dense matrix on small systems."""
        if self.n_qubits <= _DENSE_CACHE_MAX_QUBITS:
            return self.dense_matrix() @ amps
        out = np.zeros_like(amps)
        for coeff, word in self.terms:
            out += coeff * apply_word_raw(amps, word)
        return out

    def dump(self) -> str:
        """One 'coefficient<TAB>word' line per term."""
        return "\n".join(f"{coeff!r}\t{word}" for coeff, word in self.terms)


def _two_site_word(n_qubits: int, letter: str, i: int, k: int) -> PauliWord:
    digit = {"X": 1, "Y": 2, "Z": 3}[letter]
    return word_from_index(digit * 4**i + digit * 4**k, n_qubits)


def build_xxz(n_qubits: int, delta: float) -> PauliSum:
    """Periodic Heisenberg XXZ chain:
    sum_i X_i X_{i+1} + sum_i Y_i Y_{i+1} + delta * sum_i Z_i Z_{i+1},
    site indices mod n (site n+1 is site 1).  On two qubits both periodic
    bonds coincide, so each word carries twice the coefficient.
    """
    if n_qubits < 2:
        raise ValueError("XXZ chain needs at least 2 qubits")
    terms = []
    for i in range(n_qubits):
        k = (i + 1) % n_qubits
        terms.append((1.0, _two_site_word(n_qubits, "X", i, k)))
        terms.append((1.0, _two_site_word(n_qubits, "Y", i, k)))
        terms.append((delta, _two_site_word(n_qubits, "Z", i, k)))
    return PauliSum(n_qubits, terms)


def embed_hermitian(h: np.ndarray) -> np.ndarray:
    """Real symmetric embedding [[A, -B], [B, A]] of H = A + iB.

    Every eigenvalue of H appears twice in the embedding.
    """
    a, b = h.real, h.imag
    return np.block([[a, -b], [b, a]])


def spectrum(op: PauliSum, tol: float = 1e-12) -> np.ndarray:
    """All eigenvalues of O (each once, ascending), by dense diagonalization."""
    if op.n_qubits > 8:
        raise ValueError("dense diagonalization budget is 8 qubits")
    w, _ = linalg.jacobi_eig(embed_hermitian(op.dense_matrix()), tol=tol, vectors=False)
    return w[::2]


def ground_energy(op: PauliSum) -> float:
    """Smallest eigenvalue of the dense matrix of O."""
    return float(spectrum(op)[0])
