"""N-qubit Pauli words encoded as (x_mask, z_mask) bit pairs.

Qubit ``l`` carries an X factor iff bit ``l`` of ``x_mask`` is set and a Z
factor iff bit ``l`` of ``z_mask`` is set; both bits set means Y, with the
phase convention Y = i X Z.  Basis-state index bit ``l`` is qubit ``l``
throughout the package.

Words are also addressed by an integer index j in [0, 4**n): the base-4
digits of j, least significant digit first, give the per-qubit letters with
I, X, Y, Z <-> 0, 1, 2, 3.  Index 0 is the all-identity word.  The string
form prints letters qubit-0-first, e.g. index 7 on two qubits is "ZX"
(7 = 3 + 1*4: Z on qubit 0, X on qubit 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LETTERS = "IXYZ"

# letter digit -> (x bit, z bit)
_DIGIT_TO_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))
# (x bit, z bit) -> letter digit
_BITS_TO_DIGIT = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}


@dataclass(frozen=True)
class PauliWord:
    """Tensor product of single-qubit I/X/Y/Z factors on ``n_qubits`` qubits."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask uses bits beyond n_qubits")

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def y_count(self) -> int:
        """Number of qubits carrying a Y factor."""
        return (self.x_mask & self.z_mask).bit_count()

    def letter(self, qubit: int) -> str:
        xb = (self.x_mask >> qubit) & 1
        zb = (self.z_mask >> qubit) & 1
        return LETTERS[_BITS_TO_DIGIT[(xb, zb)]]

    def __str__(self) -> str:
        return "".join(self.letter(q) for q in range(self.n_qubits))


def word_from_index(j: int, n_qubits: int) -> PauliWord:
    """Decode the base-4 index ``j`` into a PauliWord."""
    if not 0 <= j < 4**n_qubits:
        raise ValueError(f"index {j} out of range for {n_qubits} qubits")
    x = z = 0
    for q in range(n_qubits):
        xb, zb = _DIGIT_TO_BITS[(j >> (2 * q)) & 3]
        x |= xb << q
        z |= zb << q
    return PauliWord(n_qubits, x, z)


def index_of(word: PauliWord) -> int:
    """Inverse of :func:`word_from_index`."""
    j = 0
    for q in range(word.n_qubits):
        xb = (word.x_mask >> q) & 1
        zb = (word.z_mask >> q) & 1
        j += _BITS_TO_DIGIT[(xb, zb)] << (2 * q)
    return j


def commutes(p: PauliWord, q: PauliWord) -> bool:
    """True iff [P, Q] = 0, via symplectic parity of the masks.

    Two words commute exactly when the number of qubit positions whose
    single-qubit factors anticommute is even.
    """
    if p.n_qubits != q.n_qubits:
        raise ValueError("mismatched qubit counts")
    a = (p.x_mask & q.z_mask).bit_count() & 1
    b = (p.z_mask & q.x_mask).bit_count() & 1
    return a == b


def multiply(p: PauliWord, q: PauliWord) -> tuple[int, PauliWord]:
    """Product P*Q = i**k * R for a PauliWord R; returns (k mod 4, R)."""
    if p.n_qubits != q.n_qubits:
        raise ValueError("mismatched qubit counts")
    x = p.x_mask ^ q.x_mask
    z = p.z_mask ^ q.z_mask
    r = PauliWord(p.n_qubits, x, z)
    # P = i^yp X^xp Z^zp; commuting Z^zp past X^xq gives (-1)^|zp & xq|.
    k = p.y_count + q.y_count - r.y_count + 2 * (p.z_mask & q.x_mask).bit_count()
    return k % 4, r


def sample_subspace(rng: np.random.Generator, n_qubits: int, d: int) -> list[int]:
    """Draw d distinct non-identity word indices, uniformly, sorted ascending.

    The identity word (index 0) is excluded: its gradient component vanishes
    identically and it contributes nothing to any update.
    """
    n_words = 4**n_qubits - 1
    if not 1 <= d <= n_words:
        raise ValueError(f"d={d} out of range [1, {n_words}] for {n_qubits} qubits")
    draw = rng.choice(n_words, size=d, replace=False) + 1
    return sorted(int(j) for j in draw)
