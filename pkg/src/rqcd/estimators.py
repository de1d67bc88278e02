"""Gradient and curvature estimation from expectation values alone, via
parameter-shift rules.

For a word P with P**2 = I and the single-parameter circuit
g(x) = <psi| U(x)^dag O U(x) |psi> with U(x) = exp(i x P / 2):

* unnormalized gradient component:      g(-pi/2) - g(pi/2)
* diagonal curvature (no extra evals):  2 * [g(pi/2) + g(-pi/2) - 2 f]

Off-diagonal curvature entries use the four-point rule on the two-parameter
circuit g(x, y) with the inner gate exp(i x P^s / 2) applied before the
outer gate exp(i y P^r / 2):

    D(g) = g(pi/2, pi/2) - g(pi/2, -pi/2) - g(-pi/2, pi/2) + g(-pi/2, -pi/2)

giving the entry D(g^{rs}) when the words commute (4 evaluations) and the
average of D(g^{rs}) and D(g^{sr}) otherwise (8 evaluations).  Expectations
are exact statevector values, so the only estimation error is floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import PauliSum
from .pauli import PauliWord, commutes, word_from_index
from .statevector import StateVector, apply_pauli_rotation, expectation

_SQRT_HALF = np.sqrt(0.5)
_PAIR_CHUNK = 4096
# single-slot reuse of pair tables: repeated subspaces (always the case for
# full-subspace runs) skip the rebuild, random draws evict the previous entry
_PAIR_CACHE: list = [None, None]  # [key, tables]
_PAIR_CACHE_MAX_ENTRIES = 4_000_000


def eval_shifted(state: StateVector, op: PauliSum, word: PauliWord, x: float) -> float:
    """g(x) = expectation of O after exp(i x P / 2); does not mutate psi."""
    return expectation(op, apply_pauli_rotation(word, x / 2.0, state))


def eval_shifted2(
    state: StateVector,
    op: PauliSum,
    inner: PauliWord,
    outer: PauliWord,
    x: float,
    y: float,
) -> float:
    """g(x, y) for the two-parameter circuit: inner gate first, outer second."""
    shifted = apply_pauli_rotation(inner, x / 2.0, state)
    shifted = apply_pauli_rotation(outer, y / 2.0, shifted)
    return expectation(op, shifted)


def grad_component(state: StateVector, op: PauliSum, word: PauliWord) -> float:
    """Unnormalized component g(-pi/2) - g(pi/2); equals <iP, [psi, O]>.

    Divide by 2**n for the gradient-projection coefficient.  The identity
    word yields 0 (its rotations are global phases).
    """
    g_plus = eval_shifted(state, op, word, np.pi / 2)
    g_minus = eval_shifted(state, op, word, -np.pi / 2)
    return g_minus - g_plus


def hess_diag(f: float, g_plus: float, g_minus: float) -> float:
    """Diagonal curvature 2 * [g(pi/2) + g(-pi/2) - 2 f]; pure arithmetic on
    values already paid for by the gradient estimate."""
    return 2.0 * (g_plus + g_minus - 2.0 * f)


def _four_point(state, op, inner, outer) -> float:
    half = np.pi / 2
    return (
        eval_shifted2(state, op, inner, outer, half, half)
        - eval_shifted2(state, op, inner, outer, half, -half)
        - eval_shifted2(state, op, inner, outer, -half, half)
        + eval_shifted2(state, op, inner, outer, -half, -half)
    )


def hess_offdiag(
    state: StateVector, op: PauliSum, word_r: PauliWord, word_s: PauliWord
) -> float:
    """Curvature matrix entry for the pair (r, s); symmetric in its arguments.

    4 circuit evaluations when the words commute, 8 otherwise.
    """
    if commutes(word_r, word_s):
        return _four_point(state, op, inner=word_s, outer=word_r)
    forward = _four_point(state, op, inner=word_s, outer=word_r)
    swapped = _four_point(state, op, inner=word_r, outer=word_s)
    return 0.5 * (forward + swapped)


@dataclass
class SubspaceSample:
    """Sampled directions with their estimated gradient vector and curvature
    matrix, plus the shifted values they were computed from."""

    indices: tuple[int, ...]
    words: tuple[PauliWord, ...]
    f: float
    grad: np.ndarray
    hess: np.ndarray
    shifted: dict[int, tuple[float, float]] = field(repr=False)  # j -> (g+, g-)
    n_evals: int = 0


def _word_masks(words) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xs = np.array([w.x_mask for w in words], dtype=np.int64)
    zs = np.array([w.z_mask for w in words], dtype=np.int64)
    ny = np.array([w.y_count for w in words], dtype=np.int64)
    return xs, zs, ny


def _parity(v: np.ndarray) -> np.ndarray:
    v = v ^ (v >> 16)
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    return v & 1


_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)


def _batch_word_tables(xs, zs, ny, dim) -> tuple[np.ndarray, np.ndarray]:
    """Gather tables (src, phase) for a batch of words given by mask arrays."""
    idx = np.arange(dim, dtype=np.int64)
    src = idx[None, :] ^ xs[:, None]
    signs = 1.0 - 2.0 * _parity(src & zs[:, None])
    phases = _I_POW[ny % 4][:, None] * signs
    return src, phases


def _expectations(states: np.ndarray, op_dense: np.ndarray) -> np.ndarray:
    """Real expectations for a stack of (unnormalized scaling-safe) states."""
    acted = states @ op_dense.T
    return np.einsum("...d,...d->...", states.conj(), acted).real


def _pair_tables(indices, words, dim):
    """Per-pair product tables and commutation mask for the upper triangle."""
    key = (dim, tuple(indices))
    if _PAIR_CACHE[0] == key:
        return _PAIR_CACHE[1]

    d = len(words)
    xs, zs, ny = _word_masks(words)
    ra, sa = np.triu_indices(d, k=1)
    # commutation via symplectic parity
    anti = (
        _parity(xs[ra] & zs[sa]) ^ _parity(zs[ra] & xs[sa])
    ).astype(bool)
    # product word P_r P_s = i^kappa P_u
    xu = xs[ra] ^ xs[sa]
    zu = zs[ra] ^ zs[sa]
    ny_u = np.bitwise_count(xu & zu).astype(np.int64)
    swap = np.bitwise_count(zs[ra] & xs[sa]).astype(np.int64)
    kappa = (ny[ra] + ny[sa] - ny_u + 2 * swap) % 4
    src_u, ph_u = _batch_word_tables(xu, zu, ny_u, dim)
    ph_u = ph_u * _I_POW[kappa][:, None]  # fold in the product phase

    tables = (ra, sa, anti, src_u, ph_u)
    if src_u.size <= _PAIR_CACHE_MAX_ENTRIES:
        _PAIR_CACHE[0], _PAIR_CACHE[1] = key, tables
    return tables


_SIGNS = np.array(
    [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
)  # (sigma_x, sigma_y) orderings for the four-point rule


def _four_point_batch(psi, op_dense, w_inner, w_outer, v_prod):
    """D(g) for a batch of pairs.

    The shifted two-parameter state at (sx*pi/2, sy*pi/2) expands exactly to
    (psi + i*sx*P_inner psi + i*sy*P_outer psi - sx*sy*P_outer P_inner psi)/2
    because rotations at pi/4 have cos = sin = sqrt(1/2).
    """
    sx = _SIGNS[:, 0][None, :, None]
    sy = _SIGNS[:, 1][None, :, None]
    chi = 0.5 * (
        psi[None, None, :]
        + 1j * sx * w_inner[:, None, :]
        + 1j * sy * w_outer[:, None, :]
        - (sx * sy) * v_prod[:, None, :]
    )
    e = _expectations(chi, op_dense)  # (npairs, 4)
    return e[:, 0] - e[:, 1] - e[:, 2] + e[:, 3]


def assemble_sample(
    state: StateVector,
    op: PauliSum,
    indices,
    f: float | None = None,
) -> SubspaceSample:
    """Estimate the gradient vector and full curvature matrix on a sampled
    index set, tracking the circuit-evaluation count.

    Gradient: 2 evaluations per direction.  Diagonal entries reuse those
    values.  Off-diagonal entries cost 4 evaluations for commuting pairs and
    8 for anticommuting ones.
    """
    indices = tuple(int(j) for j in indices)
    if len(set(indices)) != len(indices):
        raise ValueError("sampled indices must be distinct")
    n = state.n_qubits
    words = tuple(word_from_index(j, n) for j in indices)
    if any(w.is_identity for w in words):
        raise ValueError("identity word is not a valid sampled direction")
    psi = state.amplitudes
    op_dense = op.dense_matrix() if n <= 7 else None
    if op_dense is None:
        raise ValueError("subspace assembly budget is 7 qubits")
    if f is None:
        f = float(np.vdot(psi, op_dense @ psi).real)

    d = len(words)
    dim = psi.size
    xs, zs, ny = _word_masks(words)
    src_w, ph_w = _batch_word_tables(xs, zs, ny, dim)
    w_vecs = psi[src_w] * ph_w  # P_j psi, one row per sampled word

    # gradient: single-shift states (psi +/- i P psi) / sqrt(2)
    plus = _SQRT_HALF * (psi[None, :] + 1j * w_vecs)
    minus = _SQRT_HALF * (psi[None, :] - 1j * w_vecs)
    g_plus = _expectations(plus, op_dense)
    g_minus = _expectations(minus, op_dense)
    grad = g_minus - g_plus
    n_evals = 2 * d

    hess = np.zeros((d, d))
    hess[np.diag_indices(d)] = 2.0 * (g_plus + g_minus - 2.0 * f)

    if d > 1:
        ra, sa, anti, src_u, ph_u = _pair_tables(indices, words, dim)
        n_pairs = ra.size
        for lo in range(0, n_pairs, _PAIR_CHUNK):
            hi = min(lo + _PAIR_CHUNK, n_pairs)
            r_c, s_c = ra[lo:hi], sa[lo:hi]
            v = psi[src_u[lo:hi]] * ph_u[lo:hi]  # P_r P_s psi
            delta = _four_point_batch(psi, op_dense, w_vecs[s_c], w_vecs[r_c], v)
            anti_c = anti[lo:hi]
            if anti_c.any():
                # swapped order: P_s P_r psi = -P_r P_s psi for these pairs
                aw = np.where(anti_c)[0]
                delta_swap = _four_point_batch(
                    psi, op_dense, w_vecs[r_c[aw]], w_vecs[s_c[aw]], -v[aw]
                )
                delta[aw] = 0.5 * (delta[aw] + delta_swap)
            hess[r_c, s_c] = delta
            hess[s_c, r_c] = delta
            n_evals += int(4 * (hi - lo) + 4 * anti_c.sum())

    shifted = {j: (float(gp), float(gm)) for j, gp, gm in zip(indices, g_plus, g_minus)}
    return SubspaceSample(
        indices=indices,
        words=words,
        f=float(f),
        grad=grad,
        hess=hess,
        shifted=shifted,
        n_evals=n_evals,
    )


def gradient_only(
    state: StateVector, op: PauliSum, indices
) -> tuple[np.ndarray, dict[int, tuple[float, float]], int]:
    """Gradient components for a sampled index set: 2 evaluations each.

    Returns (components, shifted-value cache, evaluation count).
    """
    indices = tuple(int(j) for j in indices)
    n = state.n_qubits
    words = [word_from_index(j, n) for j in indices]
    psi = state.amplitudes
    op_dense = op.dense_matrix()
    xs, zs, ny = _word_masks(words)
    src_w, ph_w = _batch_word_tables(xs, zs, ny, psi.size)
    w_vecs = psi[src_w] * ph_w
    plus = _SQRT_HALF * (psi[None, :] + 1j * w_vecs)
    minus = _SQRT_HALF * (psi[None, :] - 1j * w_vecs)
    g_plus = _expectations(plus, op_dense)
    g_minus = _expectations(minus, op_dense)
    shifted = {j: (float(gp), float(gm)) for j, gp, gm in zip(indices, g_plus, g_minus)}
    return g_minus - g_plus, shifted, 2 * len(indices)
