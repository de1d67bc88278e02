"""Self-contained dense linear algebra for the d x d Newton systems and the
2**n x 2**n ground-energy eigenproblems.

Cyclic Jacobi with threshold sweeps for symmetric eigenproblems, and an
unpivoted Cholesky for the regularized (hence SPD) Newton solves.  Ample for
orders up to a few hundred; larger problems are out of scope.
"""
from __future__ import annotations

import math

import numpy as np

SYM_TOL = 1e-12


def check_symmetric(a: np.ndarray, tol: float = SYM_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > 0 and np.max(np.abs(a - a.T)) > tol * max(1.0, np.max(np.abs(a))):
        raise ValueError("matrix is not symmetric within tolerance")
    return a


def _off_norm(a: np.ndarray) -> float:
    n = a.shape[0]
    off = a.copy()
    off[np.diag_indices(n)] = 0.0
    return float(np.linalg.norm(off))


def jacobi_eig(
    a: np.ndarray,
    tol: float = 1e-12,
    max_sweeps: int = 60,
    vectors: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    Cyclic-by-row Jacobi rotations; sweeps stop once the off-diagonal
    Frobenius mass drops below tol * ||A||_F.  Small rotations are skipped
    after the first few sweeps when they cannot change the diagonal.
    """
    a = check_symmetric(a)
    n = a.shape[0]
    if n == 0:
        return np.array([]), (np.empty((0, 0)) if vectors else None)
    A = a.copy()
    V = np.eye(n) if vectors else None
    scale = float(np.linalg.norm(A))
    if scale == 0.0:
        w = np.zeros(n)
        return w, V

    converged = False
    for sweep in range(max_sweeps):
        off = _off_norm(A)
        if off <= tol * scale:
            converged = True
            break
        # rotate only above-threshold entries during the first sweeps
        thresh = 0.2 * off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(A[p, p]) + g == abs(A[p, p]) and abs(A[q, q]) + g == abs(A[q, q]):
                    A[p, q] = A[q, p] = 0.0
                    continue
                if abs(apq) <= thresh:
                    continue
                h = A[q, q] - A[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- J^T A J with J = [[c, s], [-s, c]] acting on (p, q).
                # Update the two rows (contiguous), then mirror them into the
                # columns, which symmetry makes valid outside the 2x2 block.
                app, aqq = A[p, p], A[q, q]
                Ap = A[p, :].copy()
                Aq = A[q, :]
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[:, p] = A[p, :]
                A[:, q] = A[q, :]
                cs2 = 2.0 * c * s * apq
                A[p, p] = c * c * app - cs2 + s * s * aqq
                A[q, q] = s * s * app + cs2 + c * c * aqq
                A[p, q] = A[q, p] = 0.0
                if V is not None:
                    Vp = V[:, p].copy()
                    Vq = V[:, q]
                    V[:, p] = c * Vp - s * Vq
                    V[:, q] = s * Vp + c * Vq
    if not converged and _off_norm(A) > tol * scale:
        raise RuntimeError(f"Jacobi failed to converge in {max_sweeps} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if V is not None:
        V = V[:, order]
    return w, V


def min_eigenvalue(a: np.ndarray, tol: float = 1e-12) -> float:
    """Smallest eigenvalue via the Jacobi solver (no eigenvectors)."""
    w, _ = jacobi_eig(a, tol=tol, vectors=False)
    return float(w[0])


def cholesky(a: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = A; raises on a non-positive pivot,
    which signals that the caller regularized incorrectly."""
    a = check_symmetric(a)
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        s = a[j, j] - L[j, :j] @ L[j, :j]
        if s <= 0.0:
            raise np.linalg.LinAlgError(f"non-positive pivot {s:.3e} at column {j}")
        L[j, j] = math.sqrt(s)
        if j + 1 < n:
            L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for symmetric positive definite A by Cholesky."""
    L = cholesky(a)
    b = np.asarray(b, dtype=float)
    n = L.shape[0]
    y = np.empty(n)
    for i in range(n):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - L[i + 1 :, i] @ x[i + 1 :]) / L[i, i]
    return x
