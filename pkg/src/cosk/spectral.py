"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

MAX_SIZE = 64
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues; column ``k`` of ``vectors`` pairs with ``values[k]``."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@njit(cache=True)
def _jacobi_sweeps(A, V, threshold, max_sweeps):
    size = A.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(size):
            for q in range(p + 1, size):
                off = max(off, abs(A[p, q]))
        if off <= threshold:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = A[p, q]
                if abs(apq) <= threshold:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(size):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(size):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(size):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    return -1


def sym_eigen(M, tol: float = 1e-14) -> EigenDecomposition:
    """Eigen-decomposition by cyclic Jacobi rotations.

    Pairs (p, q) are visited row by row each sweep; iteration stops once every
    off-diagonal magnitude is at most ``tol * ||M||_F``. Eigenvalues come back
    ascending; equal values keep their diagonal order.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    size = A.shape[0]
    if size > MAX_SIZE:
        raise ValueError(f"matrix size {size} exceeds {MAX_SIZE}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = float(np.linalg.norm(A))
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    A = np.ascontiguousarray((A + A.T) / 2)
    V = np.eye(size)
    sweeps = _jacobi_sweeps(A, V, tol * scale, MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    values = np.diag(A).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], V[:, order], sweeps)


def sym_eigvals(M, tol: float = 1e-14) -> np.ndarray:
    return sym_eigen(M, tol).values
