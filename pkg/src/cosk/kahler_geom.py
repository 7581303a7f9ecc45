"""Kaehler curvature tensors: J-invariance, bisectional curvature, sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .model_spaces import ComplexStructure, fubini_study, standard_complex_structure
from .operators import GRAD_STOP, cosk_spectrum, normalized_alpha_sum
from .tensor_core import (
    AlgebraicCurvatureTensor,
    DimensionError,
    bianchi_defect,
    bianchi_project,
    random_act,
)

J_TOL = 1e-9
PAIR_TOL = 1e-10
SAMPLE_TOL = 1e-14


class InfeasibleShiftError(RuntimeError):
    """The Fubini-Study shift cannot reach six-nonnegativity."""


def _j_matrix(J) -> np.ndarray:
    return J.J if isinstance(J, ComplexStructure) else np.asarray(J, dtype=float)


def _rotate_last_pair(comp: np.ndarray, J: np.ndarray) -> np.ndarray:
    # R(X, Y, JZ, JW) in components
    return np.einsum("ijab,ak,bl->ijkl", comp, J, J)


def _rotate_first_pair(comp: np.ndarray, J: np.ndarray) -> np.ndarray:
    return np.einsum("abkl,ai,bj->ijkl", comp, J, J)


def j_invariance_defect(R: AlgebraicCurvatureTensor, J) -> float:
    """max |R_ijkl - R(e_i, e_j, J e_k, J e_l)|."""
    Jm = _j_matrix(J)
    if Jm.shape != (R.n, R.n):
        raise DimensionError("complex structure and tensor differ in dimension")
    return float(np.max(np.abs(R.comp - _rotate_last_pair(R.comp, Jm))))


@dataclass(frozen=True, eq=False)
class KahlerStructure:
    R: AlgebraicCurvatureTensor
    J: ComplexStructure
    j_defect: float

    @classmethod
    def build(cls, R: AlgebraicCurvatureTensor, J: ComplexStructure,
              j_tol: float = J_TOL) -> "KahlerStructure":
        if J.n != R.n:
            raise DimensionError("complex structure and tensor differ in dimension")
        defect = j_invariance_defect(R, J)
        if defect > j_tol * R.sup_norm:
            raise ValueError(f"tensor is not J-invariant: defect {defect:.3e}")
        return cls(R, J, defect)


def project_j_invariant(R: AlgebraicCurvatureTensor, J) -> AlgebraicCurvatureTensor:
    """Average over J acting on neither, one, or both slot pairs."""
    Jm = _j_matrix(J)
    c = R.comp
    last = _rotate_last_pair(c, Jm)
    both = _rotate_first_pair(last, Jm)
    return AlgebraicCurvatureTensor(R.n, (c + last + _rotate_first_pair(c, Jm) + both) / 4.0)


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    R: AlgebraicCurvatureTensor
    iterations: int
    j_defect: float
    bianchi_defect: float


def project_kahler(R: AlgebraicCurvatureTensor, J, tol: float = 1e-12, max_iter: int = 500,
                   full: bool = False):
    """Alternating projections onto J-invariant and Bianchi tensors.

    Stops when successive iterates differ by at most ``tol * ||R||_inf``.
    Raises ``RuntimeError`` if ``max_iter`` is exhausted.
    """
    cur = R
    scale = max(R.sup_norm, 1e-300)
    for it in range(1, max_iter + 1):
        nxt = bianchi_project(project_j_invariant(cur, J))
        step = float(np.max(np.abs(nxt.comp - cur.comp)))
        cur = nxt
        if step <= tol * scale:
            break
    else:
        raise RuntimeError(
            f"project_kahler did not converge in {max_iter} iterations "
            f"(j_defect {j_invariance_defect(cur, J):.3e}, bianchi_defect {bianchi_defect(cur):.3e})")
    if full:
        return ProjectionResult(cur, it, j_invariance_defect(cur, J), bianchi_defect(cur))
    return cur


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError("expected a unit vector")
    return v


def bisectional(K: KahlerStructure, X, Y) -> float:
    """R(X, JX, Y, JY)."""
    X, Y = _unit(X), _unit(Y)
    J = K.J.J
    return K.R.evaluate(X, J @ X, Y, J @ Y)


def is_orthogonal_pair(J, X, Y, tol: float = PAIR_TOL) -> bool:
    Jm = _j_matrix(J)
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    return abs(X @ Y) <= tol and abs(X @ (Jm @ Y)) <= tol


def complete_pair(J, X, Y) -> tuple[np.ndarray, np.ndarray]:
    """Normalize X and push Y into the orthogonal complement of span{X, JX}."""
    Jm = _j_matrix(J)
    X = X / np.linalg.norm(X)
    JX = Jm @ X
    Y = Y - (Y @ X) * X - (Y @ JX) * JX
    Y = Y / np.linalg.norm(Y)
    return X, Y


def four_sectional_sum(R: AlgebraicCurvatureTensor, J, X, Y) -> float:
    """R(X,Y,X,Y) + R(JX,Y,JX,Y) + R(X,JY,X,JY) + R(JX,JY,JX,JY)."""
    Jm = _j_matrix(J)
    JX, JY = Jm @ X, Jm @ Y
    return sum(R.evaluate(a, b, a, b) for a, b in ((X, Y), (JX, Y), (X, JY), (JX, JY)))


def four_sectional_identity_defect(K: KahlerStructure, X, Y) -> float:
    """|2 R(X,JX,Y,JY) - four-term sectional sum| for an orthogonal pair."""
    if not is_orthogonal_pair(K.J, X, Y):
        raise ValueError("X, Y violate <X,Y> = <X,JY> = 0")
    return abs(2.0 * bisectional(K, X, Y) - four_sectional_sum(K.R, K.J, X, Y))


def _bisectional_kernel(R: AlgebraicCurvatureTensor, J: np.ndarray) -> np.ndarray:
    # K[a, e, c, f] with R(X, JX, Y, JY) = K(X, X, Y, Y)
    return np.einsum("abcd,be,df->aecf", R.comp, J, J)


def random_orthogonal_pairs(rng: np.random.Generator, J: np.ndarray, count: int):
    n = J.shape[0]
    X = rng.standard_normal((count, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    JX = X @ J.T
    Y = rng.standard_normal((count, n))
    Y -= np.sum(Y * X, axis=1, keepdims=True) * X + np.sum(Y * JX, axis=1, keepdims=True) * JX
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    return X, Y


@njit(cache=True)
def _pair_value_grads(K2, x, y):
    n = x.shape[0]
    xx = np.empty(n * n)
    yy = np.empty(n * n)
    for i in range(n):
        for j in range(n):
            xx[i * n + j] = x[i] * x[j]
            yy[i * n + j] = y[i] * y[j]
    Ay = (K2 @ yy).reshape(n, n)
    Ax = (xx @ K2).reshape(n, n)
    val = xx @ (K2 @ yy)
    return val, (Ay + Ay.T) @ x, (Ax + Ax.T) @ y


@njit(cache=True)
def _complete_pair_kernel(J, x, y):
    x = x / np.sqrt(x @ x)
    Jx = J @ x
    y = y - (y @ x) * x - (y @ Jx) * Jx
    return x, y / np.sqrt(y @ y)


@njit(cache=True)
def _refine_pair_kernel(K2, J, x, y, steps, scale, grad_stop):
    # projected gradient descent; the step doubles on success and halves on failure
    val, gx, gy = _pair_value_grads(K2, x, y)
    step = 1e-2 / scale
    for _ in range(steps):
        # normals of the pair manifold: (x, 0), (0, y), (y, x), (Jy, -Jx), mutually orthogonal
        Jx = J @ x
        Jy = J @ y
        gx = gx - (gx @ x) * x
        gy = gy - (gy @ y) * y
        c3 = 0.5 * (gx @ y + gy @ x)
        c4 = 0.5 * (gx @ Jy - gy @ Jx)
        gx = gx - c3 * y - c4 * Jy
        gy = gy - c3 * x + c4 * Jx
        if np.sqrt(gx @ gx + gy @ gy) < grad_stop * scale:
            break
        moved = False
        while step > 1e-12 / scale:
            tx, ty = _complete_pair_kernel(J, x - step * gx, y - step * gy)
            tval, tgx, tgy = _pair_value_grads(K2, tx, ty)
            if tval < val:
                x, y, val, gx, gy = tx, ty, tval, tgx, tgy
                step *= 2.0
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return val, x, y


def min_orth_bisectional(K: KahlerStructure, samples: int = 256, refine_steps: int = 200,
                         seed: int = 0, return_pair: bool = False, starts: int = 32):
    """Sampled-and-refined upper bound on the minimal orthogonal bisectional curvature.

    The ``starts`` lowest samples are each refined by projected gradient descent.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = K.R.n
    if n < 4:
        raise DimensionError("orthogonal pairs need complex dimension >= 2")
    J = K.J.J
    K2 = np.ascontiguousarray(_bisectional_kernel(K.R, J).reshape(n * n, n * n))
    J = np.ascontiguousarray(J, dtype=float)
    rng = np.random.default_rng(seed)
    X, Y = random_orthogonal_pairs(rng, J, samples)
    XX = (X[:, :, None] * X[:, None, :]).reshape(samples, -1)
    YY = (Y[:, :, None] * Y[:, None, :]).reshape(samples, -1)
    vals = np.einsum("si,ij,sj->s", XX, K2, YY, optimize=True)
    order = np.argsort(vals, kind="stable")[:max(1, starts)]
    b = int(order[0])
    best = (float(vals[b]), X[b], Y[b])
    scale = K.R.sup_norm
    if scale > 0 and refine_steps > 0:
        for s in order:
            val, x, y = _refine_pair_kernel(K2, J, X[s].copy(), Y[s].copy(), refine_steps, scale, GRAD_STOP)
            if val < best[0]:
                best = (float(val), x, y)
    val, x, y = best
    return (val, x, y) if return_pair else val


def random_kahler_act(m: int, seed, ensure_six_nonneg: bool = False,
                      delta: float = 1e-9) -> KahlerStructure:
    """Random Kaehler curvature tensor for the standard complex structure.

    With ``ensure_six_nonneg`` a multiple ``t`` of the unit Fubini-Study
    tensor is added, with ``t`` grown geometrically until the normalized
    six-sum is at least ``delta`` and then bisected towards the minimal value.
    """
    if m < 2:
        raise DimensionError("m >= 2 required")
    J = standard_complex_structure(m)
    # tighter than the projection default: the bisectional identities are checked at 1e-12
    R = project_kahler(random_act(2 * m, seed), J, tol=SAMPLE_TOL)
    if ensure_six_nonneg:
        R = _six_nonneg_shift(R, m, delta)
    return KahlerStructure.build(R, J)


def _six_nonneg_shift(R, m, delta, bisect_steps: int = 40):
    F, _ = fubini_study(m, 1.0)

    def ok(t):
        return normalized_alpha_sum(cosk_spectrum(R + t * F), 6) >= delta

    if ok(0.0):
        return R
    hi = max(R.sup_norm, 1e-300)
    lo = 0.0
    for _ in range(60):
        if ok(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise InfeasibleShiftError(
            f"no multiple of the Fubini-Study tensor makes this m={m} sample six-nonnegative "
            f"(six-sum of FS(m,1) is {normalized_alpha_sum(cosk_spectrum(F), 6):.3f} after normalization)")
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-9 * hi:
            break
    return R + hi * F
