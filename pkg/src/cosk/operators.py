"""Curvature operators of the first and second kind, alpha-positivity, frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .spectral import sym_eigen
from .tensor_core import (
    AlgebraicCurvatureTensor,
    DimensionError,
    SymTwoTensor,
    _as_matrix,
    _pairs,
    lambda2_matrices,
    s20_matrices,
    scalar_curv,
)
from . import model_spaces

POSITIVITY_TOL = 1e-9
# refinement stops at this Riemannian gradient norm (relative); value error ~ its square
GRAD_STOP = 1e-9


def s20_dim(n: int) -> int:
    return (n - 1) * (n + 2) // 2


def r_hat_matrix(R: AlgebraicCurvatureTensor) -> np.ndarray:
    """Matrix of R-hat on two-forms in the lexicographic basis e_i ^ e_j."""
    pairs = _pairs(R.n)
    i = np.array([p[0] for p in pairs])
    j = np.array([p[1] for p in pairs])
    return R.comp[i[:, None], j[:, None], i[None, :], j[None, :]].copy()


def r_ring_pair(R: AlgebraicCurvatureTensor, phi, psi) -> float:
    """R-ring(phi, psi) = sum R_ijkl phi_il psi_jk."""
    a, b = _as_matrix(phi), _as_matrix(psi)
    if a.shape != (R.n, R.n) or b.shape != (R.n, R.n):
        raise DimensionError("two-tensor dimension does not match the curvature tensor")
    return float(np.einsum("ijkl,il,jk->", R.comp, a, b))


def r_ring_gram(R: AlgebraicCurvatureTensor, mats: np.ndarray) -> np.ndarray:
    """Matrix ``R-ring(mats[a], mats[b])`` for a stack of two-tensors."""
    M = np.einsum("ijkl,ail,bjk->ab", R.comp, mats, mats, optimize=True)
    return (M + M.T) / 2


def r_ring_apply(R: AlgebraicCurvatureTensor, phi) -> np.ndarray:
    """R-ring as an endomorphism of S^2(V): (R phi)_jk = sum R_ijkl phi_il."""
    return np.einsum("ijkl,il->jk", R.comp, _as_matrix(phi))


def traceless_part(A: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    return A - np.trace(A, axis1=-2, axis2=-1)[..., None, None] * np.eye(n) / n


def r_ring_s20_matrix(R: AlgebraicCurvatureTensor, check: bool = True) -> np.ndarray:
    """N x N matrix of R-ring restricted to traceless symmetric tensors.

    Assembled from the bilinear form; with ``check`` the operator
    ``pi o R-ring`` is assembled too and required to agree.
    """
    B = s20_matrices(R.n)
    M = r_ring_gram(R, B)
    if check:
        images = traceless_part(np.einsum("ijkl,ail->ajk", R.comp, B))
        P = np.einsum("ajk,bjk->ba", images, B)
        scale = max(R.norm, 1e-300)
        if np.max(np.abs(P - M)) > 1e-11 * scale:
            raise ArithmeticError("bilinear form and projected operator disagree")
    return M


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    n: int
    N: int
    eigs: np.ndarray
    scalar: float
    alpha_max: float | None

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.eigs))) if len(self.eigs) else 0.0


def cosk_spectrum(R: AlgebraicCurvatureTensor) -> SpectrumReport:
    eigs = sym_eigen(r_ring_s20_matrix(R)).values
    eigs.flags.writeable = False
    return SpectrumReport(R.n, s20_dim(R.n), eigs, scalar_curv(R), _max_alpha_from_eigs(eigs))


def _check_alpha(alpha: float, N: int) -> None:
    if not 1 <= alpha <= N:
        raise ValueError(f"alpha={alpha} outside [1, {N}]")


def alpha_sum(eigs, alpha: float) -> float:
    """Sum of the floor(alpha) smallest eigenvalues plus the fractional part of the next.

    ``eigs`` must be sorted ascending.
    """
    eigs = np.asarray(eigs, dtype=float)
    N = len(eigs)
    _check_alpha(alpha, N)
    k = math.floor(alpha)
    total = float(np.sum(eigs[:k]))
    frac = alpha - k
    if frac > 0:
        total += frac * float(eigs[k])
    return total


def _eigs_of(R) -> tuple[np.ndarray, float]:
    if isinstance(R, SpectrumReport):
        return R.eigs, R.scale
    if isinstance(R, AlgebraicCurvatureTensor):
        rep = cosk_spectrum(R)
        return rep.eigs, rep.scale
    eigs = np.asarray(R, dtype=float)
    return eigs, float(np.max(np.abs(eigs)))


def normalized_alpha_sum(R, alpha: float) -> float:
    """alpha_sum after scaling the spectrum to unit sup-norm (0 for the zero tensor)."""
    eigs, scale = _eigs_of(R)
    if scale == 0.0:
        _check_alpha(alpha, len(eigs))
        return 0.0
    return alpha_sum(eigs, alpha) / scale


def is_alpha_nonneg(R, alpha: float, tol: float = POSITIVITY_TOL) -> bool:
    """Accepts a tensor, a :class:`SpectrumReport`, or an ascending eigenvalue list."""
    return normalized_alpha_sum(R, alpha) >= -tol


def is_alpha_positive(R, alpha: float, tol: float = POSITIVITY_TOL) -> bool:
    return normalized_alpha_sum(R, alpha) > tol


def _max_alpha_from_eigs(eigs) -> float | None:
    eigs = np.asarray(eigs, dtype=float)
    N = len(eigs)
    if eigs[0] >= 0:
        return float(N)
    if float(np.sum(eigs)) < 0:
        return None
    # alpha_sum is piecewise linear with kinks at integers; find the piece
    # [k, k+1] where the cumulative sum first becomes nonnegative.
    csum = 0.0
    for k in range(1, N):
        csum += eigs[k - 1]
        nxt = csum + eigs[k]
        if nxt >= 0:
            return k + (-csum) / eigs[k]
    return float(N)


def max_alpha(R) -> float | None:
    """Threshold where alpha_sum turns nonnegative.

    Returns ``N`` when the smallest eigenvalue is already nonnegative and
    ``None`` when even the full sum is negative.
    """
    eigs, _ = _eigs_of(R)
    return _max_alpha_from_eigs(eigs)


def random_orthogonal(rng: np.random.Generator, N: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix."""
    Z = rng.standard_normal((N, N))
    Q, Rr = np.linalg.qr(Z)
    return Q * np.where(np.diag(Rr) < 0, -1.0, 1.0)


def _basis_sum(diag: np.ndarray, alpha: float) -> float:
    k = math.floor(alpha)
    total = float(np.sum(diag[:k]))
    if alpha > k:
        total += (alpha - k) * float(diag[k])
    return total


def min_basis_sums_montecarlo(R: AlgebraicCurvatureTensor, alphas, trials: int = 1000,
                              seed: int = 0, inject_eigenbasis: bool = True) -> np.ndarray:
    """Minimum of the basis-dependent alpha expression over random orthonormal bases.

    Trial ``t`` conjugates the standard basis by a Haar orthogonal matrix drawn
    from seed ``seed + t``; with ``inject_eigenbasis`` trial 0 is the sorted
    eigenbasis instead. Every alpha in ``alphas`` sees the same bases.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    M = r_ring_s20_matrix(R)
    N = M.shape[0]
    alphas = [float(a) for a in np.atleast_1d(alphas)]
    for a in alphas:
        _check_alpha(a, N)
    best = np.full(len(alphas), math.inf)
    for t in range(trials):
        if t == 0 and inject_eigenbasis:
            Q = sym_eigen(M).vectors
        else:
            Q = random_orthogonal(np.random.default_rng(seed + t), N)
        diag = np.einsum("ia,ij,ja->a", Q, M, Q)
        best = np.minimum(best, [_basis_sum(diag, a) for a in alphas])
    return best


def min_basis_sum_montecarlo(R: AlgebraicCurvatureTensor, alpha: float, trials: int = 1000,
                             seed: int = 0, inject_eigenbasis: bool = True) -> float:
    return float(min_basis_sums_montecarlo(R, [alpha], trials, seed, inject_eigenbasis)[0])


def _frame(frame, count: int = 4) -> np.ndarray:
    F = np.asarray(frame, dtype=float)
    if F.ndim != 2 or F.shape[0] != count:
        raise DimensionError(f"expected {count} frame vectors as rows, got shape {F.shape}")
    if F.shape[1] < 4:
        raise DimensionError("four-frames need ambient dimension n >= 4")
    if np.max(np.abs(F @ F.T - np.eye(count))) > 1e-10:
        raise ValueError("frame is not orthonormal")
    return F


def _sym(u, v):
    return np.outer(u, v) + np.outer(v, u)


def phi_frame_matrices(frame) -> np.ndarray:
    """The nine traceless tensors adapted to a four-frame, as a (9, n, n) stack."""
    e1, e2, e3, e4 = _frame(frame)
    r2 = np.sqrt(2.0)
    return np.array([
        (_sym(e1, e1) + _sym(e2, e2) - _sym(e3, e3) - _sym(e4, e4)) / 4,
        _sym(e1, e3) / r2,
        _sym(e1, e4) / r2,
        _sym(e2, e3) / r2,
        _sym(e2, e4) / r2,
        _sym(e1, e2) / r2,
        _sym(e3, e4) / r2,
        (_sym(e1, e1) - _sym(e2, e2)) / (2 * r2),
        (_sym(e3, e3) - _sym(e4, e4)) / (2 * r2),
    ])


def phi_frame_basis(frame) -> list[SymTwoTensor]:
    mats = phi_frame_matrices(frame)
    return [SymTwoTensor((m + m.T) / 2) for m in mats]


_QUAD_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))


def frame_quad_sum(R: AlgebraicCurvatureTensor, frame) -> float:
    """R_1313 + R_1414 + R_2323 + R_2424 in the given four-frame."""
    F = _frame(frame)
    if F.shape[1] != R.n:
        raise DimensionError("frame dimension does not match the tensor")
    return float(_quad_sums(R.comp, F[None])[0])


def _quad_sums(comp: np.ndarray, frames: np.ndarray) -> np.ndarray:
    # frames: (B, 4, n)
    X = frames[:, [0, 0, 1, 1]]
    Y = frames[:, [2, 3, 2, 3]]
    return np.einsum("ijkl,bpi,bpj,bpk,bpl->b", comp, X, Y, X, Y, optimize=True)


@njit(cache=True)
def _quad_value_grad(comp, F):
    # d/dX R(X,Y,X,Y) = 2 R(., Y, X, Y), and the same with X, Y swapped
    n = F.shape[1]
    G = np.zeros_like(F)
    val = 0.0
    for p in range(4):
        a = 0 if p < 2 else 1
        b = 2 + p % 2
        for i in range(n):
            ga = 0.0
            gb = 0.0
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        c = comp[i, j, k, l]
                        ga += c * F[b, j] * F[a, k] * F[b, l]
                        gb += c * F[a, j] * F[b, k] * F[a, l]
            G[a, i] += 2.0 * ga
            G[b, i] += 2.0 * gb
            val += F[a, i] * ga
    return val, G


@njit(cache=True)
def _gram_schmidt_rows(F):
    # equals QR with a positive diagonal; twice for numerical orthogonality
    Q = F.copy()
    for _ in range(2):
        for r in range(Q.shape[0]):
            for s in range(r):
                Q[r] -= (Q[r] @ Q[s]) * Q[s]
            Q[r] /= np.sqrt(Q[r] @ Q[r])
    return Q


@njit(cache=True)
def _refine_frame_kernel(comp, F, steps, scale, grad_stop):
    fval, G = _quad_value_grad(comp, F)
    step = 1e-2 / scale
    for _ in range(steps):
        # Riemannian gradient on the Stiefel manifold (row convention)
        GF = G @ F.T
        xi = G - 0.5 * (GF + GF.T) @ F
        if np.sqrt(np.sum(xi * xi)) < grad_stop * scale:
            break
        moved = False
        while step > 1e-12 / scale:
            trial = _gram_schmidt_rows(F - step * xi)
            tval, tgrad = _quad_value_grad(comp, trial)
            if tval < fval:
                F, fval, G = trial, tval, tgrad
                step *= 2.0
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return F, fval


def orthonormalize_rows(F: np.ndarray) -> np.ndarray:
    Q, Rr = np.linalg.qr(F.T)
    return (Q * np.where(np.diag(Rr) < 0, -1.0, 1.0)).T


def random_frames(rng: np.random.Generator, count: int, n: int, k: int = 4) -> np.ndarray:
    Z = rng.standard_normal((count, n, k))
    Q, Rr = np.linalg.qr(Z)
    signs = np.where(np.diagonal(Rr, axis1=1, axis2=2) < 0, -1.0, 1.0)
    return np.transpose(Q * signs[:, None, :], (0, 2, 1))


def min_frame_quad_sum(R: AlgebraicCurvatureTensor, samples: int = 256, refine_steps: int = 200,
                       seed: int = 0, return_frame: bool = False, starts: int = 8):
    """Upper bound for the minimum four-sectional sum over orthonormal four-frames.

    Gaussian frames are sampled and the ``starts`` lowest are refined by
    projected gradient descent with re-orthonormalization as retraction.
    """
    n = R.n
    if n < 4:
        raise DimensionError("four-frames need n >= 4")
    rng = np.random.default_rng(seed)
    frames = random_frames(rng, max(samples, 1), n)
    vals = _quad_sums(R.comp, frames)
    order = np.argsort(vals, kind="stable")[:max(1, starts)]
    F, fval = frames[order[0]], float(vals[order[0]])
    for s in order:
        G, gval = _refine_frame(R.comp, frames[s], float(vals[s]), refine_steps, R.sup_norm)
        if gval < fval:
            F, fval = G, float(gval)
    return (fval, F) if return_frame else fval


def _refine_frame(comp, F, fval, steps, scale):
    if scale == 0.0 or steps < 1:
        return F, fval
    return _refine_frame_kernel(np.ascontiguousarray(comp), np.ascontiguousarray(F), steps, scale, GRAD_STOP)


def shift_constant_curvature(R: AlgebraicCurvatureTensor, kappa: float) -> AlgebraicCurvatureTensor:
    """R + kappa * (constant curvature tensor); shifts every R-ring eigenvalue by kappa."""
    return R + model_spaces.space_form(R.n, kappa)
