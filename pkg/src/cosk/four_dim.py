"""Dimension four: Hodge star, self-dual/anti-self-dual splitting, block normal forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .kahler_geom import KahlerStructure
from .operators import r_hat_matrix, r_ring_gram
from .spectral import sym_eigen
from .tensor_core import AlgebraicCurvatureTensor, DimensionError, _pairs, ricci_matrix, scalar_curv

_PAIRS4 = _pairs(4)


def _require4(R: AlgebraicCurvatureTensor) -> None:
    if R.n != 4:
        raise DimensionError(f"this operation needs n = 4, got n = {R.n}")


def _check_orientation(orientation: int) -> int:
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    return orientation


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4,) * 4)
    for p in itertools.permutations(range(4)):
        inv = sum(p[a] > p[b] for a in range(4) for b in range(a + 1, 4))
        eps[p] = -1.0 if inv % 2 else 1.0
    return eps


_EPS = _levi_civita()


def hodge_star_matrix(orientation: int = 1) -> np.ndarray:
    """Hodge star on two-forms in the lexicographic basis e_i ^ e_j.

    ``orientation=1`` is e_1 ^ e_2 ^ e_3 ^ e_4.
    """
    o = _check_orientation(orientation)
    S = np.zeros((6, 6))
    for a, (i, j) in enumerate(_PAIRS4):
        for c, (k, l) in enumerate(_PAIRS4):
            S[c, a] = o * _EPS[i, j, k, l]
    return S


# (sigma, tau) completing e_1 ^ e_{a+1} to the volume form, 0-based
_COMPLEMENT = ((1, (2, 3)), (2, (3, 1)), (3, (1, 2)))


def _two_form(i: int, j: int) -> np.ndarray:
    m = np.zeros((4, 4))
    m[i, j], m[j, i] = 1.0, -1.0
    return m


def lambda_pm_bases(orientation: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Unit self-dual and anti-self-dual forms as two (3, 4, 4) skew stacks.

    ``w_a^+- = (e_1 ^ e_{a+1} +- e_s ^ e_t) / sqrt 2`` for the chosen orientation.
    """
    o = _check_orientation(orientation)
    plus, minus = [], []
    for b, (s, t) in _COMPLEMENT:
        x, y = _two_form(0, b), _two_form(s, t)
        plus.append((x + o * y) / np.sqrt(2.0))
        minus.append((x - o * y) / np.sqrt(2.0))
    return np.array(plus), np.array(minus)


def form_coordinates(forms: np.ndarray) -> np.ndarray:
    """Coordinates of two-forms in the lexicographic basis (columns)."""
    forms = np.asarray(forms)
    return np.array([[f[i, j] for f in forms] for i, j in _PAIRS4])


def _pm_frame(orientation: int) -> np.ndarray:
    plus, minus = lambda_pm_bases(orientation)
    return form_coordinates(np.concatenate([plus, minus]))


def r_hat_blocks(R: AlgebraicCurvatureTensor, orientation: int = 1):
    """R-hat in the (Lambda^+, Lambda^-) basis as ``(A_plus, B, A_minus)``.

    ``A_plus`` and ``A_minus`` are ``S/12 I + W^+-``; ``B`` is the traceless-Ricci block.
    """
    _require4(R)
    P = _pm_frame(orientation)
    M = P.T @ r_hat_matrix(R) @ P
    M = (M + M.T) / 2
    return M[:3, :3], M[:3, 3:], M[3:, 3:]


def reassemble_r_hat(A_plus, B, A_minus, orientation: int = 1) -> np.ndarray:
    P = _pm_frame(orientation)
    M = np.block([[A_plus, B], [B.T, A_minus]])
    return P @ M @ P.T


@dataclass(frozen=True, eq=False)
class WeylSpectra:
    """Eigenvalues of W^+ (``lam``) and W^- (``mu``), both descending, with unit eigenforms."""

    lam: np.ndarray
    mu: np.ndarray
    plus_forms: np.ndarray
    minus_forms: np.ndarray
    scalar: float


def w_pm_eigen(R: AlgebraicCurvatureTensor, orientation: int = 1) -> WeylSpectra:
    _require4(R)
    S = scalar_curv(R)
    A_plus, _, A_minus = r_hat_blocks(R, orientation)
    plus, minus = lambda_pm_bases(orientation)
    out = []
    for A, base in ((A_plus, plus), (A_minus, minus)):
        ed = sym_eigen(A - (S / 12.0) * np.eye(3))
        vals = ed.values[::-1].copy()
        vecs = ed.vectors[:, ::-1]
        forms = np.einsum("ia,ijk->ajk", vecs, base)
        out.append((vals, forms))
    (lam, pf), (mu, mf) = out
    return WeylSpectra(lam, mu, pf, mf, S)


def cgt_basis(R: AlgebraicCurvatureTensor, orientation: int = 1, spectra: WeylSpectra | None = None) -> np.ndarray:
    """Nine products ``w_a^+ w_b^-`` of unit Weyl eigenforms, index ``3a + b``."""
    ws = spectra if spectra is not None else w_pm_eigen(R, orientation)
    basis = np.einsum("aij,bjk->abik", ws.plus_forms, ws.minus_forms).reshape(9, 4, 4)
    basis = (basis + np.transpose(basis, (0, 2, 1))) / 2
    gram = np.einsum("aij,bij->ab", basis, basis)
    if np.max(np.abs(gram - np.eye(9))) > 1e-12:
        raise ArithmeticError("products of self-dual and anti-self-dual forms are not orthonormal")
    if np.max(np.abs(np.trace(basis, axis1=1, axis2=2))) > 1e-12:
        raise ArithmeticError("products of self-dual and anti-self-dual forms are not traceless")
    return basis


@dataclass(frozen=True, eq=False)
class CgtBlocks:
    basis: np.ndarray
    matrix: np.ndarray
    D: tuple[np.ndarray, np.ndarray, np.ndarray]
    O: tuple[np.ndarray, np.ndarray, np.ndarray]
    lam: np.ndarray
    mu: np.ndarray
    scalar: float
    d_defect: float
    o_skew_defect: float
    o_norm: float

    def predicted_diagonal(self) -> np.ndarray:
        """-(lam_a + mu_b) + S/12 laid out as a 3 x 3 array."""
        return -(self.lam[:, None] + self.mu[None, :]) + self.scalar / 12.0


def cgt_blocks(R: AlgebraicCurvatureTensor, orientation: int = 1) -> CgtBlocks:
    _require4(R)
    ws = w_pm_eigen(R, orientation)
    basis = cgt_basis(R, orientation, ws)
    M = r_ring_gram(R, basis)
    D = tuple(M[3 * a:3 * a + 3, 3 * a:3 * a + 3].copy() for a in range(3))
    O = (M[0:3, 3:6].copy(), M[0:3, 6:9].copy(), M[3:6, 6:9].copy())
    pred = -(ws.lam[:, None] + ws.mu[None, :]) + ws.scalar / 12.0
    d_defect = max(float(np.max(np.abs(D[a] - np.diag(pred[a])))) for a in range(3))
    o_skew = max(float(np.max(np.abs(o + o.T))) for o in O)
    o_norm = max(float(np.max(np.abs(o))) for o in O)
    return CgtBlocks(basis, M, D, O, ws.lam, ws.mu, ws.scalar, d_defect, o_skew, o_norm)


def einstein_defect(R: AlgebraicCurvatureTensor) -> float:
    """Largest entry of the traceless Ricci tensor."""
    ric = ricci_matrix(R)
    ric0 = ric - np.trace(ric) / R.n * np.eye(R.n)
    return float(np.max(np.abs(ric0)))


def is_einstein(R: AlgebraicCurvatureTensor, tol: float = 1e-10) -> bool:
    """Traceless Ricci vanishes within ``tol * ||R||_F``."""
    return einstein_defect(R) <= tol * R.norm


@dataclass(frozen=True, eq=False)
class RigidityCertificate:
    einstein_defect: float
    w_minus_norm: float
    scalar: float
    orientation: int
    einstein_and_half_flat: bool
    verdict: str


def kahler_orientation(J) -> int:
    """Orientation that puts the Kaehler form in Lambda^+."""
    omega = J.J.T
    coords = np.array([omega[i, j] for i, j in _PAIRS4])
    return 1 if coords @ hodge_star_matrix(1) @ coords >= 0 else -1


def rigidity_certificate(K: KahlerStructure, tol: float = 1e-9) -> RigidityCertificate:
    """Check Einstein, W^- = 0 and the sign of S for a Kaehler surface.

    Verdict ``"cp2-type"`` when S > 0 and both defects are within
    ``tol * ||R||_inf``; ``"flat"`` when ``||R||_inf <= tol``.
    """
    R = K.R
    _require4(R)
    o = kahler_orientation(K.J)
    ws = w_pm_eigen(R, o)
    ed = einstein_defect(R)
    wm = float(np.max(np.abs(ws.mu)))
    scale = R.sup_norm
    ok = ed <= tol * scale and wm <= tol * scale
    if scale <= tol:
        verdict = "flat"
    elif ok and ws.scalar > 0:
        verdict = "cp2-type"
    else:
        verdict = "inconclusive"
    return RigidityCertificate(ed, wm, ws.scalar, o, ok, verdict)
