"""Algebraic curvature tensors and symmetric/antisymmetric two-tensors.

Conventions used throughout the package:

* Components are stored 0-based; all file I/O and user-facing text is 1-based.
* Constant curvature ``kappa`` means ``R_ijkl = kappa (d_ik d_jl - d_il d_jk)``,
  so ``R_ijij`` is the sectional curvature of the ``(e_i, e_j)`` plane.
* ``Ric_jl = sum_k R_kjkl`` and ``S = tr Ric``.
* ``u (.) v = u x v + v x u`` with ``<A, B> = tr(A^T B)`` on symmetric tensors;
  ``u ^ v = u x v - v x u`` with ``<A, B> = tr(A^T B) / 2`` on two-forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_DIM = 8
BIANCHI_TOL = 1e-9


class DimensionError(ValueError):
    pass


class ValidationError(ValueError):
    """A tensor failed symmetry or Bianchi validation."""

    def __init__(self, message: str, defect: float = float("nan")):
        super().__init__(message)
        self.defect = defect


def _check_dim(n: int) -> None:
    if not 2 <= n <= MAX_DIM:
        raise DimensionError(f"dimension n={n} outside supported range [2, {MAX_DIM}]")


@lru_cache(maxsize=None)
def _canonical_map(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat index of the canonical slot and the sign for every (i, j, k, l)."""
    idx = np.zeros((n,) * 4, dtype=np.intp)
    sgn = np.zeros((n,) * 4)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if i == j or k == l:
            continue
        s = 1.0
        a, b, c, d = i, j, k, l
        if a > b:
            a, b, s = b, a, -s
        if c > d:
            c, d, s = d, c, -s
        if (a, b) > (c, d):
            a, b, c, d = c, d, a, b
        idx[i, j, k, l] = ((a * n + b) * n + c) * n + d
        sgn[i, j, k, l] = s
    idx.flags.writeable = False
    sgn.flags.writeable = False
    return idx, sgn


def _symmetrize(comp: np.ndarray) -> np.ndarray:
    """Project onto S^2(Lambda^2) and write through the canonical slots.

    The result satisfies the antisymmetries and pair symmetry bit-exactly.
    """
    n = comp.shape[0]
    avg = (comp - comp.transpose(1, 0, 2, 3) - comp.transpose(0, 1, 3, 2)
           + comp.transpose(1, 0, 3, 2))
    avg = avg + avg.transpose(2, 3, 0, 1)
    avg /= 8.0
    idx, sgn = _canonical_map(n)
    return sgn * avg.ravel()[idx]


@dataclass(frozen=True, eq=False)
class AlgebraicCurvatureTensor:
    """Dense rank-4 curvature tensor with exact index symmetries.

    Any array handed to the constructor is projected onto the tensors with
    ``R_ijkl = -R_jikl = -R_ijlk = R_klij``; the first Bianchi identity is
    *not* forced here (see :func:`bianchi_project` and :func:`validate`).
    """

    n: int
    comp: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_dim(self.n)
        comp = np.asarray(self.comp, dtype=float)
        if comp.shape != (self.n,) * 4:
            raise DimensionError(f"component array has shape {comp.shape}, expected {(self.n,) * 4}")
        comp = _symmetrize(comp)
        comp.flags.writeable = False
        object.__setattr__(self, "comp", comp)

    @classmethod
    def from_array(cls, comp) -> "AlgebraicCurvatureTensor":
        comp = np.asarray(comp, dtype=float)
        return cls(comp.shape[0], comp)

    @classmethod
    def zeros(cls, n: int) -> "AlgebraicCurvatureTensor":
        return cls(n, np.zeros((n,) * 4))

    def __getitem__(self, key):
        return self.comp[key]

    def __add__(self, other):
        if not isinstance(other, AlgebraicCurvatureTensor):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        return AlgebraicCurvatureTensor(self.n, self.comp + other.comp)

    def __sub__(self, other):
        if not isinstance(other, AlgebraicCurvatureTensor):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        return AlgebraicCurvatureTensor(self.n, self.comp - other.comp)

    def __mul__(self, scalar):
        return AlgebraicCurvatureTensor(self.n, float(scalar) * self.comp)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraicCurvatureTensor(self.n, -self.comp)

    @property
    def sup_norm(self) -> float:
        """Largest absolute component, ``||R||_inf``."""
        return float(np.max(np.abs(self.comp)))

    @property
    def norm(self) -> float:
        """Frobenius norm over all n^4 components."""
        return float(np.linalg.norm(self.comp))

    def evaluate(self, x, y, z, w) -> float:
        """R(X, Y, Z, W) for vectors in the standard basis."""
        return float(np.einsum("ijkl,i,j,k,l->", self.comp, x, y, z, w))

    def canonical_entries(self) -> list[tuple[int, int, int, int, float]]:
        """Nonzero canonical slots as 1-based ``(i, j, k, l, value)`` tuples."""
        out = []
        for (i, j), (k, l) in _canonical_pairs(self.n):
            v = float(self.comp[i, j, k, l])
            if v != 0.0:
                out.append((i + 1, j + 1, k + 1, l + 1, v))
        return out


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _canonical_pairs(n: int):
    pairs = _pairs(n)
    for a, p in enumerate(pairs):
        for q in pairs[a:]:
            yield p, q


@dataclass(frozen=True, eq=False)
class SymTwoTensor:
    """Element of S^2(V); inner product ``tr(A^T B)``."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("symmetric two-tensor must be a square matrix")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix is not symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def inner(self, other: "SymTwoTensor") -> float:
        return float(np.sum(self.m * other.m))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    @property
    def trace(self) -> float:
        return float(np.trace(self.m))


@dataclass(frozen=True, eq=False)
class TwoForm:
    """Element of Lambda^2(V); inner product ``tr(A^T B) / 2``."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("two-form must be a square matrix")
        if not np.array_equal(m, -m.T):
            raise ValueError("matrix is not skew-symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def inner(self, other: "TwoForm") -> float:
        return 0.5 * float(np.sum(self.m * other.m))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))


def _as_matrix(x) -> np.ndarray:
    return x.m if isinstance(x, (SymTwoTensor, TwoForm)) else np.asarray(x, dtype=float)


def _vectors(u, v) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"vectors of shapes {u.shape} and {v.shape} do not match")
    return u, v


def sym_product(u, v) -> SymTwoTensor:
    u, v = _vectors(u, v)
    return SymTwoTensor(np.outer(u, v) + np.outer(v, u))


def wedge_product(u, v) -> TwoForm:
    u, v = _vectors(u, v)
    return TwoForm(np.outer(u, v) - np.outer(v, u))


def basis_vector(n: int, i: int) -> np.ndarray:
    e = np.zeros(n)
    e[i] = 1.0
    return e


@lru_cache(maxsize=None)
def _s20_stack(n: int) -> np.ndarray:
    if n < 2:
        raise DimensionError("S^2_0 needs n >= 2")
    e = np.eye(n)
    mats = [(np.outer(e[i], e[j]) + np.outer(e[j], e[i])) / np.sqrt(2.0) for i, j in _pairs(n)]
    # Gram-Schmidt on e_i(.)e_i - e_{i+1}(.)e_{i+1}
    diag = []
    for i in range(n - 1):
        d = np.zeros(n)
        d[i], d[i + 1] = 2.0, -2.0
        for q in diag:
            d = d - (d @ q) * q
        diag.append(d / np.linalg.norm(d))
    mats.extend(np.diag(d) for d in diag)
    out = np.array(mats)
    out.flags.writeable = False
    return out


def s20_matrices(n: int) -> np.ndarray:
    """Stacked ``(N, n, n)`` array of :func:`basis_s20`."""
    return _s20_stack(n)


def basis_s20(n: int) -> list[SymTwoTensor]:
    """Orthonormal basis of traceless symmetric two-tensors, N = (n-1)(n+2)/2.

    Off-diagonal tensors ``e_i (.) e_j / sqrt 2`` in lexicographic order first,
    then ``n - 1`` orthonormalized diagonal differences.
    """
    return [SymTwoTensor(m) for m in _s20_stack(n)]


@lru_cache(maxsize=None)
def _s2_stack(n: int) -> np.ndarray:
    e = np.eye(n)
    mats = [(np.outer(e[i], e[j]) + np.outer(e[j], e[i])) / np.sqrt(2.0) for i, j in _pairs(n)]
    mats.extend(np.outer(e[i], e[i]) for i in range(n))
    out = np.array(mats)
    out.flags.writeable = False
    return out


def basis_s2(n: int) -> list[SymTwoTensor]:
    """The standard orthonormal basis of all of S^2(V)."""
    return [SymTwoTensor(m) for m in _s2_stack(n)]


@lru_cache(maxsize=None)
def _lambda2_stack(n: int) -> np.ndarray:
    e = np.eye(n)
    out = np.array([np.outer(e[i], e[j]) - np.outer(e[j], e[i]) for i, j in _pairs(n)])
    out.flags.writeable = False
    return out


def lambda2_matrices(n: int) -> np.ndarray:
    """Stacked ``(n(n-1)/2, n, n)`` array of :func:`basis_lambda2`."""
    if n < 2:
        raise DimensionError("Lambda^2 needs n >= 2")
    return _lambda2_stack(n)


def basis_lambda2(n: int) -> list[TwoForm]:
    """``e_i ^ e_j`` for i < j in lexicographic order."""
    return [TwoForm(m) for m in lambda2_matrices(n)]


def act_from_components(n: int, entries, bianchi_tol: float = BIANCHI_TOL,
                        validate: bool = True) -> AlgebraicCurvatureTensor:
    """Build a tensor from 1-based canonical-slot entries ``(i, j, k, l, value)``.

    Slots must satisfy ``i < j``, ``k < l`` and ``(i, j) <= (k, l)``; omitted
    slots are zero. With ``validate`` the result must pass the Bianchi check.
    """
    _check_dim(n)
    comp = np.zeros((n,) * 4)
    seen = set()
    for entry in entries:
        i, j, k, l, v = entry
        slot = (int(i), int(j), int(k), int(l))
        if any(s != t for s, t in zip(slot, (i, j, k, l))):
            raise ValueError(f"non-integer index in {entry!r}")
        if not all(1 <= s <= n for s in slot):
            raise IndexError(f"index out of range 1..{n} in slot {slot}")
        i, j, k, l = slot
        if not (i < j and k < l and (i, j) <= (k, l)):
            raise ValueError(f"slot {slot} is not canonical")
        if slot in seen:
            raise ValueError(f"duplicate slot {slot}")
        seen.add(slot)
        i, j, k, l = i - 1, j - 1, k - 1, l - 1
        v = float(v)
        for a, b, c, d, s in ((i, j, k, l, 1), (j, i, k, l, -1), (i, j, l, k, -1), (j, i, l, k, 1)):
            comp[a, b, c, d] = s * v
            comp[c, d, a, b] = s * v
    R = AlgebraicCurvatureTensor(n, comp)
    if validate:
        check_bianchi(R, bianchi_tol)
    return R


def bianchi_defect(R: AlgebraicCurvatureTensor) -> float:
    """max |R_ijkl + R_jkil + R_kijl| over all indices."""
    c = R.comp
    cyc = c + c.transpose(1, 2, 0, 3) + c.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc)))


def check_bianchi(R: AlgebraicCurvatureTensor, bianchi_tol: float = BIANCHI_TOL) -> float:
    defect = bianchi_defect(R)
    if defect > bianchi_tol * R.sup_norm:
        raise ValidationError(
            f"first Bianchi identity violated: defect {defect:.3e} > {bianchi_tol:.1e} * ||R||_inf",
            defect)
    return defect


_PERMS = [(p, 1.0 if sum(p[a] > p[b] for a in range(4) for b in range(a + 1, 4)) % 2 == 0 else -1.0)
          for p in itertools.permutations(range(4))]


def alternation(comp: np.ndarray) -> np.ndarray:
    out = np.zeros_like(comp)
    for p, s in _PERMS:
        out += s * comp.transpose(p)
    return out / 24.0


def bianchi_project(R: AlgebraicCurvatureTensor) -> AlgebraicCurvatureTensor:
    """Remove the totally antisymmetric part; orthogonal projection onto S^2_B."""
    return AlgebraicCurvatureTensor(R.n, R.comp - alternation(R.comp))


def sectional(R: AlgebraicCurvatureTensor, X, Y) -> float:
    X, Y = _vectors(X, Y)
    area = (X @ X) * (Y @ Y) - (X @ Y) ** 2
    if area <= 1e-14 * (X @ X) * (Y @ Y):
        raise ValueError("degenerate plane: X and Y are parallel")
    return R.evaluate(X, Y, X, Y) / area


def ricci_matrix(R: AlgebraicCurvatureTensor) -> np.ndarray:
    return np.einsum("kjkl->jl", R.comp)


def ricci(R: AlgebraicCurvatureTensor) -> SymTwoTensor:
    ric = ricci_matrix(R)
    return SymTwoTensor((ric + ric.T) / 2)


def scalar_curv(R: AlgebraicCurvatureTensor) -> float:
    return float(np.trace(ricci_matrix(R)))


def kulkarni_nomizu(A, B) -> AlgebraicCurvatureTensor:
    """(A o B)_ijkl = A_ik B_jl + A_jl B_ik - A_il B_jk - A_jk B_il."""
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape != b.shape:
        raise DimensionError("Kulkarni-Nomizu factors differ in dimension")
    comp = (np.einsum("ik,jl->ijkl", a, b) + np.einsum("jl,ik->ijkl", a, b)
            - np.einsum("il,jk->ijkl", a, b) - np.einsum("jk,il->ijkl", a, b))
    return AlgebraicCurvatureTensor(a.shape[0], comp)


@dataclass(frozen=True, eq=False)
class WeylDecomposition:
    scalar: float
    ric0: SymTwoTensor
    W: AlgebraicCurvatureTensor

    def reassemble(self) -> AlgebraicCurvatureTensor:
        n = self.W.n
        g = np.eye(n)
        return (self.W + (1.0 / (n - 2)) * kulkarni_nomizu(self.ric0, g)
                + (self.scalar / (2 * n * (n - 1))) * kulkarni_nomizu(g, g))


def weyl_decompose(R: AlgebraicCurvatureTensor) -> WeylDecomposition:
    """Split R into scalar, traceless-Ricci and Weyl parts (n >= 3)."""
    n = R.n
    if n < 3:
        raise DimensionError("Weyl decomposition needs n >= 3")
    g = np.eye(n)
    ric = ricci(R).m
    S = float(np.trace(ric))
    ric0 = ric - (S / n) * g
    ric0 = (ric0 + ric0.T) / 2
    W = (R - (1.0 / (n - 2)) * kulkarni_nomizu(ric0, g)
         - (S / (2 * n * (n - 1))) * kulkarni_nomizu(g, g))
    return WeylDecomposition(S, SymTwoTensor(ric0), W)


def direct_sum(R1: AlgebraicCurvatureTensor, R2: AlgebraicCurvatureTensor) -> AlgebraicCurvatureTensor:
    n1, n2 = R1.n, R2.n
    comp = np.zeros((n1 + n2,) * 4)
    comp[:n1, :n1, :n1, :n1] = R1.comp
    comp[n1:, n1:, n1:, n1:] = R2.comp
    return AlgebraicCurvatureTensor(n1 + n2, comp)


def from_lambda2_matrix(M) -> AlgebraicCurvatureTensor:
    """Lift a symmetric matrix on Lambda^2 (lex basis) to a 4-tensor.

    Inverse of :func:`cosk.operators.r_hat_matrix`; Bianchi is not enforced.
    """
    M = np.asarray(M, dtype=float)
    D = M.shape[0]
    n = int(round((1 + np.sqrt(1 + 8 * D)) / 2))
    if n * (n - 1) // 2 != D or M.shape != (D, D):
        raise DimensionError(f"{M.shape} is not the size of Lambda^2 for any n")
    pairs = _pairs(n)
    comp = np.zeros((n,) * 4)
    Ms = (M + M.T) / 2
    for a, (i, j) in enumerate(pairs):
        for c, (k, l) in enumerate(pairs):
            v = Ms[a, c]
            comp[i, j, k, l] = v
            comp[j, i, k, l] = -v
            comp[i, j, l, k] = -v
            comp[j, i, l, k] = v
    return AlgebraicCurvatureTensor(n, comp)


def random_act(n: int, seed) -> AlgebraicCurvatureTensor:
    """Deterministic random algebraic curvature tensor.

    Standard-normal symmetric matrix on Lambda^2, lifted, then Bianchi-projected.
    """
    _check_dim(n)
    rng = np.random.default_rng(seed)
    D = n * (n - 1) // 2
    A = rng.standard_normal((D, D))
    R = bianchi_project(from_lambda2_matrix((A + A.T) / 2))
    check_bianchi(R)
    return R
