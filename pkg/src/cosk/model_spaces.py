"""Model curvature tensors and their complex structures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import AlgebraicCurvatureTensor, DimensionError, TwoForm, direct_sum


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """Orthogonal J with J^2 = -I, acting on column vectors."""

    J: np.ndarray

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        n = J.shape[0]
        if J.ndim != 2 or J.shape != (n, n) or n % 2:
            raise DimensionError(f"complex structure must be an even square matrix, got {J.shape}")
        if np.max(np.abs(J @ J + np.eye(n))) > 1e-12 or np.max(np.abs(J.T @ J - np.eye(n))) > 1e-12:
            raise ValueError("J must be orthogonal with J^2 = -I")
        J.flags.writeable = False
        object.__setattr__(self, "J", J)

    @property
    def n(self) -> int:
        return self.J.shape[0]

    def kahler_form(self) -> TwoForm:
        """omega(X, Y) = <JX, Y>."""
        return TwoForm(self.J.T.copy())


def standard_complex_structure(m: int) -> ComplexStructure:
    """J e_{2k-1} = e_{2k} (1-based), block diagonal."""
    J = np.zeros((2 * m, 2 * m))
    for k in range(m):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return ComplexStructure(J)


def space_form(n: int, kappa: float) -> AlgebraicCurvatureTensor:
    if n < 2:
        raise DimensionError("space forms need n >= 2")
    g = np.eye(n)
    comp = kappa * (np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g))
    return AlgebraicCurvatureTensor(n, comp)


def flat(n: int) -> AlgebraicCurvatureTensor:
    return space_form(n, 0.0)


def product_surfaces(kappa1: float, kappa2: float) -> AlgebraicCurvatureTensor:
    return direct_sum(space_form(2, kappa1), space_form(2, kappa2))


def s2xs2() -> tuple[AlgebraicCurvatureTensor, ComplexStructure]:
    """Product of two unit spheres with the product complex structure."""
    return product_surfaces(1.0, 1.0), standard_complex_structure(2)


def fubini_study(m: int, c: float) -> tuple[AlgebraicCurvatureTensor, ComplexStructure]:
    """Constant holomorphic sectional curvature ``c`` on C^m (CP^m for c > 0)."""
    if m < 1:
        raise DimensionError("complex dimension must be >= 1")
    cs = standard_complex_structure(m)
    g = np.eye(2 * m)
    # w[a, b] = <J e_a, e_b>
    w = cs.J.T
    comp = (c / 4.0) * (
        np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)
        + np.einsum("ik,jl->ijkl", w, w) - np.einsum("il,jk->ijkl", w, w)
        + 2.0 * np.einsum("ij,kl->ijkl", w, w)
    )
    return AlgebraicCurvatureTensor(2 * m, comp), cs
