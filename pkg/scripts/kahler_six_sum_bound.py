"""Largest possible six-sum of R-ring over Kaehler curvature tensors (needs cvxpy).

Solves  max lambda_1 + ... + lambda_6  subject to R Kaehler and a fixed
scalar curvature S = +-1, for complex dimensions 2 and 3.  Scaling covers
every S != 0.  For S = 0 no SDP is needed: the eigenvalues of R-ring sum to
S/2 + S/n = 0, so a nonnegative six-sum forces all of them to vanish, and then
R = 0.  A negative optimum at S = 1 in complex dimension 3 therefore means no
nonzero Kaehler tensor there is six-nonnegative.
"""

import argparse

import numpy as np

try:
    import cvxpy as cp
except ImportError:  # pragma: no cover
    raise SystemExit("this script needs cvxpy: pip install 'artifact[sdp]'")

from cosk.model_spaces import standard_complex_structure
from cosk.operators import r_ring_gram
from cosk.tensor_core import AlgebraicCurvatureTensor, alternation, from_lambda2_matrix, s20_matrices, scalar_curv


def kahler_basis(m):
    """Basis of Kaehler curvature tensors as a null space of linear constraints."""
    n = 2 * m
    J = standard_complex_structure(m).J
    D = n * (n - 1) // 2
    cols = []
    for a in range(D):
        for b in range(a, D):
            M = np.zeros((D, D))
            M[a, b] = M[b, a] = 1.0
            cols.append(from_lambda2_matrix(M).comp.ravel())
    A = np.array(cols).T

    def constraints(c):
        c = c.reshape((n,) * 4)
        jinv = c - np.einsum("ijab,ak,bl->ijkl", c, J, J)
        return np.concatenate([alternation(c).ravel(), jinv.ravel()])

    C = np.array([constraints(A[:, p]) for p in range(A.shape[1])]).T
    _, s, vt = np.linalg.svd(C)
    null = vt[int((s > 1e-10).sum()):].T
    return [AlgebraicCurvatureTensor(n, (A @ null[:, q]).reshape((n,) * 4)) for q in range(null.shape[1])]


def solve(m, scalar):
    basis = kahler_basis(m)
    B = s20_matrices(2 * m)
    mats = [r_ring_gram(R, B) for R in basis]
    scal = np.array([scalar_curv(R) for R in basis])
    x = cp.Variable(len(basis))
    M = sum(x[i] * mats[i] for i in range(len(basis)))
    prob = cp.Problem(cp.Maximize(cp.lambda_sum_smallest(M, 6)), [scal @ x == scalar])
    prob.solve()
    return len(basis), prob.value


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    for m in (2, 3):
        for S in (1.0, -1.0):
            dim, val = solve(m, S)
            print(f"m = {m} (dim {dim:>2})  S = {S:+.0f}  max six-sum {val: .6f}")


if __name__ == "__main__":
    main()
