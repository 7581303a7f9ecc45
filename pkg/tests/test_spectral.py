import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosk.spectral import sym_eigen, sym_eigvals

from _support import seeds


def test_identity():
    assert np.array_equal(sym_eigvals(np.eye(9)), np.ones(9))


def test_diagonal_input_sorted():
    vals = sym_eigvals(np.diag([4.0, -2, 4, -2, 4, 4, -2, 4, 4]))
    assert list(vals) == [-2, -2, -2, 4, 4, 4, 4, 4, 4]


def test_ties_keep_diagonal_order():
    ed = sym_eigen(np.diag([3.0, 1.0, 3.0]))
    # the two 3s keep columns 0 then 2
    assert np.array_equal(ed.vectors[:, 1], [1, 0, 0])
    assert np.array_equal(ed.vectors[:, 2], [0, 0, 1])


@given(seeds, st.integers(1, 20))
def test_against_lapack(seed, size):
    A = np.random.default_rng(seed).standard_normal((size, size))
    M = A + A.T
    ed = sym_eigen(M)
    scale = np.linalg.norm(M)
    assert np.max(np.abs(ed.values - np.linalg.eigvalsh(M))) <= 1e-12 * scale
    V = ed.vectors
    assert np.max(np.abs(V.T @ V - np.eye(size))) <= 1e-12
    assert np.linalg.norm(V @ np.diag(ed.values) @ V.T - M) <= 1e-11 * scale
    assert np.max(np.linalg.norm(M @ V - V * ed.values, axis=0)) <= 1e-11 * scale


def test_reconstruction_200_random_nine_by_nine():
    rng = np.random.default_rng(0)
    for _ in range(200):
        A = rng.standard_normal((9, 9))
        M = A + A.T
        ed = sym_eigen(M)
        V = ed.vectors
        assert np.linalg.norm(V @ np.diag(ed.values) @ V.T - M) <= 1e-11 * np.linalg.norm(M)


@given(seeds)
def test_permutation_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((9, 9))
    M = A + A.T
    P = np.eye(9)[rng.permutation(9)]
    assert np.max(np.abs(sym_eigvals(P @ M @ P.T) - sym_eigvals(M))) <= 1e-11 * np.linalg.norm(M)


def test_deterministic_bits():
    A = np.random.default_rng(5).standard_normal((12, 12))
    M = A + A.T
    a, b = sym_eigen(M), sym_eigen(M.copy())
    assert np.array_equal(a.values, b.values) and np.array_equal(a.vectors, b.vectors)


def test_zero_and_degenerate():
    assert np.array_equal(sym_eigvals(np.zeros((4, 4))), np.zeros(4))
    ed = sym_eigen(np.ones((5, 5)))
    assert ed.values == pytest.approx([0, 0, 0, 0, 5], abs=1e-13)


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.array([[0.0, 1.0], [2.0, 0.0]]),
                                 np.full((2, 2), np.nan), np.zeros((65, 65))])
def test_rejects(bad):
    with pytest.raises(ValueError):
        sym_eigen(bad)
