import numpy as np
import pytest
from hypothesis import given, settings

from cosk.kahler_geom import (
    InfeasibleShiftError,
    KahlerStructure,
    bisectional,
    complete_pair,
    four_sectional_identity_defect,
    four_sectional_sum,
    is_orthogonal_pair,
    j_invariance_defect,
    min_orth_bisectional,
    project_kahler,
    random_kahler_act,
    random_orthogonal_pairs,
)
from cosk.model_spaces import flat, fubini_study, s2xs2, space_form, standard_complex_structure
from cosk.operators import cosk_spectrum, normalized_alpha_sum
from cosk.tensor_core import DimensionError, bianchi_defect, random_act

from _support import seeds

J2 = standard_complex_structure(2)


def test_models_are_j_invariant():
    assert j_invariance_defect(*fubini_study(3, 2.0)) <= 1e-15
    assert j_invariance_defect(*s2xs2()) == 0.0


def test_round_sphere_is_not_kahler():
    assert j_invariance_defect(space_form(4, 1.0), J2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        KahlerStructure.build(space_form(4, 1.0), J2)
    with pytest.raises(DimensionError):
        KahlerStructure.build(space_form(6, 1.0), J2)


class TestProjection:
    @given(seeds)
    @settings(max_examples=15)
    def test_lands_on_kahler_tensors(self, seed):
        R = random_act(4, seed)
        res = project_kahler(R, J2, full=True)
        assert res.j_defect <= 1e-11 * R.sup_norm
        assert res.bianchi_defect <= 1e-11 * R.sup_norm
        again = project_kahler(res.R, J2)
        assert np.max(np.abs(again.comp - res.R.comp)) <= 1e-11 * R.sup_norm

    def test_fixes_kahler_tensors(self):
        R, J = fubini_study(2, 4.0)
        assert np.max(np.abs(project_kahler(R, J).comp - R.comp)) <= 1e-14

    def test_iteration_budget(self):
        with pytest.raises(RuntimeError):
            project_kahler(random_act(6, 0), standard_complex_structure(3), tol=0.0, max_iter=2)


class TestPairs:
    def test_random_pairs_are_orthogonal(self, rng):
        X, Y = random_orthogonal_pairs(rng, J2.J, 200)
        assert all(is_orthogonal_pair(J2, x, y) for x, y in zip(X, Y))
        assert np.allclose(np.linalg.norm(Y, axis=1), 1.0)

    def test_complete_pair(self, rng):
        X, Y = complete_pair(J2.J, rng.standard_normal(4), rng.standard_normal(4))
        assert is_orthogonal_pair(J2, X, Y)
        assert not is_orthogonal_pair(J2, np.eye(4)[0], np.eye(4)[1])


class TestBisectional:
    def test_fubini_study_values(self, rng):
        K = KahlerStructure.build(*fubini_study(2, 4.0))
        X, Y = random_orthogonal_pairs(rng, J2.J, 50)
        for x, y in zip(X, Y):
            assert bisectional(K, x, y) == pytest.approx(2.0)
            assert bisectional(K, x, x) == pytest.approx(4.0)

    def test_product_values(self):
        K = KahlerStructure.build(*s2xs2())
        e = np.eye(4)
        assert bisectional(K, e[0], e[2]) == 0.0
        assert bisectional(K, e[0], e[0]) == 1.0

    def test_requires_unit_vectors(self):
        K = KahlerStructure.build(*s2xs2())
        with pytest.raises(ValueError):
            bisectional(K, 2 * np.eye(4)[0], np.eye(4)[2])

    @given(seeds)
    @settings(max_examples=15)
    def test_four_sectional_identity(self, seed):
        K = random_kahler_act(2 + seed % 2, seed)
        rng = np.random.default_rng(seed)
        X, Y = random_orthogonal_pairs(rng, K.J.J, 30)
        for x, y in zip(X, Y):
            assert four_sectional_identity_defect(K, x, y) <= 1e-12 * K.R.sup_norm

    def test_identity_rejects_non_orthogonal_pairs(self):
        K = KahlerStructure.build(*s2xs2())
        with pytest.raises(ValueError):
            four_sectional_identity_defect(K, np.eye(4)[0], np.eye(4)[1])

    def test_four_sectional_sum_space_form(self, rng):
        X, Y = random_orthogonal_pairs(rng, J2.J, 1)
        assert four_sectional_sum(space_form(4, 0.5), J2, X[0], Y[0]) == pytest.approx(2.0)


class TestMinimum:
    def test_models(self):
        assert min_orth_bisectional(KahlerStructure.build(*fubini_study(2, 4.0))) == pytest.approx(2.0)
        assert min_orth_bisectional(KahlerStructure.build(*s2xs2())) == pytest.approx(0.0, abs=1e-12)
        assert min_orth_bisectional(KahlerStructure.build(flat(4), J2)) == 0.0

    @pytest.mark.parametrize("m, seed", [(2, 3), (3, 4)])
    def test_at_most_dense_sampling(self, m, seed):
        K = random_kahler_act(m, seed)
        rng = np.random.default_rng(99)
        X, Y = random_orthogonal_pairs(rng, K.J.J, 20_000)
        dense = min(bisectional(K, x, y) for x, y in zip(X, Y))
        val, x, y = min_orth_bisectional(K, seed=seed, return_pair=True)
        assert val <= dense + 1e-12
        assert is_orthogonal_pair(K.J, x, y)
        assert bisectional(K, x, y) == pytest.approx(val, abs=1e-12 * K.R.sup_norm)

    def test_needs_two_complex_dimensions(self):
        K = KahlerStructure.build(*fubini_study(1, 1.0))
        with pytest.raises(DimensionError):
            min_orth_bisectional(K)


class TestSampler:
    def test_deterministic(self):
        a, b = random_kahler_act(2, 17), random_kahler_act(2, 17)
        assert np.array_equal(a.R.comp, b.R.comp)
        assert j_invariance_defect(a.R, a.J) <= 1e-12 * a.R.sup_norm
        assert bianchi_defect(a.R) <= 1e-12 * a.R.sup_norm

    @pytest.mark.parametrize("seed", range(5))
    def test_shift_reaches_six_nonnegativity(self, seed):
        K = random_kahler_act(2, seed, ensure_six_nonneg=True)
        a6 = normalized_alpha_sum(cosk_spectrum(K.R), 6)
        assert 0 <= a6 <= 1e-6

    def test_complex_dimension_three_has_no_six_nonnegative_shift(self):
        F, _ = fubini_study(3, 1.0)
        assert normalized_alpha_sum(cosk_spectrum(F), 6) < 0
        with pytest.raises(InfeasibleShiftError):
            random_kahler_act(3, 0, ensure_six_nonneg=True)

    def test_rejects_complex_dimension_one(self):
        with pytest.raises(DimensionError):
            random_kahler_act(1, 0)
