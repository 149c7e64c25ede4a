import numpy as np
import pytest

from isosweep import stable, supermaps, zoo
from isosweep.matcore import hs_norm, is_psd, matrix_unit, rank_one
from isosweep.supermaps import (choi_matrix, is_bistochastic,
                                is_completely_copositive,
                                is_completely_positive, positivity_probe)
from helpers import random_complex

RT2 = np.sqrt(2.0)
SMALL = dict(budget=4096, restarts=40)


class TestExtremalAtomicMap:
    def test_fixes_identity(self):
        s = zoo.extremal_atomic_map()
        assert np.allclose(s(np.eye(3)), np.eye(3))

    def test_corner_unit_swap(self):
        s = zoo.extremal_atomic_map()
        assert np.allclose(s(matrix_unit(1, 2)), matrix_unit(2, 1) / RT2)

    def test_kills_inner_offdiagonal(self):
        s = zoo.extremal_atomic_map()
        assert hs_norm(s(matrix_unit(0, 1))) == 0.0

    def test_block_form(self):
        # upper-left block goes to (Tr B)/2 * 1_2, the corner passes through
        s = zoo.extremal_atomic_map()
        rng = np.random.default_rng(0)
        b = random_complex(rng, 2)
        a = np.zeros((3, 3), dtype=complex)
        a[:2, :2] = b
        a[2, 2] = 1.7 - 0.3j
        img = s(a)
        assert np.allclose(img[:2, :2], 0.5 * np.trace(b) * np.eye(2))
        assert img[2, 2] == pytest.approx(1.7 - 0.3j)


class TestChoiMap:
    def test_bistochastic(self):
        assert is_bistochastic(zoo.choi_map())

    def test_strongly_ergodic(self):
        assert stable.compute_stable_subspace(zoo.choi_map()).dim == 1

    def test_positivity_probe_clean(self):
        v = positivity_probe(zoo.choi_map(), seed=42, **SMALL)
        assert not v.violation

    def test_neither_cp_nor_cocp(self):
        cm = zoo.choi_map()
        assert not is_completely_positive(cm)
        assert not is_completely_copositive(cm)

    def test_choi_matrix_bottom_eigenvalue(self):
        # frozen independent eigensolve of the assembled Choi matrix
        w = np.linalg.eigvalsh(choi_matrix(zoo.choi_map()))
        assert w.min() == pytest.approx(-0.5, abs=1e-12)


class TestJordanAutomorphism:
    def test_trivial_unitary_is_identity(self):
        s = zoo.jordan_automorphism(np.eye(3))
        assert np.array_equal(s.mat, np.eye(9))

    def test_full_stable_subspace(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=1))
        assert stable.compute_stable_subspace(s).dim == 9

    def test_matches_direct_conjugation(self):
        u = zoo.random_unitary(3, seed=2)
        s = zoo.jordan_automorphism(u)
        rng = np.random.default_rng(3)
        a = random_complex(rng, 3)
        assert np.allclose(s(a), u @ a @ u.conj().T)

    def test_transposed_variant_is_cocp(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=4), transposed=True)
        assert not is_completely_positive(s)
        assert is_completely_copositive(s)
        assert is_bistochastic(s)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            zoo.jordan_automorphism(np.diag([1.0, 2.0, 1.0]))


class TestCanonicalSubalgebras:
    def test_dimensions(self):
        assert [k.dim for k in zoo.canonical_subalgebras()] == [1, 2, 3, 4, 5, 6, 9]

    def test_closed_under_star_and_jordan(self):
        for sub in zoo.canonical_subalgebras():
            for a in sub.basis:
                assert sub.membership_residual(a.conj().T) < 1e-12
                for b in sub.basis:
                    assert sub.membership_residual((a @ b + b @ a) / 2) < 1e-12

    def test_classification_round_trip(self):
        for sub, want in zip(zoo.canonical_subalgebras(), zoo.CANONICAL_CLASSES):
            assert stable.classify_jordan_subalgebra(sub) is want


class TestRandomBistochastic:
    def test_single_conjugation_component(self):
        # seed 2 draws a lone unitary conjugation: everything stays stable
        s = zoo.random_bistochastic(3, components=1, seed=2)
        assert stable.compute_stable_subspace(s).dim == 9

    def test_always_bistochastic_and_contractive(self):
        for seed in range(10):
            s = zoo.random_bistochastic(3, components=1 + seed % 4, seed=seed)
            assert is_bistochastic(s)
            assert supermaps.hs_contraction_check(s, trials=50, seed=seed)

    def test_trace_component_alone_is_strongly_ergodic(self):
        scalars = zoo.canonical_subalgebras()[0]
        e = stable.conditional_expectation(scalars)
        rng = np.random.default_rng(5)
        a = random_complex(rng, 3)
        assert np.allclose(e(a), np.trace(a) * np.eye(3) / 3)
        assert stable.compute_stable_subspace(e).dim == 1

    def test_deterministic_per_seed(self):
        a = zoo.random_bistochastic(3, components=3, seed=11)
        b = zoo.random_bistochastic(3, components=3, seed=11)
        assert np.array_equal(a.mat, b.mat)

    def test_other_sizes(self):
        s = zoo.random_bistochastic(2, components=2, seed=6)
        assert s.n == 2 and is_bistochastic(s)

    def test_rejects_zero_components(self):
        with pytest.raises(ValueError):
            zoo.random_bistochastic(3, components=0)


class TestRandomKrausMap:
    def test_completely_positive(self):
        for seed in range(5):
            s = zoo.random_kraus_map(3, terms=2, seed=seed)
            assert is_completely_positive(s)

    def test_transposed_composite_generally_not_cp(self):
        s = zoo.random_kraus_map(3, terms=2, seed=0)
        flipped = s.compose(zoo.transpose_map(3))
        assert is_completely_positive(flipped) == is_psd(choi_matrix(flipped))


class TestZeroTracePairing:
    def test_holds_for_200_random_directions(self):
        s = zoo.extremal_atomic_map()
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(200):
            eta2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            eta2 /= np.linalg.norm(eta2)
            ups = np.array([eta2[0], np.conj(eta2[1])]) / RT2
            xi = np.array([-2 * ups[0], -2 * ups[1], 1.0])
            eta3 = np.array([eta2[0], eta2[1], 1.0])
            worst = max(worst, abs(np.trace(
                rank_one(xi) @ s(rank_one(eta3)))))
        assert worst <= 1e-9

    def test_norm_relation(self):
        rng = np.random.default_rng(8)
        eta2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        ups = np.array([eta2[0], np.conj(eta2[1])]) / RT2
        assert np.linalg.norm(ups) ** 2 == pytest.approx(
            np.linalg.norm(eta2) ** 2 / 2)


class TestPowersConvergeToExpectation:
    def test_exact_geometric_rate(self):
        s = zoo.extremal_atomic_map()
        sub = stable.HSSubspace(3, np.stack([
            np.diag([1.0, 1.0, 0.0]) / RT2, np.diag([0.0, 0.0, 1.0])]))
        lim = stable.conditional_expectation(sub)
        for k in range(1, 21):
            gap = np.linalg.norm(s.power(k).mat - lim.mat, 2)
            assert gap == pytest.approx(2.0 ** (-k / 2), abs=1e-12)


class TestRegistry:
    @pytest.mark.parametrize("name", zoo.ZOO_NAMES)
    def test_all_names_instantiate(self, name):
        s = zoo.build_named(name)
        assert is_bistochastic(s)
        assert supermaps.hs_contraction_check(s, trials=100, seed=0)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            zoo.build_named("squeeze")

    def test_map_spec(self):
        s = zoo.MapSpec("unitary-conj", parameters={"seed": 9}).instantiate()
        assert np.array_equal(
            s.mat, zoo.build_named("unitary-conj", seed=9).mat)
