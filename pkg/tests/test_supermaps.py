import numpy as np
import pytest
from hypothesis import given, strategies as st

from isosweep import supermaps, zoo
from isosweep.matcore import hs_inner, hs_norm, is_psd, matrix_unit, rank_one
from isosweep.supermaps import (NO_VIOLATION_FOUND, VIOLATION_FOUND,
                                SuperOperator, choi_matrix, is_bistochastic,
                                is_completely_copositive,
                                is_completely_positive, k_positivity_probe,
                                kadison_schwarz_defect, positivity_probe,
                                superop_from_json, superop_to_json,
                                transposition_superop)
from helpers import random_complex, random_hermitian

RT2 = np.sqrt(2.0)
SMALL = dict(budget=4096, restarts=40)


def direct_action(a):
    """Independent entrywise formula for the extremal atomic map."""
    a = np.asarray(a, dtype=complex)
    out = np.zeros((3, 3), dtype=complex)
    out[0, 0] = out[1, 1] = 0.5 * (a[0, 0] + a[1, 1])
    out[0, 2] = a[0, 2] / RT2
    out[1, 2] = a[2, 1] / RT2
    out[2, 0] = a[2, 0] / RT2
    out[2, 1] = a[1, 2] / RT2
    out[2, 2] = a[2, 2]
    return out


@pytest.fixture(scope="module")
def s_atomic():
    return zoo.extremal_atomic_map()


class TestConstruction:
    def test_identity_images(self):
        s = SuperOperator.from_basis_images(3, [matrix_unit(j, k)
                                                for j in range(3) for k in range(3)])
        assert np.array_equal(s.mat, np.eye(9))

    def test_transposition_images(self):
        t = SuperOperator.from_basis_images(3, [matrix_unit(k, j)
                                                for j in range(3) for k in range(3)])
        rng = np.random.default_rng(0)
        a = random_complex(rng, 3)
        assert np.array_equal(t(a), a.T)

    def test_atomic_map_matches_formula(self, s_atomic):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = random_complex(rng, 3)
            assert np.allclose(s_atomic(a), direct_action(a), atol=1e-14)

    def test_images_reproduced_exactly(self, s_atomic):
        for j in range(3):
            for k in range(3):
                u = matrix_unit(j, k)
                assert np.array_equal(s_atomic(u), direct_action(u))

    def test_wrong_count_rejected(self):
        with pytest.raises(ValueError):
            SuperOperator.from_basis_images(3, [np.eye(3)] * 8)

    def test_wrong_size_rejected(self):
        with pytest.raises(ValueError):
            SuperOperator.from_basis_images(2, [np.eye(3)] * 4)


class TestApply:
    def test_fixes_corner_projection(self, s_atomic):
        p3 = np.diag([0.0, 0.0, 1.0])
        assert np.allclose(s_atomic(p3), p3)

    def test_spreads_first_projection(self, s_atomic):
        assert np.allclose(s_atomic(np.diag([1.0, 0.0, 0.0])),
                           np.diag([0.5, 0.5, 0.0]))

    def test_scales_corner_unit(self, s_atomic):
        assert np.allclose(s_atomic(matrix_unit(0, 2)), matrix_unit(0, 2) / RT2)

    def test_linear(self, s_atomic):
        rng = np.random.default_rng(2)
        a, b = random_complex(rng, 3), random_complex(rng, 3)
        z = complex(rng.normal(), rng.normal())
        assert np.allclose(s_atomic(z * a + b), z * s_atomic(a) + s_atomic(b))

    def test_dimension_mismatch(self, s_atomic):
        with pytest.raises(ValueError):
            s_atomic(np.eye(2))


class TestAdjoint:
    def test_identity_self_adjoint(self):
        s = zoo.identity_map(3)
        assert np.array_equal(s.adjoint().mat, s.mat)

    def test_unitary_conjugation_adjoint_inverts(self):
        u = zoo.random_unitary(3, seed=3)
        s = zoo.jordan_automorphism(u)
        back = zoo.jordan_automorphism(u.conj().T)
        assert np.allclose(s.adjoint().mat, back.mat)

    def test_defining_identity(self, s_atomic):
        rng = np.random.default_rng(4)
        adj = s_atomic.adjoint()
        for _ in range(100):
            a, b = random_complex(rng, 3), random_complex(rng, 3)
            assert hs_inner(adj(a), b) == pytest.approx(hs_inner(a, s_atomic(b)))

    def test_involution_is_exact(self, s_atomic):
        assert np.array_equal(s_atomic.adjoint().adjoint().mat, s_atomic.mat)

    def test_adjoint_of_bistochastic_is_bistochastic(self):
        for seed in range(5):
            s = zoo.random_bistochastic(3, components=2, seed=seed)
            assert is_bistochastic(s.adjoint())


class TestComposePower:
    def test_transposition_squares_to_identity(self):
        t = zoo.transpose_map(3)
        assert np.allclose(t.compose(t).mat, np.eye(9))

    def test_power_zero_is_identity(self, s_atomic):
        assert np.array_equal(s_atomic.power(0).mat, np.eye(9))

    def test_powers_converge_to_limit_projection(self, s_atomic):
        p12 = np.diag([1.0, 1.0, 0.0])
        p3 = np.diag([0.0, 0.0, 1.0])
        rng = np.random.default_rng(5)
        a = random_complex(rng, 3)
        want = 0.5 * np.trace(p12 @ a) * p12 + np.trace(p3 @ a) * p3
        got = s_atomic.power(80)(a)
        assert np.allclose(got, want, atol=1e-11)

    def test_isometric_on_stable_part(self, s_atomic):
        back = s_atomic.adjoint().compose(s_atomic)
        for fixed in (np.diag([1.0, 1.0, 0.0]) / RT2, np.diag([0.0, 0.0, 1.0])):
            assert np.allclose(back(fixed), fixed, atol=1e-14)

    def test_mismatched_sizes_rejected(self):
        with pytest.raises(ValueError):
            zoo.identity_map(2).compose(zoo.identity_map(3))

    def test_negative_power_rejected(self, s_atomic):
        with pytest.raises(ValueError):
            s_atomic.power(-1)


class TestBistochastic:
    def test_atomic_map(self, s_atomic):
        assert is_bistochastic(s_atomic)

    def test_normalized_trace_map(self):
        s = SuperOperator.from_callable(2, lambda a: np.trace(a) * np.eye(2) / 2)
        assert is_bistochastic(s)

    def test_scaling_is_not(self):
        s = SuperOperator(2, 2.0 * np.eye(4))
        assert not is_bistochastic(s)


class TestContraction:
    def test_atomic_map_contracts(self, s_atomic):
        assert supermaps.hs_contraction_check(s_atomic, trials=1000, seed=0)

    def test_unitary_conjugation_is_isometric(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=6))
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = random_complex(rng, 3)
            assert hs_norm(s(a)) == pytest.approx(hs_norm(a))

    def test_trace_map_strictly_contracts_offdiagonal(self):
        s = SuperOperator.from_callable(2, lambda a: np.trace(a) * np.eye(2) / 2)
        assert hs_norm(s(matrix_unit(0, 1, 2))) == pytest.approx(0.0)
        assert supermaps.hs_contraction_check(s, trials=100, seed=1)

    def test_rejects_non_bistochastic(self):
        with pytest.raises(ValueError):
            supermaps.hs_contraction_check(SuperOperator(2, 2.0 * np.eye(4)))

    @given(st.integers(0, 500))
    def test_random_bistochastic_contracts_hermitian(self, seed):
        rng = np.random.default_rng(seed)
        s = zoo.random_bistochastic(3, components=1 + seed % 3, seed=seed)
        a = random_hermitian(rng, 3)
        assert hs_norm(s(a)) <= hs_norm(a) + 1e-9


class TestPositivityProbe:
    def test_atomic_map_clean(self, s_atomic):
        v = positivity_probe(s_atomic, seed=42, **SMALL)
        assert v.status == NO_VIOLATION_FOUND
        assert v.min_value >= -1e-9

    def test_transposition_clean(self):
        v = positivity_probe(zoo.transpose_map(3), seed=42, **SMALL)
        assert v.status == NO_VIOLATION_FOUND

    def test_compression_defect_found(self):
        p1 = np.diag([1.0, 0.0, 0.0])
        s = SuperOperator.from_callable(3, lambda a: 2 * p1 @ a @ p1 - a)
        v = positivity_probe(s, seed=42, **SMALL)
        assert v.status == VIOLATION_FOUND
        assert v.min_value == pytest.approx(-1.0, abs=1e-8)
        # the witness vector really exhibits the violation
        image = s(rank_one(v.witness_vector))
        assert np.linalg.eigvalsh((image + image.conj().T) / 2).min() < -1e-6

    def test_deterministic_per_seed(self, s_atomic):
        a = positivity_probe(s_atomic, seed=9, **SMALL)
        b = positivity_probe(s_atomic, seed=9, **SMALL)
        assert a.min_value == b.min_value
        assert np.array_equal(a.witness_vector, b.witness_vector)

    def test_choi_psd_implies_clean_probe(self):
        for seed in range(4):
            s = zoo.random_kraus_map(3, terms=2, seed=seed)
            assert is_psd(choi_matrix(s))
            v = positivity_probe(s, seed=seed, **SMALL)
            assert v.status == NO_VIOLATION_FOUND


def depolarizing(lam):
    """lam * A + (1 - lam) * Tr(A) 1/3; the bottom eigenvalue of its
    rank-one images is exactly min((2 lam + 1)/3, (1 - lam)/3)."""
    return SuperOperator.from_callable(
        3, lambda a: lam * a + (1 - lam) * np.trace(a) * np.eye(3) / 3)


class TestProbeCalibration:
    @pytest.mark.parametrize("lam", [1.02, 1.2, -0.52, -0.8])
    def test_finds_the_exact_margin_outside(self, lam):
        want = min((2 * lam + 1) / 3, (1 - lam) / 3)
        v = positivity_probe(depolarizing(lam), seed=42, **SMALL)
        assert v.status == VIOLATION_FOUND
        assert v.min_value == pytest.approx(want, abs=1e-9)

    @pytest.mark.parametrize("lam", [1.0, -0.5, 0.3])
    def test_clean_inside_and_on_the_boundary(self, lam):
        want = min((2 * lam + 1) / 3, (1 - lam) / 3)
        v = positivity_probe(depolarizing(lam), seed=42, **SMALL)
        assert v.status == NO_VIOLATION_FOUND
        assert v.min_value == pytest.approx(want, abs=1e-9)

    def test_detects_a_tiny_violation(self):
        # margin 1e-6 past the positivity boundary
        lam = 1.0 + 3e-6
        v = positivity_probe(depolarizing(lam), seed=42, **SMALL)
        assert v.status == VIOLATION_FOUND
        assert v.min_value == pytest.approx(-1e-6, abs=1e-9)

    def test_k1_probe_agrees_with_positivity_probe(self, s_atomic):
        for s in (s_atomic, depolarizing(1.1)):
            a = positivity_probe(s, seed=3, **SMALL)
            b = k_positivity_probe(s, 1, seed=3, **SMALL)
            assert a.status == b.status
            assert a.min_value == pytest.approx(b.min_value, abs=1e-12)

    def test_chunked_grid_matches_unchunked(self, s_atomic, monkeypatch):
        baseline = positivity_probe(s_atomic, budget=20000, seed=6, restarts=10)
        monkeypatch.setattr(supermaps, "_GRID_CHUNK", 777)
        chunked = positivity_probe(s_atomic, budget=20000, seed=6, restarts=10)
        assert chunked.min_value == baseline.min_value
        assert np.array_equal(chunked.witness_vector, baseline.witness_vector)

    def test_generic_size_probe(self):
        t4 = transposition_superop(4)
        v = positivity_probe(t4, budget=3000, seed=1, restarts=20)
        assert v.status == NO_VIOLATION_FOUND
        assert not is_completely_positive(t4)
        assert is_completely_copositive(t4)


class TestCompletePositivity:
    def test_unitary_conjugation_is_cp(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=8))
        assert is_completely_positive(s)

    def test_atomic_map_is_neither(self, s_atomic):
        assert not is_completely_positive(s_atomic)
        assert not is_completely_copositive(s_atomic)

    def test_transposition_is_cocp_only(self):
        t = zoo.transpose_map(3)
        assert not is_completely_positive(t)
        assert is_completely_copositive(t)


class TestKadisonSchwarz:
    def test_defect_at_shifted_projection(self, s_atomic):
        b = np.diag([1.0, 1.0, 0.0]) + matrix_unit(2, 1)
        assert kadison_schwarz_defect(s_atomic, b) < -1e-6

    def test_defect_of_transposed_composite(self, s_atomic):
        st_map = s_atomic.compose(zoo.transpose_map(3))
        b = np.diag([1.0, 1.0, 0.0]) + matrix_unit(2, 0)
        assert kadison_schwarz_defect(st_map, b) < -1e-6

    def test_exact_values(self, s_atomic):
        # both defects evaluate to -sqrt(3)/2 (eigenvalue of the explicit
        # 2x2 defect block [[1/2, -1/sqrt2], [-1/sqrt2, -1/2]])
        b1 = np.diag([1.0, 1.0, 0.0]) + matrix_unit(2, 1)
        want = -np.sqrt(3.0) / 2.0
        assert kadison_schwarz_defect(s_atomic, b1) == pytest.approx(want, abs=1e-12)

    def test_homomorphisms_have_no_defect(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=10))
        rng = np.random.default_rng(11)
        for _ in range(20):
            assert kadison_schwarz_defect(s, random_complex(rng, 3)) >= -1e-12

    def test_size_mismatch(self, s_atomic):
        with pytest.raises(ValueError):
            kadison_schwarz_defect(s_atomic, np.eye(2))


class TestKPositivityProbe:
    def test_atomic_map_not_2_positive(self, s_atomic):
        v = k_positivity_probe(s_atomic, 2, seed=42, **SMALL)
        assert v.status == VIOLATION_FOUND
        # independent check of the violation through the block action
        psi = v.witness_vector
        blocks = supermaps._blockwise_images(s_atomic.mat, 3, 2, psi[None])[0]
        assert np.linalg.eigvalsh((blocks + blocks.conj().T) / 2).min() < -1e-6

    def test_transposition_not_2_positive(self):
        v = k_positivity_probe(zoo.transpose_map(3), 2, seed=42, **SMALL)
        assert v.status == VIOLATION_FOUND
        assert v.min_value == pytest.approx(-0.5, abs=1e-7)

    def test_unitary_conjugation_clean(self):
        s = zoo.jordan_automorphism(zoo.random_unitary(3, seed=12))
        v = k_positivity_probe(s, 2, seed=42, **SMALL)
        assert v.status == NO_VIOLATION_FOUND

    def test_rejects_bad_k(self, s_atomic):
        with pytest.raises(ValueError):
            k_positivity_probe(s_atomic, 0)


class TestHermiticityPreservation:
    def test_flag_and_sample(self, s_atomic):
        assert supermaps.is_hermiticity_preserving(s_atomic)
        rng = np.random.default_rng(13)
        for _ in range(20):
            a = random_complex(rng, 3)
            assert np.allclose(s_atomic(a.conj().T), s_atomic(a).conj().T)

    def test_detects_violation(self):
        images = [matrix_unit(j, k) for j in range(3) for k in range(3)]
        images[4] = 1j * matrix_unit(0, 2)
        bad = SuperOperator.from_basis_images(3, images)
        assert not supermaps.is_hermiticity_preserving(bad)


class TestChoiMatrix:
    def test_reshuffle_matches_tensor_sum(self, s_atomic):
        from isosweep.matcore import tensor
        want = sum(tensor(matrix_unit(i, j), s_atomic(matrix_unit(i, j)))
                   for i in range(3) for j in range(3))
        assert np.array_equal(choi_matrix(s_atomic), want)

    def test_choi_of_transposition_is_swap(self):
        c = choi_matrix(zoo.transpose_map(3))
        swap = sum(np.kron(matrix_unit(i, j), matrix_unit(j, i))
                   for i in range(3) for j in range(3))
        assert np.array_equal(c, swap)

    def test_round_trip(self, s_atomic):
        back = supermaps.superop_from_choi(3, choi_matrix(s_atomic))
        assert np.array_equal(back.mat, s_atomic.mat)


class TestJson:
    def test_basis_images_round_trip(self, s_atomic):
        back = superop_from_json(superop_to_json(s_atomic))
        assert np.array_equal(back.mat, s_atomic.mat)

    def test_choi_round_trip(self, s_atomic):
        back = superop_from_json(superop_to_json(s_atomic, kind="choi"))
        assert np.allclose(back.mat, s_atomic.mat, atol=1e-15)

    def test_rejects_non_hermiticity_preserving(self):
        images = [matrix_unit(j, k) for j in range(3) for k in range(3)]
        images[0] = 1j * matrix_unit(0, 1)  # S(E_00)* != S(E_00)
        bad = superop_to_json(SuperOperator.from_basis_images(3, images))
        with pytest.raises(ValueError):
            superop_from_json(bad)

    @pytest.mark.parametrize("obj", [
        {"kind": "basis-images"},
        {"n": 3, "kind": "nonsense"},
        {"n": 3, "kind": "basis-images", "images": []},
        {"n": 0, "kind": "basis-images", "images": []},
    ])
    def test_rejects_malformed(self, obj):
        with pytest.raises(ValueError):
            superop_from_json(obj)

    def test_rejects_wrong_choi_size(self, s_atomic):
        obj = superop_to_json(s_atomic, kind="choi")
        obj["n"] = 2
        with pytest.raises(ValueError):
            superop_from_json(obj)
