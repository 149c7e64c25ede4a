"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every tolerance is pinned here; the probes run at their full default
budget.  The whole module is expected to finish in well under a minute.
"""
import time

import numpy as np
import pytest

from isosweep import witnesses, zoo
from isosweep.matcore import is_psd, matrix_unit
from isosweep.stable import (HSSubspace, JordanClass, classify_jordan_subalgebra,
                             compute_stable_subspace, conditional_expectation,
                             verify_prop1)
from isosweep.supermaps import (is_bistochastic, is_completely_copositive,
                                is_completely_positive, kadison_schwarz_defect,
                                positivity_probe)
from isosweep.witnesses import build_witness, detected_ppt_state, evaluate

RT2 = np.sqrt(2.0)
P12 = np.diag([1.0, 1.0, 0.0]).astype(complex)
P3 = np.diag([0.0, 0.0, 1.0]).astype(complex)


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


@pytest.fixture(scope="module")
def s_atomic():
    return zoo.extremal_atomic_map()


@pytest.fixture(scope="module")
def w_atomic(s_atomic):
    return build_witness(s_atomic)


def test_criterion_01_witness_value(s_atomic):
    t0 = time.perf_counter()
    value = evaluate(build_witness(zoo.extremal_atomic_map()),
                     detected_ppt_state())
    elapsed = time.perf_counter() - t0
    want = 2.0 / 7.0 - 2.0 * RT2 / 7.0
    ok = abs(value - want) <= 1e-12 and elapsed < 0.1
    report("criterion 1 (witness value)", ok,
           f"Tr(W rho) = {value:.15f}, target 2/7 - 2*sqrt(2)/7, "
           f"|diff| = {abs(value - want):.2e} <= 1e-12, {elapsed * 1e3:.1f} ms")


def test_criterion_02_witness_matrix(w_atomic):
    ref = np.zeros((9, 9), dtype=complex)
    ref[0, 0] = ref[1, 1] = ref[3, 3] = ref[4, 4] = 0.5
    ref[8, 8] = 1.0
    ref[0, 8] = ref[8, 0] = ref[5, 7] = ref[7, 5] = 1.0 / RT2
    entry_err = float(np.abs(w_atomic.matrix - ref).max())
    min_eig = float(np.linalg.eigvalsh(w_atomic.matrix).min())
    ok = entry_err <= 1e-12 and abs(min_eig + 1.0 / RT2) <= 1e-10
    report("criterion 2 (witness matrix)", ok,
           f"entrywise error {entry_err:.2e} <= 1e-12, "
           f"min eigenvalue {min_eig:.12f} = -1/sqrt(2) +- 1e-10")


def test_criterion_03_stable_subspace(s_atomic):
    sub = compute_stable_subspace(s_atomic)
    r12 = sub.membership_residual(P12)
    r3 = sub.membership_residual(P3)
    cls = classify_jordan_subalgebra(sub)
    ok = sub.dim == 2 and r12 <= 1e-9 and r3 <= 1e-9 and \
        cls is JordanClass.COMMUTATIVE_2
    report("criterion 3 (stable subspace)", ok,
           f"dim {sub.dim}, residuals {r12:.2e}/{r3:.2e} <= 1e-9, class {cls.value}")


def test_criterion_04_limit_map(s_atomic):
    lim = conditional_expectation(HSSubspace(3, np.stack([P12 / RT2, P3])))
    worst_ratio = 0.0
    for k in range(1, 31):
        gap = np.linalg.norm(s_atomic.power(k).mat - lim.mat, 2)
        worst_ratio = max(worst_ratio, gap / (2.0 * 2.0 ** (-k / 2)))
    tail = float(np.linalg.norm(s_atomic.power(60).mat - lim.mat, 2))
    ok = worst_ratio <= 1.0 and tail <= 1e-9
    report("criterion 4 (limit map)", ok,
           f"max gap/bound over k=1..30 is {worst_ratio:.3f} <= 1, "
           f"gap at k=60 is {tail:.2e} <= 1e-9")


def test_criterion_05_atomicity_evidence(s_atomic):
    d1 = kadison_schwarz_defect(s_atomic, P12 + matrix_unit(2, 1))
    d2 = kadison_schwarz_defect(s_atomic.compose(zoo.transpose_map(3)),
                                P12 + matrix_unit(2, 0))
    cp = is_completely_positive(s_atomic)
    cocp = is_completely_copositive(s_atomic)
    ok = d1 < -1e-6 and d2 < -1e-6 and not cp and not cocp
    report("criterion 5 (atomicity evidence)", ok,
           f"defects {d1:.6f}, {d2:.6f} < -1e-6; CP {cp}, co-CP {cocp}")


def test_criterion_06_ppt_detection(w_atomic):
    rho = detected_ppt_state()
    trace = complex(np.trace(rho))
    psd = is_psd(rho)
    ppt = witnesses.is_ppt(rho, (3, 3))
    value = evaluate(w_atomic, rho)
    ok = psd and abs(trace - 1.0) <= 1e-12 and ppt and value < 0
    report("criterion 6 (PPT detection)", ok,
           f"PSD {psd}, trace err {abs(trace - 1.0):.2e} <= 1e-12, PPT {ppt}, "
           f"witness value {value:.6f} < 0 certifies a PPT entangled state")


def test_criterion_07_zero_trace_identity(s_atomic):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        eta2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        eta2 /= np.linalg.norm(eta2)
        ups = np.array([eta2[0], np.conj(eta2[1])]) / RT2
        xi = np.array([-2.0 * ups[0], -2.0 * ups[1], 1.0])
        eta3 = np.array([eta2[0], eta2[1], 1.0])
        p_xi = np.outer(xi, xi.conj())
        worst = max(worst, abs(np.trace(p_xi @ s_atomic(
            np.outer(eta3, eta3.conj())))))
    ok = worst <= 1e-9
    report("criterion 7 (zero-trace identity)", ok,
           f"max |pairing| over 200 seeded unit directions = {worst:.2e} <= 1e-9")


def test_criterion_08_structure_clause_suite(s_atomic):
    maps = [("zoo:" + name, zoo.build_named(name)) for name in zoo.ZOO_NAMES]
    maps += [(f"random:{seed}", zoo.random_bistochastic(
        3, components=1 + seed % 4, seed=seed)) for seed in range(50)]
    worst = 0.0
    worst_tag = ""
    for idx, (tag, s) in enumerate(maps):
        rep = verify_prop1(s, samples=6, seed=1000 + idx, tol=1e-8)
        peak = max(rep.residuals.values())
        if peak > worst:
            worst, worst_tag = peak, tag
        if not rep.all_passed:
            break
    ok = worst <= 1e-8
    report("criterion 8 (structure clauses a-g)", ok,
           f"{len(maps)} maps (5 named + 50 seeded random), worst residual "
           f"{worst:.2e} at {worst_tag} <= 1e-8")


def test_criterion_09_expectation_round_trip():
    worst_dist = 0.0
    worst_min = 0.0
    for sub, cls in zip(zoo.canonical_subalgebras(), zoo.CANONICAL_CLASSES):
        e = conditional_expectation(sub)
        assert is_bistochastic(e), cls
        verdict = positivity_probe(e, seed=42)
        assert not verdict.violation, (cls, verdict.min_value)
        worst_min = min(worst_min, verdict.min_value)
        back = compute_stable_subspace(e)
        worst_dist = max(worst_dist, back.distance(sub))
    ok = worst_dist <= 1e-8
    report("criterion 9 (expectation round-trip)", ok,
           f"7 subalgebras: bistochastic, probe min {worst_min:.2e} "
           f"(no violation at full budget), max subspace distance "
           f"{worst_dist:.2e} <= 1e-8")


def test_criterion_10_choi_theorem_equivalence():
    disagreements = 0
    cases = 0
    t = zoo.transpose_map(3)
    for seed in range(25):
        base = zoo.random_kraus_map(3, terms=1 + seed % 3, seed=seed)
        for s in (base, base.compose(t)):
            cases += 1
            if is_completely_positive(s) != is_psd(build_witness(s).matrix):
                disagreements += 1
    ok = disagreements == 0 and cases == 50
    report("criterion 10 (Choi-theorem equivalence)", ok,
           f"{cases} maps (Kraus-built CP and transposition composites), "
           f"{disagreements} disagreements between the two routes")


def test_criterion_11_choi_map():
    cm = zoo.choi_map()
    dim = compute_stable_subspace(cm).dim
    bis = is_bistochastic(cm)
    cp = is_completely_positive(cm)
    cocp = is_completely_copositive(cm)
    ok = dim == 1 and bis and not cp and not cocp
    report("criterion 11 (strongly ergodic Choi map)", ok,
           f"stable dim {dim} (strongly ergodic), bistochastic {bis}, "
           f"CP {cp}, co-CP {cocp}")
