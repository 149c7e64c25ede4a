"""Command-line front end.

Subcommands
-----------
analyze MAP      full positivity / decomposition battery for one map
witness MAP      emit the entanglement witness, evaluate or build states
demo-paper       re-derive every hard-coded reference number and check it
verify SUITE     property suites over randomly generated maps
export MAP       write a zoo map in the superoperator JSON format

MAP is either a zoo name (paper-s, choi, transpose, identity,
unitary-conj) or a path to a superoperator JSON file.  States are
``paper-ppt``, ``maximally-mixed`` or a path to a state JSON file.

Exit codes: 0 success, 1 assertion/property failure, 2 input error,
3 internal numerical verification failure.  All commands are
deterministic given (--seed, --tol, --budget); JSON output is
byte-identical across reruns (timings are text-only unless --timings).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels, matcore, supermaps, stable, witnesses, zoo
from .matcore import VerificationError

RT2 = np.sqrt(2.0)


# --- input resolution -------------------------------------------------------

def load_map(source: str, tol: float, seed: int) -> tuple[str, supermaps.SuperOperator]:
    if source in zoo.ZOO_NAMES:
        return source, zoo.build_named(source, seed=seed)
    with open(source) as fh:
        obj = json.load(fh)
    return source, supermaps.superop_from_json(obj, tol=tol)


def load_state(source: str, dim: int, tol: float) -> np.ndarray:
    if source == "paper-ppt":
        return witnesses.detected_ppt_state()
    if source == "maximally-mixed":
        return np.eye(dim, dtype=np.complex128) / dim
    with open(source) as fh:
        obj = json.load(fh)
    rho, _ = witnesses.state_from_json(obj)
    return witnesses.check_density_matrix(rho, tol)


# --- output ------------------------------------------------------------------

def _is_matrix_obj(obj) -> bool:
    return isinstance(obj, dict) and {"rows", "cols", "data"} <= set(obj)


def _matrix_lines(obj, pad):
    rows, cols = obj["rows"], obj["cols"]
    out = []
    for i in range(rows):
        cells = []
        for j in range(cols):
            re_, im = obj["data"][i * cols + j]
            cells.append(f"{re_:+.6g}" if im == 0 else f"{re_:+.6g}{im:+.6g}j")
        out.append(pad + "[ " + "  ".join(f"{c:>12}" for c in cells) + " ]")
    if "dims" in obj:
        out.append(f"{pad}dims: {obj['dims']}")
    return out


def _render_text(obj, indent=0, lines=None):
    lines = [] if lines is None else lines
    pad = "  " * indent
    if _is_matrix_obj(obj):
        lines.extend(_matrix_lines(obj, pad))
    elif isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                _render_text(val, indent + 1, lines)
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)):
                _render_text(val, indent, lines)
            else:
                lines.append(f"{pad}- {_scalar(val)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _scalar(val):
    if isinstance(val, float):
        return f"{val:.12g}"
    return val


def emit(args, payload: dict, timings: dict | None = None) -> None:
    if args.format == "json":
        if timings and getattr(args, "timings", False):
            payload = dict(payload, timings=timings)
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        shown = dict(payload)
        if timings:
            shown["timings_s"] = {k: round(v, 4) for k, v in timings.items()}
        text = "\n".join(_render_text(shown))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- analyze -----------------------------------------------------------------

@dataclass
class AnalysisReport:
    """Aggregate verdicts for one map; serializes losslessly to JSON."""

    source: str
    n: int
    backend: str
    bistochastic: bool
    positivity: dict
    completely_positive: bool
    completely_copositive: bool
    ks_defects: dict | None = None
    stable_dim: int | None = None
    jordan_class: str | None = None
    automorphism_residual: float | None = None
    sweeping_sup_norm_at_k: list = field(default_factory=list)
    extremality: dict | None = None
    witness_min_eigenvalue: float | None = None

    def to_json(self) -> dict:
        return {
            "source": self.source, "n": self.n, "backend": self.backend,
            "bistochastic": self.bistochastic, "positivity": self.positivity,
            "completely_positive": self.completely_positive,
            "completely_copositive": self.completely_copositive,
            "ks_defects": self.ks_defects, "stable_dim": self.stable_dim,
            "jordan_class": self.jordan_class,
            "automorphism_residual": self.automorphism_residual,
            "sweeping_sup_norm_at_k": self.sweeping_sup_norm_at_k,
            "extremality": self.extremality,
            "witness_min_eigenvalue": self.witness_min_eigenvalue,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnalysisReport":
        return cls(**obj)


def cmd_analyze(args) -> int:
    timings: dict = {}
    t0 = time.perf_counter()
    name, s = load_map(args.map, args.tol, args.seed)
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    bis = supermaps.is_bistochastic(s, args.tol)
    verdict = supermaps.positivity_probe(s, budget=args.budget, seed=args.seed,
                                         tol=args.tol)
    cp = supermaps.is_completely_positive(s, args.tol)
    cocp = supermaps.is_completely_copositive(s, args.tol)
    timings["positivity"] = time.perf_counter() - t0

    report = AnalysisReport(
        source=name, n=s.n, backend=kernels.BACKEND, bistochastic=bis,
        positivity={"status": verdict.status, "min_value": verdict.min_value},
        completely_positive=cp, completely_copositive=cocp)

    if s.n == 3:
        t0 = time.perf_counter()
        e32 = matcore.matrix_unit(2, 1)
        e31 = matcore.matrix_unit(2, 0)
        st = s.compose(zoo.transpose_map(3))
        report.ks_defects = {
            "B=P12+E32": supermaps.kadison_schwarz_defect(s, zoo.P12 + e32),
            "transposed,B=P12+E31": supermaps.kadison_schwarz_defect(st, zoo.P12 + e31),
        }
        timings["ks"] = time.perf_counter() - t0

    if bis:
        t0 = time.perf_counter()
        dec = stable.decompose(s, tol=args.tol, seed=args.seed)
        report.stable_dim = dec.stable.dim
        report.jordan_class = dec.jordan_class.value
        report.automorphism_residual = dec.automorphism_residual
        report.sweeping_sup_norm_at_k = [float(x) for x in dec.sweeping_sup_norm_at_k]
        if s.n == 3:
            report.extremality = stable.classification_evidence(s, args.tol).to_json()
        timings["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    w = witnesses.build_witness(s, args.tol)
    spectrum = kernels.jacobi_eigvalsh((w.matrix + w.matrix.conj().T) / 2.0)
    report.witness_min_eigenvalue = float(spectrum.min())
    timings["witness"] = time.perf_counter() - t0

    emit(args, report.to_json(), timings)
    return 0


# --- witness -----------------------------------------------------------------

def cmd_witness(args) -> int:
    name, s = load_map(args.map, args.tol, args.seed)
    w = witnesses.build_witness(s, args.tol)
    payload: dict = {"source": name, "witness": witnesses.witness_to_json(w)}

    if args.state:
        rho = load_state(args.state, w.n ** 2, args.tol)
        value = witnesses.evaluate(w, rho, args.tol)
        payload["evaluation"] = {
            "state": args.state,
            "value": value,
            "detected": bool(value < -args.tol),
            "ppt": witnesses.is_ppt(rho, (w.n, w.n), args.tol),
        }

    if args.construct:
        rho0 = load_state(args.state, w.n ** 2, args.tol) if args.state else None
        cert = witnesses.construct_detected_state(w, rho0, lam=args.lam,
                                                  tol=args.tol)
        payload["certificate"] = cert.to_json()

    emit(args, payload)
    return 0


# --- demo-paper --------------------------------------------------------------

def _reference_witness_matrix() -> np.ndarray:
    w = np.zeros((9, 9), dtype=np.complex128)
    w[0, 0] = w[1, 1] = w[3, 3] = w[4, 4] = 0.5
    w[8, 8] = 1.0
    w[0, 8] = w[8, 0] = w[5, 7] = w[7, 5] = 1.0 / RT2
    return w


def _direct_action(a: np.ndarray) -> np.ndarray:
    """Entrywise reference formula for the extremal atomic map."""
    out = np.zeros((3, 3), dtype=np.complex128)
    out[0, 0] = out[1, 1] = 0.5 * (a[0, 0] + a[1, 1])
    out[0, 2] = a[0, 2] / RT2
    out[1, 2] = a[2, 1] / RT2
    out[2, 0] = a[2, 0] / RT2
    out[2, 1] = a[1, 2] / RT2
    out[2, 2] = a[2, 2]
    return out


def run_demo_checks(tol: float, seed: int, budget: int, ppt_state=None):
    """Yield (name, callable) pairs re-deriving every reference value.

    Each callable raises AssertionError with a diagnostic on mismatch.
    """
    s = zoo.extremal_atomic_map()
    st = s.compose(zoo.transpose_map(3))
    rng = np.random.default_rng(seed)
    w_ref = _reference_witness_matrix()
    rho = witnesses.detected_ppt_state() if ppt_state is None else ppt_state
    e = matcore.matrix_unit

    def close(x, y, what, scale=1.0):
        err = float(np.max(np.abs(np.asarray(x) - np.asarray(y))))
        assert err <= tol * max(1.0, scale), f"{what}: deviation {err:.3e}"

    def projections_of_eq6():
        close(matcore.rank_one([1, 0, 0]), zoo.P1, "rank_one(e1) != P1")
        close(matcore.rank_one([0, 0, 1]), zoo.P3, "rank_one(e3) != P3")

    def map_matches_formula():
        for _ in range(20):
            a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            close(s(a), _direct_action(a), "map disagrees with its formula")

    def unital_and_fixed_points():
        eye = np.eye(3)
        close(s(eye), eye, "map does not fix the identity")
        close(s(zoo.P3), zoo.P3, "map does not fix P3")
        close(s(e(1, 2)), e(2, 1) / RT2, "image of E23 is not E32/sqrt2")

    def bistochastic():
        assert supermaps.is_bistochastic(s, tol), "map is not bistochastic"

    def hs_contraction():
        assert supermaps.hs_contraction_check(s, trials=300, seed=seed, tol=tol), \
            "map is not an HS contraction"

    def rank_one_schur():
        eta = np.array([1.0, 0.0, 1.0]) / RT2
        assert matcore.schur_psd_check(s(matcore.rank_one(eta)), 2, tol), \
            "S(P_eta) failed the Schur PSD check"

    def positivity_probe():
        verdict = supermaps.positivity_probe(s, budget=budget, seed=seed, tol=tol)
        assert not verdict.violation, \
            f"positivity probe found min {verdict.min_value:.3e}"

    def not_cp_not_cocp():
        assert not supermaps.is_completely_positive(s, tol), "map must not be CP"
        assert not supermaps.is_completely_copositive(s, tol), "map must not be co-CP"

    def ks_violations():
        d1 = supermaps.kadison_schwarz_defect(s, zoo.P12 + e(2, 1))
        d2 = supermaps.kadison_schwarz_defect(st, zoo.P12 + e(2, 0))
        assert d1 < -1e-6, f"KS defect at P12+E32 is {d1:.3e}"
        assert d2 < -1e-6, f"transposed KS defect at P12+E31 is {d2:.3e}"

    def stable_subspace():
        sub = stable.compute_stable_subspace(s, tol)
        assert sub.dim == 2, f"stable dimension {sub.dim} != 2"
        assert sub.membership_residual(zoo.P12) <= tol, "P12 not in stable subspace"
        assert sub.membership_residual(zoo.P3) <= tol, "P3 not in stable subspace"
        assert stable.classify_jordan_subalgebra(sub) == stable.JordanClass.COMMUTATIVE_2

    def isometric_on_stable():
        sub = stable.compute_stable_subspace(s, tol)
        back = s.adjoint().compose(s)
        for b in sub.basis:
            close(back(b), b, "S*S is not the identity on the stable subspace")

    def limit_formula():
        sub = stable.HSSubspace(3, np.stack([zoo.P12 / RT2, zoo.P3]))
        lim = stable.conditional_expectation(sub)
        for k in (1, 2, 5, 10, 30):
            gap = np.linalg.norm(s.power(k).mat - lim.mat, 2)
            assert gap <= 2.0 * 2.0 ** (-k / 2), f"power {k} gap {gap:.3e}"
        gap = np.linalg.norm(s.power(60).mat - lim.mat, 2)
        assert gap <= 1e-9, f"power 60 gap {gap:.3e}"
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        want = 0.5 * np.trace(zoo.P12 @ a) * zoo.P12 + np.trace(zoo.P3 @ a) * zoo.P3
        close(lim(a), want, "limit map disagrees with its closed form", scale=10)

    def prop1_clauses():
        rep = stable.verify_prop1(s, samples=8, seed=seed, tol=max(tol, 1e-10))
        assert rep.all_passed, f"structure residuals {rep.residuals}"
        parts = matcore.spectral_projections(zoo.P12 + 2 * zoo.P3)
        assert len(parts) == 2
        close(parts[0][1], zoo.P12, "projection at 1 is not P12")
        close(parts[1][1], zoo.P3, "projection at 2 is not P3")

    def witness_matrix():
        w = witnesses.build_witness(s, tol)
        close(w.matrix, w_ref, "witness disagrees with its reference matrix")
        assert not matcore.is_psd(w.matrix, tol), "witness must not be PSD"

    def witness_spectrum():
        vals, vecs = witnesses.negative_eigenspace(witnesses.build_witness(s, tol))
        assert vals.size == 1, f"expected one negative eigenvalue, got {vals.size}"
        assert abs(vals[0] + 1 / RT2) <= max(tol, 1e-12) * 10, f"eigenvalue {vals[0]}"
        v = vecs[:, 0]
        assert abs(abs(v[5]) - 1 / RT2) <= 1e-6 and abs(abs(v[7]) - 1 / RT2) <= 1e-6, \
            "negative eigenvector is not supported on components 5 and 7"

    def detected_state():
        tr = complex(np.trace(rho))
        assert abs(tr - 1.0) <= max(tol, 1e-12) * 10, f"state trace {tr}"
        assert matcore.is_psd(rho, tol), "state is not PSD"
        assert witnesses.is_ppt(rho, (3, 3), tol), "state is not PPT"
        pt = matcore.partial_transpose(rho, (3, 3))
        assert matcore.is_psd(pt, tol), "partial transpose is not PSD"

    def detection_value():
        w = witnesses.build_witness(s, tol)
        value = witnesses.evaluate(w, rho, tol)
        want = 2.0 / 7.0 - 2.0 * RT2 / 7.0
        assert abs(value - want) <= max(tol, 1e-12) * 10, \
            f"witness value {value!r} != 2/7 - 2*sqrt(2)/7"
        assert value < 0, "witness value must be negative"

    def zero_trace_identity():
        worst = 0.0
        for _ in range(200):
            eta2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            eta2 /= np.linalg.norm(eta2)
            ups = np.array([eta2[0], np.conj(eta2[1])]) / RT2
            xi = np.array([-2 * ups[0], -2 * ups[1], 1.0])
            eta3 = np.array([eta2[0], eta2[1], 1.0])
            val = np.trace(matcore.rank_one(xi) @ s(matcore.rank_one(eta3)))
            worst = max(worst, abs(val))
        assert worst <= max(tol, 1e-12) * 100, f"zero-trace identity residual {worst:.3e}"

    def hollow_two_positivity():
        verdict = supermaps.k_positivity_probe(s, 2, budget=min(budget, 60000),
                                               seed=seed, tol=tol)
        assert verdict.violation, "2-positivity probe found no violation"

    def automorphisms_fill_everything():
        u = zoo.random_unitary(3, seed=seed)
        sub = stable.compute_stable_subspace(zoo.jordan_automorphism(u), tol)
        assert sub.dim == 9, f"stable dimension {sub.dim} != 9"

    def ergodic_and_excluded_classes():
        ev = stable.classification_evidence(s, tol)
        assert ev.jordan_class == stable.JordanClass.COMMUTATIVE_2
        assert ev.consistent_with_extremality
        ev2 = stable.classification_evidence(zoo.choi_map(), tol)
        assert ev2.jordan_class == stable.JordanClass.SCALAR
        assert ev2.consistent_with_extremality
        diag = zoo.canonical_subalgebras()[2]
        ev3 = stable.classification_evidence(stable.conditional_expectation(diag), tol)
        assert ev3.jordan_class == stable.JordanClass.DIAGONAL
        assert not ev3.consistent_with_extremality

    return [
        ("coordinate projections", projections_of_eq6),
        ("map matches entrywise formula", map_matches_formula),
        ("unital with pinned images", unital_and_fixed_points),
        ("bistochastic", bistochastic),
        ("Hilbert-Schmidt contraction", hs_contraction),
        ("rank-one image passes Schur check", rank_one_schur),
        ("positivity probe finds no violation", positivity_probe),
        ("neither CP nor co-CP", not_cp_not_cocp),
        ("Kadison-Schwarz violations (atomicity evidence)", ks_violations),
        ("stable subspace is the two-block commutative algebra", stable_subspace),
        ("S*S = id on the stable subspace", isometric_on_stable),
        ("powers converge to the conditional expectation", limit_formula),
        ("stable-subspace structure clauses", prop1_clauses),
        ("witness equals its reference matrix", witness_matrix),
        ("witness negative eigenspace", witness_spectrum),
        ("reference state is a PPT density matrix", detected_state),
        ("witness value is 2/7 - 2*sqrt(2)/7", detection_value),
        ("zero-trace pairing identity", zero_trace_identity),
        ("2-positivity violation found", hollow_two_positivity),
        ("unitary conjugations have full stable subspace", automorphisms_fill_everything),
        ("stable-class trichotomy evidence", ergodic_and_excluded_classes),
    ]


def cmd_demo(args) -> int:
    ppt_state = None
    if args.ppt_state:
        with open(args.ppt_state) as fh:
            ppt_state, _ = witnesses.state_from_json(json.load(fh))
    checks = run_demo_checks(args.tol, args.seed, args.budget, ppt_state)
    failures = []
    for name, fn in checks:
        try:
            fn()
        except AssertionError as exc:
            failures.append((name, str(exc)))
            print(f"FAIL  {name}: {exc}")
        else:
            print(f"ok    {name}")
    total = len(checks)
    print(f"{total - len(failures)}/{total} reference checks passed "
          f"(backend: {kernels.BACKEND})")
    return 1 if failures else 0


# --- verify ------------------------------------------------------------------

def _fail(suite: str, detail: dict) -> int:
    print(json.dumps({"suite": suite, "counterexample": detail},
                     indent=2, sort_keys=True))
    return 1


def _suite_prop1(args) -> int:
    for trial in range(args.trials):
        seed = args.seed + trial
        s = zoo.random_bistochastic(3, components=1 + trial % 4, seed=seed)
        rep = stable.verify_prop1(s, samples=6, seed=seed, tol=1e-8)
        if not rep.all_passed:
            return _fail("prop1", {"trial": trial, "seed": seed,
                                   "report": rep.to_json(),
                                   "map": supermaps.superop_to_json(s)})
    print(f"prop1: {args.trials} random bistochastic maps passed")
    return 0


def _suite_contraction(args) -> int:
    rng = np.random.default_rng(args.seed)
    for trial in range(args.trials):
        seed = args.seed + trial
        s = zoo.random_bistochastic(3, components=1 + trial % 3, seed=seed)
        if not supermaps.is_bistochastic(s, args.tol) or \
           not supermaps.is_bistochastic(s.adjoint(), args.tol):
            return _fail("contraction", {"trial": trial, "seed": seed,
                                         "reason": "bistochasticity"})
        if not supermaps.hs_contraction_check(s, trials=100,
                                              seed=int(rng.integers(2 ** 31)),
                                              tol=args.tol):
            return _fail("contraction", {"trial": trial, "seed": seed,
                                         "reason": "norm increased"})
    print(f"contraction: {args.trials} random bistochastic maps passed")
    return 0


def _suite_choi_cp(args) -> int:
    t = zoo.transpose_map(3)
    for trial in range(args.trials):
        seed = args.seed + trial
        base = zoo.random_kraus_map(3, terms=1 + trial % 3, seed=seed)
        for tag, s in (("kraus", base), ("kraus-transposed", base.compose(t))):
            via_choi = supermaps.is_completely_positive(s, args.tol)
            via_witness = matcore.is_psd(
                witnesses.build_witness(s, args.tol).matrix, args.tol)
            if via_choi != via_witness:
                return _fail("choi-cp", {"trial": trial, "seed": seed, "kind": tag,
                                         "is_completely_positive": via_choi,
                                         "witness_psd": via_witness})
    print(f"choi-cp: {args.trials} Kraus maps and transposition composites agreed")
    return 0


def _suite_roundtrip(args) -> int:
    subs = list(zip(zoo.CANONICAL_CLASSES, zoo.canonical_subalgebras()))
    cases = [(cls, sub, "canonical") for cls, sub in subs]
    for trial in range(args.trials):
        u = zoo.random_unitary(3, seed=args.seed + trial)
        cls, sub = subs[trial % len(subs)]
        rotated = stable.HSSubspace(
            3, np.stack([u @ b @ u.conj().T for b in sub.basis]))
        cases.append((cls, rotated, f"rotated-{trial}"))
    for cls, sub, tag in cases:
        e = stable.conditional_expectation(sub)
        if not supermaps.is_bistochastic(e, args.tol):
            return _fail("roundtrip", {"case": tag, "reason": "not bistochastic"})
        verdict = supermaps.positivity_probe(e, budget=args.budget,
                                             seed=args.seed, tol=args.tol)
        if verdict.violation:
            return _fail("roundtrip", {"case": tag, "reason": "positivity",
                                       "min_value": verdict.min_value})
        back = stable.compute_stable_subspace(e, args.tol)
        dist = back.distance(sub)
        if dist > 1e-8:
            return _fail("roundtrip", {"case": tag, "reason": "stable subspace",
                                       "distance": dist})
        if stable.classify_jordan_subalgebra(back) is not cls:
            return _fail("roundtrip", {"case": tag, "reason": "classification"})
    print(f"roundtrip: {len(cases)} subalgebras round-tripped")
    return 0


def _suite_zero_trace(args) -> int:
    s = zoo.extremal_atomic_map()
    rng = np.random.default_rng(args.seed)
    for trial in range(args.trials):
        eta2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        eta2 /= np.linalg.norm(eta2)
        ups = np.array([eta2[0], np.conj(eta2[1])]) / RT2
        xi = np.array([-2 * ups[0], -2 * ups[1], 1.0])
        eta3 = np.array([eta2[0], eta2[1], 1.0])
        val = abs(np.trace(matcore.rank_one(xi) @ s(matcore.rank_one(eta3))))
        if val > args.tol:
            return _fail("zero-trace", {"trial": trial,
                                        "eta": [[z.real, z.imag] for z in eta2],
                                        "residual": float(val)})
    print(f"zero-trace: {args.trials} pairings vanished")
    return 0


SUITES = {
    "prop1": _suite_prop1,
    "contraction": _suite_contraction,
    "choi-cp": _suite_choi_cp,
    "roundtrip": _suite_roundtrip,
    "zero-trace": _suite_zero_trace,
}


def cmd_verify(args) -> int:
    return SUITES[args.suite](args)


# --- export ------------------------------------------------------------------

def cmd_export(args) -> int:
    name, s = load_map(args.map, args.tol, args.seed)
    emit(args, supermaps.superop_to_json(s, kind=args.kind))
    return 0


# --- parser ------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, reports: bool = True) -> None:
    p.add_argument("--tol", type=float, default=1e-9,
                   help="numerical tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=42,
                   help="master seed for all randomized steps (default 42)")
    p.add_argument("--budget", type=int, default=supermaps.DEFAULT_PROBE_BUDGET,
                   help="positivity probe grid effort (default 64^3)")
    if reports:
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="output rendering (default text)")
        p.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isosweep",
        description="stable subspaces, positivity batteries and entanglement "
                    "witnesses for maps of matrix algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full battery on one map")
    p.add_argument("map", help="zoo name or superoperator JSON path")
    p.add_argument("--timings", action="store_true",
                   help="include timings in JSON output (breaks rerun determinism)")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("witness", help="emit and evaluate the witness of a map")
    p.add_argument("map", help="zoo name or superoperator JSON path")
    p.add_argument("--state", default=None,
                   help="state to evaluate: paper-ppt, maximally-mixed, or JSON path")
    p.add_argument("--construct", action="store_true",
                   help="build a detected state from the bottom eigenvector")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="mixing weight for --construct (default 0.5)")
    _add_common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("demo-paper",
                       help="check every hard-coded reference value end to end")
    p.add_argument("--ppt-state", default=None,
                   help="override the reference PPT state fixture (negative control)")
    _add_common(p, reports=False)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("verify", help="run a property suite over random maps")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=50)
    _add_common(p, reports=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write a zoo map as superoperator JSON")
    p.add_argument("map", help="zoo name or superoperator JSON path")
    p.add_argument("--kind", choices=("basis-images", "choi"),
                   default="basis-images")
    _add_common(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"numerical verification failed: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
