"""Stable subspaces of bistochastic maps and their Jordan structure.

A bistochastic map S is a Hilbert-Schmidt contraction, so M_n splits
into the subspace on which every power of S and S* acts isometrically
(the *stable* subspace, a unital JB*-subalgebra on which S is a Jordan
automorphism) and its orthogonal complement, which S sweeps to zero.
This module computes that splitting, classifies the stable subalgebra
among the unital JB*-subalgebras of M_3, and builds the conditional
expectation (HS-orthogonal projection) onto a given subalgebra.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .matcore import (DEFAULT_TOL, VerificationError, as_matrix, hs_norm,
                      jordan_product, matrix_from_json, matrix_to_json,
                      spectral_projections)
from .supermaps import SuperOperator, is_bistochastic, vec_mat, unvec_mat

#: Eigenvalue threshold for intersecting two orthonormal-projector ranges:
#: an eigenvector of the averaged projector counts as common when its
#: eigenvalue exceeds this.
INTERSECT_EIG = 1.0 - 1e-8

#: Numerical self-checks never demand more than this, even when the user
#: tolerance is tightened to machine level.
VERIFY_FLOOR = 1e-12


class JordanClass(Enum):
    """The unital JB*-subalgebras of M_3, up to isomorphism.

    The seven classes have pairwise distinct complex dimensions
    1, 2, 3, 4, 5, 6, 9, so dimension determines the class once the
    closure checks pass.
    """

    SCALAR = "scalar"                                   # C 1
    COMMUTATIVE_2 = "commutative-2"                     # two orthogonal scalar blocks
    DIAGONAL = "diagonal"                               # three orthogonal scalar blocks
    SYMMETRIC_2_PLUS_SCALAR = "symmetric-2-plus-scalar"
    FULL_2_PLUS_SCALAR = "full-2-plus-scalar"
    SYMMETRIC_3 = "symmetric-3"
    FULL_3 = "full-3"
    UNRECOGNIZED = "unrecognized"


DIMENSION_TO_CLASS = {
    1: JordanClass.SCALAR,
    2: JordanClass.COMMUTATIVE_2,
    3: JordanClass.DIAGONAL,
    4: JordanClass.SYMMETRIC_2_PLUS_SCALAR,
    5: JordanClass.FULL_2_PLUS_SCALAR,
    6: JordanClass.SYMMETRIC_3,
    9: JordanClass.FULL_3,
}

#: Classes a stable subalgebra of an *extremal* bistochastic map on M_3
#: can have.  Any other class certifies non-extremality.
EXTREMAL_ADMISSIBLE = (JordanClass.SCALAR, JordanClass.COMMUTATIVE_2,
                       JordanClass.FULL_3)


class HSSubspace:
    """A subspace of M_n given by an HS-orthonormal matrix basis."""

    def __init__(self, n: int, basis, tol: float = DEFAULT_TOL):
        self.n = int(n)
        mats = np.asarray(basis, dtype=np.complex128)
        if mats.ndim != 3 or mats.shape[1:] != (self.n, self.n):
            raise ValueError(f"basis must have shape (d, {n}, {n}), got {mats.shape}")
        if mats.shape[0] > self.n ** 2:
            raise ValueError("basis has more elements than the space dimension")
        q = mats.reshape(mats.shape[0], self.n * self.n).T.copy()  # (n^2, d)
        gram = q.conj().T @ q
        if not np.allclose(gram, np.eye(mats.shape[0]), atol=max(tol, VERIFY_FLOOR)):
            raise ValueError("basis is not HS-orthonormal within tolerance")
        self.basis = mats
        self._q = q

    @classmethod
    def from_span(cls, mats, tol: float = DEFAULT_TOL) -> "HSSubspace":
        """Orthonormalize a spanning family (rank cut at 1e-12 relative)."""
        mats = [as_matrix(m) for m in mats]
        if not mats:
            raise ValueError("cannot build a subspace from an empty family")
        n = mats[0].shape[0]
        stack = np.stack([m.reshape(-1) for m in mats])
        _, s, vh = np.linalg.svd(stack, full_matrices=False)
        rank = int(np.sum(s > 1e-12 * max(1.0, float(s[0]))))
        return cls(n, vh[:rank].reshape(rank, n, n), tol=tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        """HS-orthogonal projector onto the subspace, as an n^2 x n^2 matrix
        acting on row-major vectorizations."""
        return self._q @ self._q.conj().T

    def project(self, a) -> np.ndarray:
        a = as_matrix(a)
        coeffs = self._q.conj().T @ a.reshape(-1)
        return (self._q @ coeffs).reshape(self.n, self.n)

    def membership_residual(self, a) -> float:
        """HS distance from ``a`` to the subspace."""
        a = as_matrix(a)
        return hs_norm(a - self.project(a))

    def contains(self, a, tol: float = DEFAULT_TOL) -> bool:
        return self.membership_residual(a) <= tol * max(1.0, hs_norm(a))

    def complement(self) -> "HSSubspace":
        full = np.linalg.svd(self._q, full_matrices=True)[0] if self.dim else np.eye(self.n ** 2, dtype=np.complex128)
        comp = full[:, self.dim:]
        basis = (comp.T.reshape(-1, self.n, self.n) if comp.shape[1]
                 else np.zeros((0, self.n, self.n), dtype=np.complex128))
        return HSSubspace(self.n, basis)

    def distance(self, other: "HSSubspace") -> float:
        """Spectral-norm distance between the two orthogonal projectors."""
        if other.n != self.n:
            raise ValueError("subspaces live on different algebras")
        d = self.projector() - other.projector()
        w = kernels.jacobi_eigvalsh(d)
        return float(np.abs(w).max()) if w.size else 0.0

    def __repr__(self):
        return f"HSSubspace(n={self.n}, dim={self.dim})"

    def to_json(self) -> dict:
        return {"n": self.n, "basis": [matrix_to_json(b) for b in self.basis]}

    @classmethod
    def from_json(cls, obj) -> "HSSubspace":
        try:
            n = int(obj["n"])
            mats = [matrix_from_json(b) for b in obj["basis"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed subspace object: {exc}") from exc
        return cls(n, np.stack(mats))


def _intersect(*factors: np.ndarray) -> np.ndarray:
    """Intersection of subspaces given by orthonormal-column matrices.

    Eigenvectors of the averaged projectors with eigenvalue above
    INTERSECT_EIG lie (numerically) in every range.
    """
    if any(f.shape[1] == 0 for f in factors):
        return factors[0][:, :0]
    avg = sum(f @ f.conj().T for f in factors) / len(factors)
    w, v = kernels.jacobi_eigh_batch(avg)
    return v[:, w >= INTERSECT_EIG]


def compute_stable_subspace(s: SuperOperator, tol: float = DEFAULT_TOL) -> HSSubspace:
    """The subspace on which all powers of S and S* act HS-isometrically.

    Equivalently (for bistochastic S) the intersection over k of the
    fixed spaces of the PSD contraction products S*^k S^k and S^k S*^k.
    Iteration stops once the intersection dimension is unchanged for n^2
    consecutive k, capped at 4 n^2, and the result is re-verified against
    the defining isometry conditions.
    """
    if not is_bistochastic(s, max(tol, VERIFY_FLOOR)):
        raise ValueError("stable subspace is defined for bistochastic maps only")
    n = s.n
    n2 = n * n
    mat = s.mat
    q = np.eye(n2, dtype=np.complex128)
    mk = np.eye(n2, dtype=np.complex128)
    k_max = 4 * n2
    stable_for = 0
    k_used = 0
    for k in range(1, k_max + 1):
        mk = mat @ mk
        dim_before = q.shape[1]
        t1 = mk.conj().T @ mk
        t2 = mk @ mk.conj().T
        pair = np.stack([(t1 + t1.conj().T) / 2.0, (t2 + t2.conj().T) / 2.0])
        w, v = kernels.jacobi_eigh_batch(pair)
        q = _intersect(q, v[0][:, w[0] >= 1.0 - tol], v[1][:, w[1] >= 1.0 - tol])
        k_used = k
        stable_for = stable_for + 1 if q.shape[1] == dim_before else 0
        if stable_for >= n2 or q.shape[1] == 0:
            break
    else:
        warnings.warn("stable-subspace iteration hit its cap of "
                      f"{k_max} powers before the dimension settled",
                      RuntimeWarning)

    vtol = max(tol, VERIFY_FLOOR)
    mk = np.eye(n2, dtype=np.complex128)
    for k in range(1, k_used + 1):
        mk = mat @ mk
        for col in range(q.shape[1]):
            b = q[:, col]
            if abs(np.linalg.norm(mk @ b) - 1.0) > vtol or \
               abs(np.linalg.norm(mk.conj().T @ b) - 1.0) > vtol or \
               np.linalg.norm(mk.conj().T @ (mk @ b) - b) > vtol or \
               np.linalg.norm(mk @ (mk.conj().T @ b) - b) > vtol:
                raise VerificationError(
                    f"computed stable subspace fails the isometry condition at "
                    f"power {k} (basis column {col})")

    basis = np.stack([unvec_mat(q[:, i], n) for i in range(q.shape[1])]) \
        if q.shape[1] else np.zeros((0, n, n), dtype=np.complex128)
    return HSSubspace(n, basis, tol=max(tol, VERIFY_FLOOR))


@dataclass(frozen=True)
class Prop1Report:
    """Residuals for the structural properties of a stable subspace:

    a) identity membership,
    b) closure under the adjoint,
    c) closure under the absolute value |A| = (A* A)^(1/2),
    d) closure under the anticommutator,
    e) spectral projections of Hermitian elements stay inside,
    f) images of projections under S and S* are projections of equal rank,
    g) S and S* preserve orthogonality of projections.
    """

    residuals: dict
    tol: float
    samples: int
    seed: int

    @property
    def passed(self) -> dict:
        return {k: v <= self.tol for k, v in self.residuals.items()}

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def to_json(self) -> dict:
        return {"residuals": {k: float(v) for k, v in self.residuals.items()},
                "passed": self.passed, "all_passed": self.all_passed,
                "tol": self.tol, "samples": self.samples, "seed": self.seed}


def _random_element(rng, sub: HSSubspace) -> np.ndarray:
    coeff = rng.normal(size=sub.dim) + 1j * rng.normal(size=sub.dim)
    a = np.tensordot(coeff, sub.basis, axes=(0, 0))
    norm = hs_norm(a)
    return a / norm if norm > 0 else a


def _random_hermitian_element(rng, sub: HSSubspace) -> np.ndarray:
    c = _random_element(rng, sub)
    a = c + c.conj().T
    norm = hs_norm(a)
    return a / norm if norm > 0 else a


def verify_prop1(s: SuperOperator, sub: HSSubspace | None = None,
                 samples: int = 10, seed: int = 0,
                 tol: float = 1e-8) -> Prop1Report:
    """Check the JB*-structure of the stable subspace clause by clause.

    Works on the basis plus ``samples`` random elements; projections for
    the later clauses are extracted from spectral decompositions of
    random Hermitian elements.  Report-valued: residuals never raise.
    """
    if sub is None:
        sub = compute_stable_subspace(s)
    rng = np.random.default_rng(seed)
    n = s.n
    adj = s.adjoint()
    res = {key: 0.0 for key in "abcdefg"}

    eye = np.eye(n, dtype=np.complex128)
    res["a"] = sub.membership_residual(eye / np.sqrt(n))

    projections = []
    for _ in range(samples):
        a = _random_element(rng, sub)
        res["b"] = max(res["b"], sub.membership_residual(a.conj().T))

        h = _random_hermitian_element(rng, sub)
        w, v = kernels.jacobi_eigh_batch(h)
        modulus = (v * np.abs(w)[None, :]) @ v.conj().T
        res["c"] = max(res["c"], sub.membership_residual(modulus))

        b = _random_element(rng, sub)
        res["d"] = max(res["d"], sub.membership_residual(a @ b + b @ a))

        parts = spectral_projections(h, tol=1e-8)
        group = []
        for _, proj in parts:
            res["e"] = max(res["e"], sub.membership_residual(proj))
            group.append(proj)
        projections.append(group)

    for group in projections:
        for p in group:
            for image in (s(p), adj(p)):
                res["f"] = max(res["f"],
                               hs_norm(image @ image - image),
                               hs_norm(image - image.conj().T),
                               abs(np.trace(image).real - np.trace(p).real))
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                p, qq = group[i], group[j]
                res["g"] = max(res["g"],
                               hs_norm(s(p) @ s(qq)),
                               hs_norm(adj(p) @ adj(qq)))

    return Prop1Report(residuals=res, tol=tol, samples=samples, seed=seed)


@dataclass(frozen=True)
class DecompositionReport:
    """Summary of the isometric-sweeping decomposition of a map."""

    stable: HSSubspace
    jordan_class: JordanClass
    automorphism_residual: float
    sweeping_sup_norm_at_k: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"stable_dim": self.stable.dim,
                "jordan_class": self.jordan_class.value,
                "automorphism_residual": float(self.automorphism_residual),
                "sweeping_sup_norm_at_k":
                    [float(x) for x in self.sweeping_sup_norm_at_k]}


def decompose(s: SuperOperator, tol: float = DEFAULT_TOL, k_report: int = 20,
              samples: int = 10, seed: int = 0) -> DecompositionReport:
    """Compute the stable subspace, verify that S is a Jordan automorphism
    on it, and record how fast powers of S sweep the complement to zero.

    ``sweeping_sup_norm_at_k[k-1]`` is the sup over an orthonormal basis
    of the complement of ||S^k(b)||_HS.
    """
    sub = compute_stable_subspace(s, tol)
    rng = np.random.default_rng(seed)

    # The multiplicative identity S(A*A) = S(A)* S(A) is checked on
    # Hermitian elements, where A*A = A o A stays inside the subalgebra.
    # For non-normal A of a Jordan-closed but associatively non-closed
    # stable subalgebra (symmetric matrices, say), A*A can leave it and
    # the identity genuinely fails, so the general sample uses the
    # Jordan-product form.
    resid = 0.0
    for _ in range(samples):
        a = _random_element(rng, sub)
        b = _random_element(rng, sub)
        h = _random_hermitian_element(rng, sub)
        resid = max(resid,
                    hs_norm(s(jordan_product(a, b)) - jordan_product(s(a), s(b))),
                    hs_norm(s(h.conj().T @ h) - s(h).conj().T @ s(h)))
    if resid > max(10 * tol, 1e-10):
        raise VerificationError(
            f"map is not a Jordan automorphism on its stable subspace "
            f"(residual {resid:.3e})")

    comp = sub.complement()
    sweep = []
    if comp.dim:
        mk = np.eye(s.n ** 2, dtype=np.complex128)
        vecs = np.stack([vec_mat(b) for b in comp.basis], axis=1)
        for _ in range(k_report):
            mk = s.mat @ mk
            sweep.append(float(np.linalg.norm(mk @ vecs, axis=0).max()))

    jordan_class = (classify_jordan_subalgebra(sub, tol=max(tol, 1e-10))
                    if s.n == 3 else JordanClass.UNRECOGNIZED)
    return DecompositionReport(stable=sub, jordan_class=jordan_class,
                               automorphism_residual=resid,
                               sweeping_sup_norm_at_k=sweep)


def _closure_residuals(sub: HSSubspace) -> tuple[float, float, float]:
    """(identity, adjoint, Jordan-product) membership residuals of a basis."""
    n = sub.n
    eye_res = sub.membership_residual(np.eye(n, dtype=np.complex128) / np.sqrt(n))
    star = max((sub.membership_residual(b.conj().T) for b in sub.basis), default=0.0)
    jordan = 0.0
    for i in range(sub.dim):
        for j in range(i, sub.dim):
            jordan = max(jordan, sub.membership_residual(
                jordan_product(sub.basis[i], sub.basis[j])))
    return eye_res, star, jordan


def classify_jordan_subalgebra(sub: HSSubspace, tol: float = DEFAULT_TOL) -> JordanClass:
    """Classify a unital JB*-subalgebra of M_3 by complex dimension.

    The dimension determines the isomorphism class (the seven classes
    have distinct dimensions); closure under adjoint and Jordan product
    is verified first, plus commutativity for dimensions 2 and 3, and
    ``UNRECOGNIZED`` is returned when any of those sanity checks fail.
    Raises ``ValueError`` when the identity is not in the subspace.
    """
    if sub.n != 3:
        raise ValueError("classification is implemented for subalgebras of M_3")
    vtol = max(tol, VERIFY_FLOOR)
    eye_res, star, jordan = _closure_residuals(sub)
    if eye_res > vtol:
        raise ValueError("subspace does not contain the identity")
    if star > vtol or jordan > vtol:
        return JordanClass.UNRECOGNIZED
    cls = DIMENSION_TO_CLASS.get(sub.dim, JordanClass.UNRECOGNIZED)
    if cls in (JordanClass.COMMUTATIVE_2, JordanClass.DIAGONAL):
        comm = max(hs_norm(a @ b - b @ a)
                   for a in sub.basis for b in sub.basis)
        if comm > vtol:
            return JordanClass.UNRECOGNIZED
    return cls


def conditional_expectation(sub: HSSubspace, tol: float = DEFAULT_TOL) -> SuperOperator:
    """HS-orthogonal projection onto a unital JB*-subalgebra, as a map.

    For a genuine unital JB*-subalgebra this projection is bistochastic,
    self-adjoint, idempotent and positive, and its stable subspace is the
    subalgebra itself.  Closure failures raise ``ValueError`` since the
    projection onto a non-subalgebra need not be positive.
    """
    vtol = max(tol, VERIFY_FLOOR)
    eye_res, star, jordan = _closure_residuals(sub)
    if eye_res > vtol:
        raise ValueError("subspace does not contain the identity")
    if star > vtol:
        raise ValueError("subspace is not closed under the adjoint")
    if jordan > vtol:
        raise ValueError("subspace is not closed under the Jordan product")
    q = np.stack([vec_mat(b) for b in sub.basis], axis=1) \
        if sub.dim else np.zeros((sub.n ** 2, 0), dtype=np.complex128)
    return SuperOperator(sub.n, q @ q.conj().T)


@dataclass(frozen=True)
class ClassificationEvidence:
    """Where the stable subalgebra of a map sits in the extremal trichotomy.

    Extremal bistochastic maps on M_3 can only have stable subalgebras of
    class ``scalar``, ``commutative-2`` or ``full-3``; a class outside
    that list therefore certifies non-extremality, while a class inside
    it is merely consistent with extremality (necessary, not sufficient).
    """

    jordan_class: JordanClass
    stable_dim: int
    consistent_with_extremality: bool
    note: str

    def to_json(self) -> dict:
        return {"jordan_class": self.jordan_class.value,
                "stable_dim": self.stable_dim,
                "consistent_with_extremality": self.consistent_with_extremality,
                "note": self.note}


def classification_evidence(s: SuperOperator,
                            tol: float = DEFAULT_TOL) -> ClassificationEvidence:
    if s.n != 3:
        raise ValueError("the extremal trichotomy applies to maps of M_3")
    sub = compute_stable_subspace(s, tol)
    cls = classify_jordan_subalgebra(sub, tol=max(tol, 1e-10))
    ok = cls in EXTREMAL_ADMISSIBLE
    if ok:
        note = (f"stable subalgebra of class '{cls.value}' is admissible for an "
                "extremal bistochastic map (necessary evidence, not a proof)")
    else:
        note = (f"stable subalgebra of class '{cls.value}' rules out extremality "
                "of the map")
    return ClassificationEvidence(jordan_class=cls, stable_dim=sub.dim,
                                  consistent_with_extremality=ok, note=note)
