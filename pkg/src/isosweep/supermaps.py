"""Superoperators on M_n and their positivity test battery.

A linear map S: M_n -> M_n is stored as its n^2 x n^2 matrix acting on
column-stacked (Fortran-order) vectorizations: ``vec(A)[j*n+i] = A[i,j]``.
Vectorization is an isometry of the Hilbert-Schmidt inner product, so
the adjoint map S* (defined by Tr S*(A) B = Tr A S(B)) is simply the
conjugate transpose of the action matrix.

Positivity of a map is undecidable by sampling, so the probes here are
refutation-only: they either exhibit a concrete violation or report that
none was found within the search budget.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .matcore import (DEFAULT_TOL, as_matrix, basis_units, hs_norm,
                      is_hermitian, matrix_from_json, matrix_to_json, _square)

#: Default probe effort: approximate number of deterministic grid points
#: on the torus parametrization of the unit sphere (64^3 by default),
#: on top of which local descents are run from random restarts.
DEFAULT_PROBE_BUDGET = 64 ** 3
DEFAULT_RESTARTS = 200

VIOLATION_FOUND = "violation-found"
NO_VIOLATION_FOUND = "no-violation-found"


def vec_mat(a) -> np.ndarray:
    """Column-stacked vectorization of a matrix."""
    return np.asarray(a, dtype=np.complex128).reshape(-1, order="F")


def unvec_mat(v, n: int) -> np.ndarray:
    """Inverse of ``vec_mat``."""
    return np.asarray(v, dtype=np.complex128).reshape(n, n, order="F")


class SuperOperator:
    """A linear map on M_n, represented by its action matrix."""

    def __init__(self, n: int, mat):
        self.n = int(n)
        m = as_matrix(mat)
        if m.shape != (self.n ** 2, self.n ** 2):
            raise ValueError(
                f"action matrix must be {self.n ** 2} x {self.n ** 2}, got {m.shape}")
        self.mat = m

    @classmethod
    def from_basis_images(cls, n: int, images) -> "SuperOperator":
        """Build the map sending E_jk to images[j*n + k] (row-major order)."""
        images = list(images)
        if len(images) != n * n:
            raise ValueError(f"need {n * n} images, got {len(images)}")
        mat = np.zeros((n * n, n * n), dtype=np.complex128)
        for j in range(n):
            for k in range(n):
                img = as_matrix(images[j * n + k])
                if img.shape != (n, n):
                    raise ValueError(f"image {j},{k} has shape {img.shape}")
                mat[:, k * n + j] = vec_mat(img)
        return cls(n, mat)

    @classmethod
    def from_callable(cls, n: int, fn) -> "SuperOperator":
        """Build from a plain function on matrices (evaluated on all E_jk)."""
        return cls.from_basis_images(
            n, [fn(u) for u in basis_units(n)])

    def __call__(self, a) -> np.ndarray:
        a = _square(a)
        if a.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n} x {self.n} matrix, got {a.shape}")
        return unvec_mat(self.mat @ vec_mat(a), self.n)

    def adjoint(self) -> "SuperOperator":
        """Hilbert-Schmidt adjoint S*."""
        return SuperOperator(self.n, self.mat.conj().T)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """Composition self o other (apply ``other`` first)."""
        if other.n != self.n:
            raise ValueError("cannot compose maps on different algebras")
        return SuperOperator(self.n, self.mat @ other.mat)

    __matmul__ = compose

    def power(self, k: int) -> "SuperOperator":
        if k < 0:
            raise ValueError("negative powers are not defined for general maps")
        return SuperOperator(self.n, np.linalg.matrix_power(self.mat, k))

    def __repr__(self):
        return f"SuperOperator(n={self.n})"


def apply(s: SuperOperator, a) -> np.ndarray:
    return s(a)


def adjoint(s: SuperOperator) -> SuperOperator:
    return s.adjoint()


def compose(s: SuperOperator, t: SuperOperator) -> SuperOperator:
    return s.compose(t)


def power(s: SuperOperator, k: int) -> SuperOperator:
    return s.power(k)


def identity_superop(n: int) -> SuperOperator:
    return SuperOperator(n, np.eye(n * n, dtype=np.complex128))


def transposition_superop(n: int) -> SuperOperator:
    """The transposition map t: A -> A^t."""
    return SuperOperator.from_callable(n, lambda u: u.T.copy())


def choi_matrix(s: SuperOperator) -> np.ndarray:
    """Choi matrix sum_ij E_ij (x) S(E_ij), obtained by reshuffling the
    action matrix (an involutive index permutation)."""
    n = s.n
    return (s.mat.reshape(n, n, n, n)
                 .transpose(3, 1, 2, 0)
                 .reshape(n * n, n * n)
                 .copy())


def superop_from_choi(n: int, choi) -> SuperOperator:
    c = as_matrix(choi)
    if c.shape != (n * n, n * n):
        raise ValueError(f"Choi matrix must be {n*n} x {n*n}, got {c.shape}")
    mat = c.reshape(n, n, n, n).transpose(3, 1, 2, 0).reshape(n * n, n * n)
    return SuperOperator(n, mat)


def is_hermiticity_preserving(s: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    """S(A*) = S(A)* for all A, equivalently a Hermitian Choi matrix."""
    return is_hermitian(choi_matrix(s), tol)


def is_bistochastic(s: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    """Unital (S(1) = 1) and trace preserving on all matrix units."""
    n = s.n
    eye = np.eye(n, dtype=np.complex128)
    if hs_norm(s(eye) - eye) > tol:
        return False
    for j in range(n):
        for k in range(n):
            want = 1.0 if j == k else 0.0
            if abs(np.trace(s.mat[:, k * n + j].reshape(n, n, order="F")) - want) > tol:
                return False
    return True


def hs_contraction_check(s: SuperOperator, trials: int = 1000, seed: int = 0,
                         tol: float = DEFAULT_TOL) -> bool:
    """||S(A)||_HS <= ||A||_HS (+ tol) on sampled A and on all matrix units.

    Only meaningful for bistochastic maps (which are Hilbert-Schmidt
    contractions); raises ``ValueError`` otherwise.
    """
    if not is_bistochastic(s, tol):
        raise ValueError("map is not bistochastic; contraction bound does not apply")
    n = s.n
    for u in basis_units(n):
        if hs_norm(s(u)) > hs_norm(u) + tol:
            return False
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if hs_norm(s(a)) > hs_norm(a) + tol:
            return False
    return True


def kadison_schwarz_defect(s: SuperOperator, b) -> float:
    """Min eigenvalue of S(B* B) - S(B)* S(B).

    A negative value exhibits a failure of the Kadison-Schwarz operator
    inequality at B, which is evidence against 2-positivity of S.
    """
    b = _square(b)
    if b.shape != (s.n, s.n):
        raise ValueError(f"expected a {s.n} x {s.n} matrix, got {b.shape}")
    sb = s(b)
    d = s(b.conj().T @ b) - sb.conj().T @ sb
    d = (d + d.conj().T) / 2.0
    return float(kernels.jacobi_eigvalsh(d).min())


def is_completely_positive(s: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    """Complete positivity, decided exactly by PSD-ness of the Choi matrix."""
    c = choi_matrix(s)
    if not is_hermitian(c, tol):
        return False
    w = kernels.jacobi_eigvalsh((c + c.conj().T) / 2.0)
    return bool(w.min() >= -tol * max(1.0, float(np.abs(w).max())))


def is_completely_copositive(s: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    """Complete copositivity: S o t is completely positive."""
    return is_completely_positive(s.compose(transposition_superop(s.n)), tol)


@dataclass(frozen=True)
class PositivityVerdict:
    """Outcome of a refutation-only positivity search.

    ``min_value`` is the smallest eigenvalue found; ``witness_vector``
    is the unit vector achieving it.  ``status`` is "violation-found"
    only when min_value < -tol, and a probe that found nothing negative
    certifies nothing beyond the points it examined.
    """

    status: str
    witness_vector: np.ndarray | None
    min_value: float

    @property
    def violation(self) -> bool:
        return self.status == VIOLATION_FOUND


def _unit_sphere_grid(n: int, budget: int) -> np.ndarray:
    """Deterministic grid of unit vectors in C^n modulo global phase.

    Parametrized by 2n-2 real angles: n-1 nested polar angles in
    [0, pi/2] and n-1 phases in [0, 2pi); the first coordinate is kept
    real and nonnegative.  The grid has roughly ``budget`` points.
    """
    if n == 1:
        return np.ones((1, 1), dtype=np.complex128)
    params = 2 * n - 2
    g = max(2, int(round(budget ** (1.0 / params))))
    polar = np.linspace(0.0, np.pi / 2, g)
    phases = np.linspace(0.0, 2 * np.pi, g, endpoint=False)
    grids = np.meshgrid(*([polar] * (n - 1) + [phases] * (n - 1)), indexing="ij")
    flat = [x.reshape(-1) for x in grids]
    m = flat[0].size
    eta = np.zeros((m, n), dtype=np.complex128)
    radial = np.ones(m)
    for j in range(n - 1):
        comp = radial * np.cos(flat[j])
        if j == 0:
            eta[:, 0] = comp
        else:
            eta[:, j] = comp * np.exp(1j * flat[n - 1 + j - 1])
        radial = radial * np.sin(flat[j])
    eta[:, n - 1] = radial * np.exp(1j * flat[2 * n - 3])
    return eta


def _rank_one_images(mat: np.ndarray, n: int, eta: np.ndarray) -> np.ndarray:
    """S(P_eta) for a batch of vectors eta: returns (m, n, n) Hermitian."""
    # vec(eta eta*)[j*n+i] = eta_i conj(eta_j)
    vecs = (np.conj(eta)[:, :, None] * eta[:, None, :]).reshape(eta.shape[0], -1)
    out = vecs @ mat.T
    return out.reshape(-1, n, n).transpose(0, 2, 1)


def _hermitize(mats: np.ndarray) -> np.ndarray:
    return (mats + np.conj(np.transpose(mats, (0, 2, 1)))) / 2.0


def _min_eig_descent(apply_fwd, apply_adj, starts: np.ndarray,
                     iters: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Alternating eigenvector descent on f(eta, xi) = Tr P_xi S(P_eta),
    run in lockstep over a batch of starting points.

    Given eta, the best xi is the bottom eigenvector of S(P_eta); given
    xi, the best eta is the bottom eigenvector of S*(P_xi).  Each half
    step is a global minimization in its own variable, so the objective
    is non-increasing and converges to a local minimum of
    lambda_min(S(P_eta)).
    """
    eta = starts / np.linalg.norm(starts, axis=1)[:, None]
    prev = np.full(eta.shape[0], np.inf)
    for _ in range(iters):
        _, vv = kernels.jacobi_eigh_batch(_hermitize(apply_fwd(eta)))
        xi = vv[:, :, 0]
        wg, vg = kernels.jacobi_eigh_batch(_hermitize(apply_adj(xi)))
        eta = vg[:, :, 0]
        if np.abs(prev - wg[:, 0]).max() < 1e-15:
            break
        prev = wg[:, 0]
    vals = kernels.jacobi_eigvalsh(_hermitize(apply_fwd(eta)))[:, 0]
    return vals, eta


#: Grid points evaluated per block, bounding peak memory for large budgets.
_GRID_CHUNK = 1 << 18


def _probe(apply_fwd_batch, apply_adj_batch, dim: int, budget: int, seed: int,
           tol: float, restarts: int) -> PositivityVerdict:
    eta = _unit_sphere_grid(dim, budget)
    w = np.concatenate([
        kernels.jacobi_eigvalsh(_hermitize(apply_fwd_batch(eta[i:i + _GRID_CHUNK])))[:, 0]
        for i in range(0, eta.shape[0], _GRID_CHUNK)])
    best = int(np.argmin(w))
    best_val, best_eta = float(w[best]), eta[best]

    k = min(8, len(w) - 1)
    seeds = eta[np.argpartition(w, k)[:k + 1]] if k > 0 else eta[[best]]
    rng = np.random.default_rng(seed)
    rand = rng.normal(size=(restarts, dim)) + 1j * rng.normal(size=(restarts, dim))
    rand /= np.linalg.norm(rand, axis=1)[:, None]
    vals, vecs = _min_eig_descent(apply_fwd_batch, apply_adj_batch,
                                  np.vstack([seeds, rand]))
    polished = int(np.argmin(vals))
    if vals[polished] < best_val:
        best_val, best_eta = float(vals[polished]), vecs[polished]

    status = VIOLATION_FOUND if best_val < -tol else NO_VIOLATION_FOUND
    return PositivityVerdict(status=status, witness_vector=best_eta,
                             min_value=best_val)


def positivity_probe(s: SuperOperator, budget: int = DEFAULT_PROBE_BUDGET,
                     seed: int = 42, tol: float = DEFAULT_TOL,
                     restarts: int = DEFAULT_RESTARTS) -> PositivityVerdict:
    """Search for a unit eta with S(eta eta*) not PSD.

    Positivity of S is equivalent to S(P_eta) >= 0 for all rank-one
    P_eta, so the probe minimizes the bottom eigenvalue of S(P_eta) over
    a deterministic grid and then polishes the best grid points plus
    random restarts with alternating eigenvector descent.  Deterministic
    given (seed, budget).
    """
    n = s.n
    fwd = lambda eta: _rank_one_images(s.mat, n, eta)
    adj = lambda eta: _rank_one_images(s.mat.conj().T, n, eta)
    return _probe(fwd, adj, n, budget, seed, tol, restarts)


def _blockwise_images(mat: np.ndarray, n: int, k: int, psi: np.ndarray) -> np.ndarray:
    """(I_k (x) S)(P_psi) for a batch of vectors psi in C^{kn}."""
    m = psi.shape[0]
    kn = k * n
    p = psi[:, :, None] * np.conj(psi)[:, None, :]          # P_psi entries
    blocks = (p.reshape(m, k, n, k, n)
                .transpose(0, 1, 3, 2, 4)
                .reshape(m * k * k, n, n))
    vecs = blocks.transpose(0, 2, 1).reshape(m * k * k, -1)  # column-stack each
    out = (vecs @ mat.T).reshape(m * k * k, n, n).transpose(0, 2, 1)
    return (out.reshape(m, k, k, n, n)
               .transpose(0, 1, 3, 2, 4)
               .reshape(m, kn, kn))


def k_positivity_probe(s: SuperOperator, k: int,
                       budget: int = DEFAULT_PROBE_BUDGET, seed: int = 42,
                       tol: float = DEFAULT_TOL,
                       restarts: int = DEFAULT_RESTARTS) -> PositivityVerdict:
    """Refutation-only probe of k-positivity: minimizes the bottom
    eigenvalue of (I_k (x) S)(P_psi) over unit psi in C^{kn}."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = s.n
    fwd = lambda psi: _blockwise_images(s.mat, n, k, psi)
    adj = lambda psi: _blockwise_images(s.mat.conj().T, n, k, psi)
    return _probe(fwd, adj, k * n, budget, seed, tol, restarts)


# --- JSON wire format ------------------------------------------------------
#
# {"n": 3, "kind": "basis-images", "images": [matrix, ...]}  (row-major jk)
# {"n": 3, "kind": "choi", "choi": matrix}

def superop_to_json(s: SuperOperator, kind: str = "basis-images") -> dict:
    if kind == "basis-images":
        n = s.n
        images = [s(u) for u in basis_units(n)]
        return {"n": n, "kind": kind, "images": [matrix_to_json(m) for m in images]}
    if kind == "choi":
        return {"n": s.n, "kind": kind, "choi": matrix_to_json(choi_matrix(s))}
    raise ValueError(f"unknown superoperator encoding {kind!r}")


def superop_from_json(obj, tol: float = DEFAULT_TOL) -> SuperOperator:
    try:
        n = int(obj["n"])
        kind = obj["kind"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed superoperator object: {exc}") from exc
    if n <= 0:
        raise ValueError("side size must be positive")
    if kind == "basis-images":
        images = [matrix_from_json(m) for m in obj.get("images", [])]
        s = SuperOperator.from_basis_images(n, images)
    elif kind == "choi":
        s = superop_from_choi(n, matrix_from_json(obj["choi"]))
    else:
        raise ValueError(f"unknown superoperator encoding {kind!r}")
    if not is_hermiticity_preserving(s, tol):
        raise ValueError("superoperator is not hermiticity-preserving")
    return s
