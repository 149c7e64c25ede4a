"""Dense complex linear algebra primitives shared by every other module.

Matrices are plain ``numpy.ndarray`` values with ``complex128`` entries;
nothing here mutates its inputs.  The Hilbert-Schmidt inner product
``<A, B> = Tr(A* B)`` makes the n x n matrices a Hilbert space, which is
the geometry all higher modules work in.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

#: Default relative tolerance.  Every quantity handled by this library is
#: an exact algebraic number, so double precision leaves >= 6 digits of
#: headroom over this.
DEFAULT_TOL = 1e-9


class VerificationError(RuntimeError):
    """An internal numerical self-check failed."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix has non-finite entries")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def matrix_unit(j: int, k: int, n: int = 3) -> np.ndarray:
    """Matrix unit E_jk = e_j e_k* (0-based indices)."""
    m = np.zeros((n, n), dtype=np.complex128)
    m[j, k] = 1.0
    return m


def basis_units(n: int):
    """All matrix units E_jk of M_n in row-major (j, k) order."""
    return [matrix_unit(j, k, n) for j in range(n) for k in range(n)]


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(A* B)."""
    a = _square(a)
    b = _square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.sum(np.conj(a) * b))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm (Tr A* A)^(1/2)."""
    return float(np.linalg.norm(as_matrix(a)))


def rank_one(eta) -> np.ndarray:
    """Rank-one operator eta eta* of a nonzero column vector."""
    v = np.asarray(eta, dtype=np.complex128).reshape(-1)
    if v.size == 0 or not np.isfinite(v).all():
        raise ValueError("expected a finite nonzero vector")
    if np.all(v == 0):
        raise ValueError("rank_one of the zero vector is undefined")
    return np.outer(v, np.conj(v))


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = _square(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - a.conj().T)) <= tol * scale


@dataclass(frozen=True)
class HermitianEig:
    """Spectral data of a Hermitian matrix: ascending eigenvalues and a
    unitary whose columns are the matching eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a, tol: float = DEFAULT_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi.

    Raises ``ValueError`` for materially non-Hermitian input and
    ``VerificationError`` if the residual check ||A v - lambda v|| <=
    tol * max(1, ||A||) fails for any pair.
    """
    a = _square(a)
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    h = (a + a.conj().T) / 2.0
    w, v = kernels.jacobi_eigh_batch(h)
    scale = max(1.0, float(np.linalg.norm(h)))
    resid = np.linalg.norm(h @ v - v * w[None, :], axis=0).max() if a.size else 0.0
    if resid > tol * scale:
        raise VerificationError(
            f"eigensolver residual {resid:.3e} exceeds {tol:.1e} * {scale:.3e}")
    return HermitianEig(eigenvalues=w, eigenvectors=v)


def is_psd(a, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness: Hermitian and min eigenvalue >= -tol*scale."""
    a = _square(a)
    if not is_hermitian(a, tol):
        return False
    w = kernels.jacobi_eigvalsh((a + a.conj().T) / 2.0)
    scale = max(1.0, float(np.abs(w).max()) if w.size else 0.0)
    return bool(w.min() >= -tol * scale) if w.size else True


def schur_psd_check(block, split: int, tol: float = DEFAULT_TOL) -> bool:
    """Decide PSD-ness of a Hermitian 2x2-block matrix via the Schur
    complement.

    With M = [[A, B], [B*, D]] and A nonsingular, M >= 0 iff A >= 0 and
    D - B* A^{-1} B >= 0.  A singular corner would additionally require
    the range condition (I - A A^+) B = 0; rather than decide a rank
    numerically, validating that condition quickly and then falling back
    to a full eigensolve keeps the verdict exact.
    """
    m = _square(block)
    n = m.shape[0]
    if not (0 < split < n):
        raise ValueError(f"split must lie strictly inside the matrix, got {split}")
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    m = (m + m.conj().T) / 2.0
    scale = max(1.0, float(np.linalg.norm(m)))

    a = m[:split, :split]
    b = m[:split, split:]
    d = m[split:, split:]
    wa, va = kernels.jacobi_eigh_batch(a)
    if wa.min() < -tol * scale:
        return False
    if wa.min() <= tol * scale:
        # singular corner: check the range condition, then fall back
        nz = wa > tol * scale
        pinv = (va[:, nz] / wa[nz][None, :]) @ va[:, nz].conj().T
        if np.linalg.norm(b - a @ (pinv @ b)) > np.sqrt(tol) * scale:
            return False
        w = kernels.jacobi_eigvalsh(m)
        return bool(w.min() >= -tol * max(1.0, float(np.abs(w).max())))
    inv = (va / wa[None, :]) @ va.conj().T
    schur = d - b.conj().T @ inv @ b
    schur = (schur + schur.conj().T) / 2.0
    ws = kernels.jacobi_eigvalsh(schur)
    floor = -tol * max(1.0, float(np.abs(ws).max()) if ws.size else 0.0, scale)
    return bool(ws.min() >= floor) if ws.size else True


def jordan_product(a, b) -> np.ndarray:
    """Jordan product A o B = (AB + BA) / 2."""
    a = _square(a)
    b = _square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return (a @ b + b @ a) / 2.0


def tensor(a, b) -> np.ndarray:
    """Kronecker product with row-major index convention
    (i, j) -> i * n2 + j, i.e. ``tensor(A, B)[i*n2+k, j*n2+l] = A[i,j] B[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose(rho, dims) -> np.ndarray:
    """Transpose the second tensor factor of a bipartite matrix."""
    d1, d2 = int(dims[0]), int(dims[1])
    m = _square(rho)
    if m.shape[0] != d1 * d2:
        raise ValueError(f"matrix of size {m.shape[0]} is not {d1} x {d2} bipartite")
    return (m.reshape(d1, d2, d1, d2)
             .transpose(0, 3, 2, 1)
             .reshape(d1 * d2, d1 * d2))


def spectral_projections(a, tol: float = DEFAULT_TOL):
    """Spectral decomposition A = sum_i lambda_i P_i of a Hermitian matrix.

    Eigenvalues within ``tol * max(1, ||A||)`` of each other are merged
    into one spectral projector; near-zero eigenvalues are dropped.
    Returns a list of (lambda_i, P_i) with distinct nonzero lambda_i.
    """
    eig = hermitian_eig(a, tol)
    w, v = eig.eigenvalues, eig.eigenvectors
    scale = max(1.0, float(np.abs(w).max()) if w.size else 0.0)
    out = []
    i = 0
    n = w.size
    while i < n:
        j = i + 1
        while j < n and w[j] - w[i] <= tol * scale:
            j += 1
        lam = float(w[i:j].mean())
        if abs(lam) > tol * scale:
            vs = v[:, i:j]
            out.append((lam, vs @ vs.conj().T))
        i = j
    return out


# --- JSON wire format ------------------------------------------------------
#
# {"rows": n, "cols": m, "data": [[re, im], ...]} with row-major data and
# every complex number serialized as a 2-element array.

def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    data = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise ValueError("matrix dimensions must be positive")
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
    flat = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError("complex entries must be [re, im] pairs")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(flat.reshape(rows, cols))
