"""Entanglement witnesses from positive maps, and states they detect.

The witness of a map S on M_n is the Choi-type matrix
W_S = sum_ij E_ij (x) S(E_ij) acting on M_n (x) M_n.  It is PSD exactly
when S is completely positive, so for a positive non-CP map there are
density matrices rho with Tr(W_S rho) < 0, and every such rho is
entangled.  The bipartite index convention is row-major,
(i, k) -> i*n + k, matching ``matcore.tensor``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .matcore import (DEFAULT_TOL, VerificationError, is_hermitian, is_psd,
                      matrix_from_json, matrix_to_json, matrix_unit,
                      partial_transpose, tensor, _square)
from .supermaps import SuperOperator, is_hermiticity_preserving


@dataclass(frozen=True)
class Witness:
    """A Hermitian block matrix sum_ij E_ij (x) S(E_ij) on M_{n^2}."""

    n: int
    matrix: np.ndarray


def _witness_matrix(w) -> np.ndarray:
    return w.matrix if isinstance(w, Witness) else _square(w)


def build_witness(s: SuperOperator, tol: float = DEFAULT_TOL) -> Witness:
    """Assemble the witness of a hermiticity-preserving map: the (i, j)
    block of the result is S(E_ij)."""
    if not is_hermiticity_preserving(s, tol):
        raise ValueError("witness construction needs a hermiticity-preserving map")
    n = s.n
    out = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            u = matrix_unit(i, j, n)
            out += tensor(u, s(u))
    return Witness(n=n, matrix=out)


def check_density_matrix(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate PSD-ness and unit trace; returns the coerced array."""
    rho = _square(rho)
    if abs(np.trace(rho) - 1.0) > tol * 10:
        raise ValueError(f"trace is {np.trace(rho):.6g}, not 1")
    if not is_psd(rho, tol):
        raise ValueError("matrix is not positive semidefinite within tolerance")
    return rho


def evaluate(w, rho, tol: float = DEFAULT_TOL) -> float:
    """Tr(W rho); asserts the imaginary part is at roundoff level."""
    wm = _witness_matrix(w)
    rho = _square(rho)
    if wm.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {wm.shape} vs {rho.shape}")
    val = complex(np.trace(wm @ rho))
    if abs(val.imag) > tol * max(1.0, abs(val)):
        raise VerificationError(
            f"Tr(W rho) has a non-real part {val.imag:.3e}; "
            "witness or state is not Hermitian")
    return float(val.real)


def is_ppt(rho, dims, tol: float = DEFAULT_TOL) -> bool:
    """Positive partial transpose test for a bipartite density matrix."""
    return is_psd(partial_transpose(rho, dims), tol)


def negative_eigenspace(w, tol: float = DEFAULT_TOL):
    """All eigenpairs of a witness with eigenvalue < -tol.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvector columns aligned; both empty when the witness is PSD.
    """
    wm = _witness_matrix(w)
    if not is_hermitian(wm, tol):
        raise ValueError("witness is not Hermitian within tolerance")
    vals, vecs = kernels.jacobi_eigh_batch((wm + wm.conj().T) / 2.0)
    neg = vals < -tol
    return vals[neg], vecs[:, neg]


@dataclass(frozen=True)
class DetectionCertificate:
    """A state together with its (negative) witness value and PPT status."""

    state: np.ndarray
    witness_value: float
    ppt: bool

    def to_json(self) -> dict:
        n = int(round(np.sqrt(self.state.shape[0])))
        return {"state": state_to_json(self.state, (n, n)),
                "witness_value": float(self.witness_value),
                "ppt": bool(self.ppt)}


def construct_detected_state(w, rho0=None, lam: float = 0.5,
                             tol: float = DEFAULT_TOL) -> DetectionCertificate:
    """Build a detected state lam * P_v + (1 - lam) * rho0' where v is the
    bottom eigenvector of the witness and rho0' is rho0 compressed onto
    the orthogonal complement of v and renormalized.

    ``rho0 = None`` uses the maximally mixed state.  Detection holds when
    Tr(W^(rest) rho0') is small enough against lam times the negative
    eigenvalue; if the resulting value is not negative the construction
    raises ``VerificationError`` carrying the computed value.
    """
    wm = _witness_matrix(w)
    d = wm.shape[0]
    if not 0.0 < lam <= 1.0:
        raise ValueError("mixing weight must lie in (0, 1]")
    vals, vecs = negative_eigenspace(w, tol)
    if vals.size == 0:
        raise ValueError("witness has no negative eigenvalue; nothing to detect")
    v = vecs[:, 0]
    p_v = np.outer(v, np.conj(v))

    if lam < 1.0:
        rho0 = np.eye(d, dtype=np.complex128) / d if rho0 is None else _square(rho0)
        if rho0.shape != wm.shape:
            raise ValueError(f"dimension mismatch: {rho0.shape} vs {wm.shape}")
        comp = np.eye(d, dtype=np.complex128) - p_v
        squeezed = comp @ rho0 @ comp
        weight = float(np.trace(squeezed).real)
        if weight <= tol:
            raise ValueError("rho0 is supported entirely on the detected direction")
        state = lam * p_v + (1.0 - lam) * squeezed / weight
    else:
        state = p_v

    state = (state + state.conj().T) / 2.0
    value = evaluate(w, state, tol)
    if value >= 0.0:
        raise VerificationError(
            f"construction failed to detect: Tr(W rho) = {value:.6g} >= 0")
    n = int(round(np.sqrt(d)))
    return DetectionCertificate(state=state, witness_value=value,
                                ppt=is_ppt(state, (n, n), tol))


def detected_ppt_state() -> np.ndarray:
    """The 9 x 9 PPT entangled state detected by the witness of the
    extremal atomic map: 1/7 times a 0/±1 pattern with seven unit
    diagonal entries.  Exposed on the command line as ``paper-ppt``."""
    rho = np.zeros((9, 9), dtype=np.complex128)
    for i in (0, 2, 4, 5, 6, 7, 8):
        rho[i, i] = 1.0
    rho[0, 8] = rho[8, 0] = -1.0
    rho[5, 7] = rho[7, 5] = -1.0
    return rho / 7.0


# --- JSON wire format ------------------------------------------------------
#
# Bipartite objects reuse the matrix encoding plus a "dims" field.

def state_to_json(rho, dims) -> dict:
    obj = matrix_to_json(rho)
    obj["dims"] = [int(dims[0]), int(dims[1])]
    return obj


def state_from_json(obj) -> tuple[np.ndarray, tuple[int, int]]:
    m = matrix_from_json(obj)
    dims = obj.get("dims")
    if dims is None or len(dims) != 2:
        raise ValueError("bipartite object needs a 2-element 'dims' field")
    d1, d2 = int(dims[0]), int(dims[1])
    if m.shape[0] != d1 * d2:
        raise ValueError(f"matrix size {m.shape[0]} does not match dims {d1}x{d2}")
    return m, (d1, d2)


def witness_to_json(w: Witness) -> dict:
    return state_to_json(w.matrix, (w.n, w.n))


def witness_from_json(obj) -> Witness:
    m, (d1, d2) = state_from_json(obj)
    if d1 != d2:
        raise ValueError("witness factors must have equal size")
    if not is_hermitian(m):
        raise ValueError("witness matrix must be Hermitian")
    return Witness(n=d1, matrix=m)
