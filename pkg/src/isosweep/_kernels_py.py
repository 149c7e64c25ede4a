"""Pure NumPy eigensolver kernels: cyclic Jacobi for Hermitian batches.

This is the fallback twin of the compiled module ``isosweep._kernels_c``.
Both implement exactly the same algorithm -- same sweep order, same
rotation formulas, same stable sort -- so the two backends agree to a
few ulps and can be benchmarked against each other.

A batch of m matrices is diagonalised simultaneously: every rotation
step computes per-matrix angles with vectorised arithmetic.  The cyclic
Jacobi method was chosen over LAPACK here because the instances are
small (n <= 81), the batch sizes are large, and the result is
reproducible bit-for-bit across BLAS builds.

Rotation scheme for a Hermitian matrix A and pivot (p, q), p < q:
write A[p,q] = |b| e^{i theta}.  The unitary

    U = [[c,            s          ],
         [-s e^{-i th}, c e^{-i th}]]      (embedded in the (p, q) plane)

with the classic symmetric-Jacobi choice of (c, s) for the phase-reduced
real block [[A_pp, |b|], [|b|, A_qq]] annihilates A[p,q] in A <- U* A U.
"""
from __future__ import annotations

import numpy as np

#: Convergence threshold (off-diagonal Frobenius mass relative to the
#: matrix Frobenius norm) and sweep cap shared with the compiled twin.
EPS_OFF = 1e-14
MAX_SWEEPS = 30

# Off-diagonal magnitudes below this absolute floor are not rotated away;
# they are far beneath roundoff of any representable spectrum.
TINY = 1e-300


def jacobi_eigh_batch(a, compute_vectors=True, max_sweeps=MAX_SWEEPS, eps=EPS_OFF):
    """Diagonalise a batch of Hermitian matrices by cyclic Jacobi.

    Parameters
    ----------
    a : array_like, shape (m, n, n) or (n, n)
        Hermitian matrices.  Only the Hermitian part is meaningful; the
        routine symmetrises roundoff-level asymmetry implicitly through
        the rotations.
    compute_vectors : bool
        Accumulate eigenvectors as well.

    Returns
    -------
    w : ndarray, shape (m, n) -- eigenvalues, ascending per matrix.
    v : ndarray, shape (m, n, n) or None -- unitary, columns are
        eigenvectors matching ``w``.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    single = a.ndim == 2
    if single:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected (m, n, n) batch, got shape {a.shape}")
    m, n = a.shape[0], a.shape[1]
    v = None
    if compute_vectors:
        v = np.zeros((m, n, n), dtype=np.complex128)
        v[:, np.arange(n), np.arange(n)] = 1.0

    scale = np.sqrt((np.abs(a) ** 2).sum(axis=(1, 2)))
    scale = np.maximum(scale, TINY)
    offmask = ~np.eye(n, dtype=bool)
    # pivots below this leave the off-diagonal Frobenius mass under
    # eps * scale even if every entry sits at the threshold, so skipping
    # them cannot stall convergence
    skip = np.maximum(eps * scale / n, TINY)

    for _ in range(max_sweeps):
        # summed directly over off-diagonal entries: subtracting the
        # diagonal mass from the total would cancel catastrophically
        off2 = (np.abs(a[:, offmask]) ** 2).sum(axis=1)
        if np.all(np.sqrt(off2) <= eps * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                absb = np.abs(apq)
                active = absb > skip
                if not active.any():
                    continue
                phase = np.where(active, apq / np.where(active, absb, 1.0), 1.0)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                tau = np.where(active, (aqq - app) / np.where(active, 2.0 * absb, 1.0), 0.0)
                t = np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau))
                t = np.where(tau == 0.0, 1.0, t)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                c = np.where(active, c, 1.0)
                s = np.where(active, s, 0.0)
                cphase = np.conj(phase)

                colp = a[:, :, p].copy()
                colq = a[:, :, q].copy()
                a[:, :, p] = c[:, None] * colp - (s * cphase)[:, None] * colq
                a[:, :, q] = s[:, None] * colp + (c * cphase)[:, None] * colq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :].copy()
                a[:, p, :] = c[:, None] * rowp - (s * phase)[:, None] * rowq
                a[:, q, :] = s[:, None] * rowp + (c * phase)[:, None] * rowq
                a[active, p, q] = 0.0
                a[active, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
                if compute_vectors:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q].copy()
                    v[:, :, p] = c[:, None] * vp - (s * cphase)[:, None] * vq
                    v[:, :, q] = s[:, None] * vp + (c * cphase)[:, None] * vq

    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if compute_vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    if single:
        return w[0], (v[0] if compute_vectors else None)
    return w, v
