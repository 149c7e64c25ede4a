# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled eigensolver kernels: cyclic Jacobi for Hermitian batches.

Twin of ``isosweep._kernels_py`` -- same sweep order, same rotation
formulas, same stable sort -- compiled for the hot inner loops of the
positivity probes (hundreds of thousands of small eigensolves per
probe).  See the pure module for the algorithm notes; outputs of the
two backends agree to roundoff.
"""
import numpy as np

from libc.math cimport fabs, sqrt, hypot, copysign

cdef double TINY = 1e-300


cdef void _jacobi_one(double complex[:, ::1] a, double[::1] w,
                      double complex[:, ::1] v, bint withv,
                      int max_sweeps, double eps) noexcept nogil:
    cdef int n = a.shape[0]
    cdef int sweep, p, q, i, j
    cdef double scale, skip, off2, absb, app, aqq, tau, t, c, s, wt
    cdef double complex apq, phase, cphase, xp, xq
    cdef double complex sc, scc, cc, ccc

    if withv:
        for i in range(n):
            for j in range(n):
                v[i, j] = 1.0 if i == j else 0.0

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    scale = sqrt(scale)
    if scale < TINY:
        scale = TINY
    # pivots below this leave the off-diagonal Frobenius mass under
    # eps * scale even if every entry sits at the threshold
    skip = eps * scale / n
    if skip < TINY:
        skip = TINY

    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off2 += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
        if sqrt(off2) <= eps * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                absb = hypot(apq.real, apq.imag)
                if absb <= skip:
                    continue
                phase = apq / absb
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * absb)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = copysign(1.0, tau) / (fabs(tau) + hypot(1.0, tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                cphase = phase.real - 1j * phase.imag
                sc = s * cphase   # right factors for the column update
                cc = c * cphase
                scc = s * phase   # left factors for the row update
                ccc = c * phase

                for i in range(n):
                    xp = a[i, p]
                    xq = a[i, q]
                    a[i, p] = c * xp - sc * xq
                    a[i, q] = s * xp + cc * xq
                for i in range(n):
                    xp = a[p, i]
                    xq = a[q, i]
                    a[p, i] = c * xp - scc * xq
                    a[q, i] = s * xp + ccc * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if withv:
                    for i in range(n):
                        xp = v[i, p]
                        xq = v[i, q]
                        v[i, p] = c * xp - sc * xq
                        v[i, q] = s * xp + cc * xq

    for i in range(n):
        w[i] = a[i, i].real

    # stable ascending insertion sort, vectors follow their eigenvalue
    for i in range(1, n):
        wt = w[i]
        j = i - 1
        while j >= 0 and w[j] > wt:
            j -= 1
        j += 1
        if j < i:
            for p in range(i, j, -1):
                w[p] = w[p - 1]
            w[j] = wt
            if withv:
                for q in range(n):
                    xp = v[q, i]
                    for p in range(i, j, -1):
                        v[q, p] = v[q, p - 1]
                    v[q, j] = xp


def jacobi_eigh_batch(a, compute_vectors=True, max_sweeps=30, eps=1e-14):
    """Compiled counterpart of ``_kernels_py.jacobi_eigh_batch``."""
    arr = np.array(a, dtype=np.complex128, order="C")
    single = arr.ndim == 2
    if single:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"expected (m, n, n) batch, got shape {np.shape(a)}")
    cdef Py_ssize_t m = arr.shape[0]
    cdef Py_ssize_t n = arr.shape[1]
    w = np.empty((m, n), dtype=np.float64)
    cdef bint withv = bool(compute_vectors)
    v = np.empty((m, n, n), dtype=np.complex128) if withv else np.empty((1, 1, 1), dtype=np.complex128)

    cdef double complex[:, :, ::1] A = arr
    cdef double[:, ::1] W = w
    cdef double complex[:, :, ::1] V = v
    cdef int ms = int(max_sweeps)
    cdef double ep = float(eps)
    cdef Py_ssize_t b
    if n > 0 and m > 0:
        with nogil:
            for b in range(m):
                if withv:
                    _jacobi_one(A[b], W[b], V[b], 1, ms, ep)
                else:
                    _jacobi_one(A[b], W[b], V[0], 0, ms, ep)
    if single:
        return w[0], (v[0] if withv else None)
    return w, (v if withv else None)
