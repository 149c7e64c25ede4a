"""Backend selection for the eigensolver kernels.

At import time the compiled extension ``isosweep._kernels_c`` is
preferred; when it is absent (no compiler, no in-place build) the pure
NumPy twin ``isosweep._kernels_py`` takes over transparently.  Both
expose the same ``jacobi_eigh_batch`` contract.
"""
from __future__ import annotations

from . import _kernels_py

try:  # pragma: no cover - depends on whether the extension was built
    from . import _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None

_impl = _kernels_c if _kernels_c is not None else _kernels_py

#: Name of the backend selected at import: "compiled" or "python".
BACKEND = "compiled" if _kernels_c is not None else "python"


def available_backends():
    """Names of the kernel backends importable in this environment."""
    return ("compiled", "python") if _kernels_c is not None else ("python",)


def get_backend(name=None):
    """Return the kernel module for `name` (default: the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _kernels_c is None:
            raise ValueError("compiled kernels are not built; "
                             "run `python setup.py build_ext --inplace`")
        return _kernels_c
    raise ValueError(f"unknown kernel backend {name!r}")


def jacobi_eigh_batch(a, compute_vectors=True, backend=None):
    """Eigendecompose a batch of Hermitian matrices (ascending order)."""
    return get_backend(backend).jacobi_eigh_batch(a, compute_vectors=compute_vectors)


def jacobi_eigvalsh(a, backend=None):
    """Eigenvalues only, ascending; accepts a single matrix or a batch."""
    w, _ = get_backend(backend).jacobi_eigh_batch(a, compute_vectors=False)
    return w
