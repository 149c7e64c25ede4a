"""Canonical maps, subalgebras and random generators used across the
test suites and the command line.

The star of the collection is ``extremal_atomic_map``: the extremal,
exposed, atomic bistochastic map on M_3 whose stable subalgebra is the
two-dimensional commutative algebra spanned by diag(1,1,0) and
diag(0,0,1) -- the only such example in this library's menagerie, the
other extremal specimens being strongly ergodic (Choi map) or Jordan
automorphisms (unitary conjugations, with or without transposition).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import DEFAULT_TOL, as_matrix, matrix_unit
from .stable import HSSubspace, JordanClass, conditional_expectation
from .supermaps import SuperOperator, identity_superop, transposition_superop


def _frozen(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    m.setflags(write=False)
    return m

#: The coordinate projections of C^3 and the rank-two sum of the first two.
P1 = _frozen(np.diag([1.0, 0.0, 0.0]))
P2 = _frozen(np.diag([0.0, 1.0, 0.0]))
P3 = _frozen(np.diag([0.0, 0.0, 1.0]))
P12 = _frozen(np.diag([1.0, 1.0, 0.0]))

_RT2 = np.sqrt(2.0)


def extremal_atomic_map() -> SuperOperator:
    """The extremal atomic bistochastic map on M_3 (CLI name ``paper-s``).

    Acting on A = (a_ij), the image has (a_11 + a_22)/2 twice on the
    diagonal, a_33 in the corner, and the four corner-coupling entries
    a_13, a_32, a_31, a_23 scaled by 1/sqrt(2):

        [[ (a11+a22)/2, 0,           a13/sqrt2 ],
         [ 0,           (a11+a22)/2, a32/sqrt2 ],
         [ a31/sqrt2,   a23/sqrt2,   a33       ]]

    It is positive but neither completely positive nor completely
    copositive, and not even 2-positive or 2-copositive.
    """
    images = []
    for j in range(3):
        for k in range(3):
            img = np.zeros((3, 3), dtype=np.complex128)
            if j == k == 2:
                img[2, 2] = 1.0
            elif j == k:
                img[0, 0] = img[1, 1] = 0.5
            elif (j, k) == (0, 2):
                img[0, 2] = 1.0 / _RT2
            elif (j, k) == (2, 1):
                img[1, 2] = 1.0 / _RT2
            elif (j, k) == (2, 0):
                img[2, 0] = 1.0 / _RT2
            elif (j, k) == (1, 2):
                img[2, 1] = 1.0 / _RT2
            images.append(img)
    return SuperOperator.from_basis_images(3, images)


def choi_map() -> SuperOperator:
    """The Choi map on M_3 in bistochastic normalization:

        A -> 1/2 * [ diag(a11+a33, a22+a11, a33+a22) - offdiag(A) ]

    Positive but neither completely positive nor completely copositive,
    and strongly ergodic (its stable subspace is the scalars).
    """
    images = []
    for j in range(3):
        for k in range(3):
            if j == k:
                img = 0.5 * (matrix_unit(j, j) + matrix_unit((j + 1) % 3, (j + 1) % 3))
            else:
                img = -0.5 * matrix_unit(j, k)
            images.append(img)
    return SuperOperator.from_basis_images(3, images)


def jordan_automorphism(u, transposed: bool = False,
                        tol: float = DEFAULT_TOL) -> SuperOperator:
    """Conjugation A -> U A U*, optionally precomposed with transposition.

    These are precisely the bistochastic maps whose stable subspace is
    everything.  Raises ``ValueError`` for non-unitary U.
    """
    u = as_matrix(u)
    n = u.shape[0]
    if u.shape[0] != u.shape[1] or \
            np.linalg.norm(u.conj().T @ u - np.eye(n)) > tol * n:
        raise ValueError("conjugation needs a unitary matrix")
    # column stacking: vec(U A U*) = (conj(U) kron U) vec(A)
    conj = SuperOperator(n, np.kron(u.conj(), u))
    return conj.compose(transposition_superop(n)) if transposed else conj


def transpose_map(n: int = 3) -> SuperOperator:
    return transposition_superop(n)


def identity_map(n: int = 3) -> SuperOperator:
    return identity_superop(n)


def canonical_subalgebras() -> list[HSSubspace]:
    """Orthonormal bases for the seven unital JB*-subalgebras of M_3,
    in ascending dimension order (1, 2, 3, 4, 5, 6, 9)."""
    e = matrix_unit
    sym = lambda j, k: (e(j, k) + e(k, j)) / _RT2
    eye = np.eye(3, dtype=np.complex128)
    families = [
        [eye / np.sqrt(3.0)],                                    # scalars
        [P12 / _RT2, P3],                                        # two blocks
        [P1, P2, P3],                                            # diagonal
        [e(0, 0), e(1, 1), sym(0, 1), P3],                       # symmetric 2x2 + scalar
        [e(0, 0), e(0, 1), e(1, 0), e(1, 1), P3],                # full 2x2 + scalar
        [e(0, 0), e(1, 1), e(2, 2), sym(0, 1), sym(0, 2), sym(1, 2)],  # symmetric 3x3
        [e(j, k) for j in range(3) for k in range(3)],           # everything
    ]
    return [HSSubspace(3, np.stack(mats)) for mats in families]


#: Classes of ``canonical_subalgebras()`` entries, in the same order.
CANONICAL_CLASSES = (
    JordanClass.SCALAR,
    JordanClass.COMMUTATIVE_2,
    JordanClass.DIAGONAL,
    JordanClass.SYMMETRIC_2_PLUS_SCALAR,
    JordanClass.FULL_2_PLUS_SCALAR,
    JordanClass.SYMMETRIC_3,
    JordanClass.FULL_3,
)


def random_unitary(n: int, seed=0) -> np.ndarray:
    """Haar-ish unitary from QR of a seeded complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def random_bistochastic(n: int = 3, components: int = 3, seed: int = 0) -> SuperOperator:
    """Convex combination of random unitary conjugations and conditional
    expectations onto random canonical subalgebras (for n = 3; other
    sizes mix conjugations, the diagonal pinching and the trace map).

    Bistochastic and positive by construction; deterministic per seed.
    """
    if components < 1:
        raise ValueError("need at least one component")
    rng = np.random.default_rng(seed)
    if n == 3:
        subs = canonical_subalgebras()
    else:
        eye = np.eye(n, dtype=np.complex128) / np.sqrt(n)
        diag = np.stack([matrix_unit(i, i, n) for i in range(n)])
        subs = [HSSubspace(n, eye[None]), HSSubspace(n, diag)]
    parts = []
    for _ in range(components):
        if rng.random() < 0.5:
            parts.append(jordan_automorphism(
                random_unitary(n, seed=rng.integers(2 ** 31))))
        else:
            parts.append(conditional_expectation(
                subs[rng.integers(len(subs))]))
    # weights bounded away from zero keep the isometric/decaying spectral
    # split of the mix well separated
    weights = 0.5 + rng.random(components)
    weights /= weights.sum()
    mat = sum(wt * p.mat for wt, p in zip(weights, parts))
    return SuperOperator(n, mat)


def random_kraus_map(n: int = 3, terms: int = 2, seed: int = 0) -> SuperOperator:
    """Completely positive map A -> sum_i K_i A K_i* with seeded Gaussian
    Kraus operators (neither unital nor trace preserving in general)."""
    rng = np.random.default_rng(seed)
    mat = np.zeros((n * n, n * n), dtype=np.complex128)
    for _ in range(max(1, terms)):
        k = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0 * n)
        mat += np.kron(k.conj(), k)
    return SuperOperator(n, mat)


#: CLI names for the fixed menagerie.
ZOO_NAMES = ("paper-s", "choi", "transpose", "identity", "unitary-conj")


def build_named(name: str, n: int = 3, seed: int = 42) -> SuperOperator:
    """Instantiate a zoo map by its CLI name."""
    if name == "paper-s":
        return extremal_atomic_map()
    if name == "choi":
        return choi_map()
    if name == "transpose":
        return transpose_map(n)
    if name == "identity":
        return identity_map(n)
    if name == "unitary-conj":
        return jordan_automorphism(random_unitary(n, seed=seed))
    raise ValueError(f"unknown map name {name!r}; known: {', '.join(ZOO_NAMES)}")


@dataclass(frozen=True)
class MapSpec:
    """A nameable recipe for a zoo map, instantiable into a SuperOperator."""

    name: str
    n: int = 3
    parameters: dict = field(default_factory=dict)

    def instantiate(self) -> SuperOperator:
        return build_named(self.name, n=self.n,
                           seed=int(self.parameters.get("seed", 42)))
