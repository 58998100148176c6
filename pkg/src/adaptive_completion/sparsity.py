"""Coherence and (non)sparsity-numbers of vectors, matrices and subspaces.

The nonsparsity-number of a subspace is the smallest support of any nonzero
vector in it.  It is computed exactly by enumerating candidate supports, so it
is only available for small ambient dimensions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationCapError",
    "SubspaceBasis",
    "coherence",
    "nonsparsity_vector",
    "nonsparsity_subspace",
    "nonsparsity_matrix",
    "sparsity",
    "psi_from_coherence",
]

DEFAULT_ENUMERATION_CAP = 20
_CHUNK = 4096


class EnumerationCapError(ValueError):
    """Raised instead of approximating when the ambient dimension is too large."""


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis stored as the columns of an ``(ambient_dim, dim)`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.vectors, dtype=float)
        if q.ndim == 1:
            q = q[:, None]
        if q.ndim != 2:
            raise ValueError("basis vectors must form a 2-D array")
        if q.shape[1] > q.shape[0]:
            raise ValueError(f"dim {q.shape[1]} exceeds ambient dimension {q.shape[0]}")
        gram = q.T @ q
        if not np.allclose(gram, np.eye(q.shape[1]), atol=1e-10, rtol=0):
            raise ValueError("basis vectors are not orthonormal")
        q.setflags(write=False)
        object.__setattr__(self, "vectors", q)

    @classmethod
    def empty(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def from_matrix(cls, a, tol: float = 1e-9) -> "SubspaceBasis":
        """Orthonormal basis of the column span of ``a`` (numeric rank at ``tol``)."""
        a = np.asarray(a, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.size == 0:
            return cls.empty(a.shape[0])
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        if s.size == 0 or s[0] == 0:
            return cls.empty(a.shape[0])
        k = int(np.sum(s > tol * s[0]))
        return cls(u[:, :k])

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def extend(self, v, tol: float = 1e-12) -> "SubspaceBasis":
        """Add ``v`` to the span, orthonormalized by two Gram-Schmidt passes."""
        w = np.asarray(v, dtype=float).copy()
        scale = np.linalg.norm(w)
        for _ in range(2):
            w -= self.vectors @ (self.vectors.T @ w)
        norm = np.linalg.norm(w)
        if scale == 0 or norm <= tol * scale:
            raise ValueError("vector already lies in the span")
        return SubspaceBasis(np.column_stack([self.vectors, w / norm]))

    def rows(self, idx) -> np.ndarray:
        return self.vectors[np.asarray(idx, dtype=np.intp)]


def coherence(basis: SubspaceBasis) -> float:
    """``(ambient_dim / dim) * max_j ||P e_j||^2``.

    For an orthonormal basis ``Q`` the projection of ``e_j`` has squared norm
    equal to the squared norm of row ``j`` of ``Q``.
    """
    if basis.dim == 0:
        raise ValueError("coherence of an empty basis is undefined")
    leverage = np.sum(basis.vectors**2, axis=1)
    return basis.ambient_dim / basis.dim * float(leverage.max())


def nonsparsity_vector(x, tol: float = 1e-9) -> int:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty vector")
    peak = np.max(np.abs(x))
    if peak == 0:
        return 0
    return int(np.sum(np.abs(x) > tol * peak))


def _has_nontrivial_solution(blocks: np.ndarray, k: int, tol: float) -> np.ndarray:
    # blocks: (batch, rows, k). Rank < k  <=>  smallest singular value ~ 0.
    if blocks.shape[1] < k:
        return np.ones(blocks.shape[0], dtype=bool)
    s = np.linalg.svd(blocks, compute_uv=False)
    return s[:, -1] <= tol


def nonsparsity_subspace(basis: SubspaceBasis, tol: float = 1e-9,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Exact minimum support size of a nonzero vector in ``span(basis)``.

    A support ``T`` admits a nonzero vector iff the basis rows outside ``T``
    have rank below ``dim``.  Supports are tried by increasing size, in
    lexicographic order within a size; the first hit is the answer.
    """
    m, k = basis.ambient_dim, basis.dim
    if k == 0:
        raise ValueError("nonsparsity of the zero subspace is undefined")
    if m > cap:
        raise EnumerationCapError(
            f"ambient dimension {m} exceeds enumeration cap {cap}; refusing to approximate")
    q = basis.vectors
    all_rows = np.arange(m)
    # Any k-1 linear constraints leave a nonzero solution, so m-k+1 always succeeds.
    for size in range(1, m - k + 2):
        supports = combinations(range(m), size)
        while True:
            chunk = list(islice(supports, _CHUNK))
            if not chunk:
                break
            keep = np.ones((len(chunk), m), dtype=bool)
            keep[np.repeat(np.arange(len(chunk)), size), np.asarray(chunk).ravel()] = False
            comp = np.broadcast_to(all_rows, keep.shape)[keep].reshape(len(chunk), m - size)
            if _has_nontrivial_solution(q[comp], k, tol).any():
                return size
    raise AssertionError("unreachable: support of size m-k+1 always admits a vector")


def nonsparsity_matrix(matrix, tol: float = 1e-9, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    basis = SubspaceBasis.from_matrix(matrix, tol=tol)
    if basis.dim == 0:
        raise ValueError("nonsparsity of the zero matrix is undefined")
    return nonsparsity_subspace(basis, tol=tol, cap=cap)


def sparsity(value, tol: float = 1e-9, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Ambient dimension minus the nonsparsity-number.

    ``value`` may be a 1-D vector, a 2-D matrix (its column space is used) or a
    :class:`SubspaceBasis`.
    """
    if isinstance(value, SubspaceBasis):
        return value.ambient_dim - nonsparsity_subspace(value, tol=tol, cap=cap)
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1:
        return arr.size - nonsparsity_vector(arr, tol=tol)
    if arr.ndim == 2:
        return arr.shape[0] - nonsparsity_matrix(arr, tol=tol, cap=cap)
    raise TypeError(f"cannot take sparsity of a {arr.ndim}-D array")


def psi_from_coherence(mu0: float, r: int, m: int) -> int:
    """Lower bound on the column-space nonsparsity implied by coherence alone.

    Uses ``mu0 * r >= m / psi``, i.e. ``psi >= floor(m / (mu0 * r))``, clamped
    to at least 1.  Pair it with a row-space nonsparsity of 1.
    """
    if mu0 <= 0 or r <= 0 or m <= 0:
        raise ValueError("mu0, r and m must be positive")
    # small slack keeps exact quotients such as 100 / (2 * 5) from flooring down
    return max(1, math.floor(m / (mu0 * r) + 1e-12))
