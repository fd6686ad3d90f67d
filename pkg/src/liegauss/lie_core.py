"""Lie algebras given by structure constants.

Vectors are plain 1-D numpy arrays of coordinates in the algebra basis.
The convention is ``[b_i, b_j] = sum_k c[i, j, k] b_k``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidStructureConstants

# Singular values below RANK_RTOL * s_max count as zero.
RANK_RTOL = 1e-9
ANTISYMMETRY_TOL = 1e-12


def _row_space(mat: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the row space, one basis vector per row."""
    if mat.size == 0:
        return np.zeros((0, mat.shape[1]))
    _, s, vt = np.linalg.svd(mat, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((0, mat.shape[1]))
    rank = int(np.sum(s > rtol * s[0]))
    return vt[:rank]


def null_space(mat: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of ``{x : mat @ x = 0}`` as rows."""
    n = mat.shape[1]
    if mat.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > rtol * s[0]))
    return vt[rank:]


class Subspace:
    """Span of a list of generator vectors.

    ``basis`` holds a Euclidean-orthonormal basis (rows) of the span, used for
    containment and projection tests, which do not depend on the metric.
    ``generators`` are kept in input order so metric frames built from them by
    Gram-Schmidt are reproducible.
    """

    def __init__(self, generators, ambient_dim: int | None = None):
        gens = np.asarray(generators, dtype=float)
        if gens.size == 0:
            if ambient_dim is None:
                raise ValueError("ambient_dim is required for an empty generator list")
            gens = np.zeros((0, ambient_dim))
        gens = np.atleast_2d(gens)
        if ambient_dim is not None and gens.shape[1] != ambient_dim:
            raise DimensionMismatch(
                f"generators have length {gens.shape[1]}, expected {ambient_dim}")
        self.generators = gens
        self.ambient_dim = gens.shape[1]
        self.basis = _row_space(gens)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((0, n)), n)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(np.eye(n), n)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def __repr__(self):
        return f"Subspace(rank={self.rank}, ambient_dim={self.ambient_dim})"

    def projector(self) -> np.ndarray:
        """Euclidean orthogonal projector onto the span."""
        return self.basis.T @ self.basis

    def residual(self, vectors) -> float:
        """Largest Euclidean norm of the part of ``vectors`` outside the span."""
        vs = np.atleast_2d(np.asarray(vectors, dtype=float))
        if vs.size == 0:
            return 0.0
        outside = vs - vs @ self.projector()
        return float(np.max(np.linalg.norm(outside, axis=1)))

    def contains(self, other: "Subspace | np.ndarray", tol: float = 1e-9) -> bool:
        vs = other.basis if isinstance(other, Subspace) else other
        return self.residual(vs) <= tol

    def distance(self, other: "Subspace") -> float:
        """Spectral norm of the difference of Euclidean projectors."""
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def canonical_basis(self, tol: float = 1e-12) -> np.ndarray:
        """Reduced row echelon basis; independent of how the span was generated."""
        a = self.projector()
        rows, piv_row = [], 0
        for col in range(self.ambient_dim):
            if piv_row == a.shape[0] or len(rows) == self.rank:
                break
            p = piv_row + int(np.argmax(np.abs(a[piv_row:, col])))
            if abs(a[p, col]) <= 1e-9:
                continue
            a[[piv_row, p]] = a[[p, piv_row]]
            a[piv_row] /= a[piv_row, col]
            others = np.arange(a.shape[0]) != piv_row
            a[others] -= np.outer(a[others, col], a[piv_row])
            rows.append(piv_row)
            piv_row += 1
        out = a[rows] if rows else np.zeros((0, self.ambient_dim))
        out[np.abs(out) < tol] = 0.0
        return out

    def onb(self, g: np.ndarray | None = None) -> np.ndarray:
        """Orthonormal basis w.r.t. ``g`` by Gram-Schmidt on the generators.

        Dependent generators are skipped, so the result always has ``rank`` rows.
        """
        if g is None:
            g = np.eye(self.ambient_dim)
        scale = max((float(np.sqrt(v @ g @ v)) for v in self.generators), default=0.0)
        out: list[np.ndarray] = []
        for v in self.generators:
            w = v.copy()
            for _ in range(2):
                for u in out:
                    w = w - (u @ g @ w) * u
            nrm = float(np.sqrt(w @ g @ w))
            if nrm > RANK_RTOL * scale and len(out) < self.rank:
                out.append(w / nrm)
        if not out:
            return np.zeros((0, self.ambient_dim))
        return np.array(out)

    def metric_projector(self, g: np.ndarray) -> np.ndarray:
        """Matrix of the g-orthogonal projection onto the span (acts on columns)."""
        if self.is_zero:
            return np.zeros((self.ambient_dim, self.ambient_dim))
        q = self.onb(g)
        return q.T @ q @ g


class LieAlgebra:
    """Finite-dimensional real Lie algebra stored as a dense structure tensor."""

    def __init__(self, c, basis_labels: Sequence[str] | None = None):
        c = np.array(c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise InvalidStructureConstants(f"structure tensor must be n x n x n, got {c.shape}")
        n = c.shape[0]
        if n < 1:
            raise InvalidStructureConstants("dimension must be positive")
        sym = 0.5 * (c - c.transpose(1, 0, 2))
        if np.max(np.abs(sym - c), initial=0.0) > ANTISYMMETRY_TOL:
            raise InvalidStructureConstants("structure constants are not antisymmetric in (i, j)")
        self.c = sym
        self.c.setflags(write=False)
        if basis_labels is None:
            basis_labels = [f"b{i + 1}" for i in range(n)]
        if len(basis_labels) != n:
            raise DimensionMismatch(f"{len(basis_labels)} labels for dimension {n}")
        self.basis_labels = tuple(str(s) for s in basis_labels)

    @classmethod
    def from_brackets(cls, basis_labels: Sequence[str],
                      entries: Iterable[tuple[int, int, int, float]]) -> "LieAlgebra":
        """Build from entries ``(i, j, k, value)`` meaning ``[b_i, b_j]`` has ``value`` on ``b_k``.

        Only ``i < j`` is accepted; the antisymmetric completion is automatic.
        """
        n = len(basis_labels)
        c = np.zeros((n, n, n))
        seen = set()
        for i, j, k, val in entries:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise DimensionMismatch(f"bracket index out of range: ({i}, {j}, {k})")
            if i >= j:
                raise InvalidStructureConstants(f"bracket entry needs i < j, got ({i}, {j})")
            if (i, j, k) in seen:
                raise InvalidStructureConstants(f"duplicate bracket entry ({i}, {j}, {k})")
            seen.add((i, j, k))
            c[i, j, k] = val
            c[j, i, k] = -val
        return cls(c, basis_labels)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, basis={list(self.basis_labels)})"

    def basis_vector(self, i: int) -> np.ndarray:
        return np.eye(self.dim)[i]

    def check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"vector of shape {x.shape}, algebra has dim {self.dim}")
        return x


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x, y = alg.check(x), alg.check(y)
    return np.einsum("i,j,ijk->k", x, y, alg.c)


def bracket_span(alg: LieAlgebra, a: Subspace, b: Subspace | None = None) -> Subspace:
    """Span of all brackets ``[u, v]`` with u in a, v in b (b defaults to a)."""
    b = a if b is None else b
    if a.is_zero or b.is_zero:
        return Subspace.zero(alg.dim)
    gens = np.einsum("pi,qj,ijk->pqk", a.basis, b.basis, alg.c).reshape(-1, alg.dim)
    return Subspace(gens, alg.dim)


def ad_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix of ``y -> [x, y]`` acting on coordinate columns."""
    x = alg.check(x)
    return np.einsum("i,ijk->kj", x, alg.c)


def jacobi_residual(alg: LieAlgebra) -> float:
    c = alg.c
    jac = (np.einsum("ijm,mkl->ijkl", c, c)
           + np.einsum("jkm,mil->ijkl", c, c)
           + np.einsum("kim,mjl->ijkl", c, c))
    return float(np.max(np.linalg.norm(jac, axis=-1), initial=0.0))


def killing_form(alg: LieAlgebra) -> np.ndarray:
    """K[a, b] = trace(ad(b_a) ad(b_b))."""
    return np.einsum("ajk,bkj->ab", alg.c, alg.c)


def restricted_killing_form(alg: LieAlgebra, s: Subspace) -> np.ndarray:
    """Killing form of the subalgebra/ideal ``s`` in the basis ``s.basis``.

    Each ad is restricted to ``s``; s must be closed under bracket with itself.
    """
    if s.is_zero:
        return np.zeros((0, 0))
    bas = s.basis
    # ads[p] is the matrix of ad(bas[p]) restricted to s, in coordinates of bas.
    ads = np.einsum("pi,qj,ijk,rk->prq", bas, bas, alg.c, bas)
    return np.einsum("pab,qba->pq", ads, ads)


def center(alg: LieAlgebra) -> Subspace:
    n = alg.dim
    stacked = alg.c.transpose(1, 2, 0).reshape(n * n, n)
    return Subspace(null_space(stacked), n)


def derived_subalgebra(alg: LieAlgebra) -> Subspace:
    return bracket_span(alg, Subspace.whole(alg.dim))
