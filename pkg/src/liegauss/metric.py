"""Left-invariant metrics: inner products, Levi-Civita connection, curvature."""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidMetric, NotContained, RankDeficient
from .lie_core import RANK_RTOL, LieAlgebra, Subspace, bracket, null_space

DEFAULT_TOL = 1e-9
SYMMETRY_TOL = 1e-12


class InnerProduct:
    """Symmetric positive-definite bilinear form given by its Gram matrix."""

    def __init__(self, g):
        g = np.array(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InvalidMetric(f"metric must be a square matrix, got shape {g.shape}")
        if np.max(np.abs(g - g.T), initial=0.0) > SYMMETRY_TOL:
            raise InvalidMetric("metric matrix is not symmetric")
        g = 0.5 * (g + g.T)
        if g.size and np.linalg.eigvalsh(g)[0] <= 0.0:
            raise InvalidMetric("metric matrix is not positive definite")
        self.g = g
        self.g.setflags(write=False)

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(self(x, x)))

    def __eq__(self, other):
        return isinstance(other, InnerProduct) and np.array_equal(self.g, other.g)

    def __repr__(self):
        return f"InnerProduct(dim={self.dim})"


class MetricLieAlgebra:
    """A Lie algebra together with a left-invariant inner product."""

    def __init__(self, alg: LieAlgebra, ip: InnerProduct | np.ndarray):
        if not isinstance(ip, InnerProduct):
            ip = InnerProduct(ip)
        if ip.dim != alg.dim:
            raise DimensionMismatch(f"metric has dim {ip.dim}, algebra has dim {alg.dim}")
        self.alg = alg
        self.ip = ip

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def g(self) -> np.ndarray:
        return self.ip.g

    @cached_property
    def gamma(self) -> np.ndarray:
        """Connection tensor: connection(x, y) = einsum('i,j,ijk', x, y, gamma).

        Koszul formula for left-invariant fields,
        <v, z> = (<[x,y],z> - <[y,z],x> + <[z,x],y>) / 2, solved for v.
        """
        c, g = self.alg.c, self.g
        term1 = np.einsum("ijm,mz->ijz", c, g)        # <[b_i,b_j], b_z>
        term2 = np.einsum("jzm,mi->ijz", c, g)        # <[b_j,b_z], b_i>
        term3 = np.einsum("zim,mj->ijz", c, g)        # <[b_z,b_i], b_j>
        rhs = 0.5 * (term1 - term2 + term3)
        return np.linalg.solve(g, rhs.reshape(-1, self.dim).T).T.reshape(rhs.shape)

    def __repr__(self):
        return f"MetricLieAlgebra(dim={self.dim})"


def connection(m: MetricLieAlgebra, x, y) -> np.ndarray:
    """Levi-Civita connection of left-invariant fields, nabla_x y."""
    x, y = m.alg.check(x), m.alg.check(y)
    return np.einsum("i,j,ijk->k", x, y, m.gamma)


def curvature(m: MetricLieAlgebra, x, y, z) -> np.ndarray:
    """R(x, y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z."""
    x, y, z = m.alg.check(x), m.alg.check(y), m.alg.check(z)
    return (connection(m, x, connection(m, y, z))
            - connection(m, y, connection(m, x, z))
            - connection(m, bracket(m.alg, x, y), z))


def biinvariance_residual(m: MetricLieAlgebra) -> float:
    c, g = m.alg.c, m.g
    lhs = np.einsum("ijm,mk->ijk", c, g)   # <[b_i,b_j], b_k>
    rhs = np.einsum("im,jkm->ijk", g, c)   # <b_i, [b_j,b_k]>
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def is_biinvariant(m: MetricLieAlgebra, tol: float = DEFAULT_TOL) -> bool:
    return biinvariance_residual(m) <= tol


def orthonormalize(m: MetricLieAlgebra, vs: Sequence) -> np.ndarray:
    """Gram-Schmidt in input order, with one re-orthogonalization pass.

    Returns the orthonormal vectors as rows.  Raises RankDeficient if the
    inputs are numerically dependent.
    """
    g = m.g
    out: list[np.ndarray] = []
    for idx, v in enumerate(vs):
        v = m.alg.check(v)
        nv = float(np.sqrt(v @ g @ v))
        w = v.copy()
        for _ in range(2):
            for u in out:
                w = w - (u @ g @ w) * u
        nrm = float(np.sqrt(max(w @ g @ w, 0.0)))
        if nv == 0.0 or nrm <= RANK_RTOL * nv:
            raise RankDeficient(f"vector {idx} is (numerically) dependent on the previous ones")
        out.append(w / nrm)
    if not out:
        return np.zeros((0, m.dim))
    return np.array(out)


def complete_frame(m: MetricLieAlgebra, onb: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the metric complement of the rows of ``onb``.

    Built by Gram-Schmidt of the standard basis vectors (in index order)
    against ``onb``; dependent ones are skipped.
    """
    g = m.g
    frame = [u for u in onb]
    extra: list[np.ndarray] = []
    for i in range(m.dim):
        if len(frame) == m.dim:
            break
        w = np.eye(m.dim)[i]
        nv = float(np.sqrt(w @ g @ w))
        for _ in range(2):
            for u in frame:
                w = w - (u @ g @ w) * u
        nrm = float(np.sqrt(max(w @ g @ w, 0.0)))
        if nrm > 1e-6 * nv:
            w = w / nrm
            frame.append(w)
            extra.append(w)
    if len(frame) < m.dim:
        # Threshold skipped too many; fall back to an exact complement.
        comp = orthogonal_complement(m, Subspace(onb, m.dim))
        return comp.onb(g)
    if not extra:
        return np.zeros((0, m.dim))
    return np.array(extra)


def orthogonal_complement(m: MetricLieAlgebra, s: Subspace,
                          within: Subspace | None = None,
                          tol: float = DEFAULT_TOL) -> Subspace:
    """Metric-orthogonal complement of ``s`` inside ``within`` (default: everything)."""
    if within is None:
        within = Subspace.whole(m.dim)
    if s.ambient_dim != m.dim or within.ambient_dim != m.dim:
        raise DimensionMismatch("subspace ambient dimension differs from algebra dimension")
    if not within.contains(s, tol):
        raise NotContained("subspace is not contained in the ambient subspace")
    if within.is_zero:
        return Subspace.zero(m.dim)
    if s.is_zero:
        return Subspace(within.basis, m.dim)
    wb = within.basis
    coeffs = null_space(s.basis @ m.g @ wb.T)
    if coeffs.shape[0] == 0:
        return Subspace.zero(m.dim)
    return Subspace(coeffs @ wb, m.dim)
