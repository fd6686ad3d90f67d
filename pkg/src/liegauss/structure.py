"""Structural decompositions: Lie triple systems, compact splittings, simple ideals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (NotBiinvariant, NotClosed, NotContained, NotSemisimple,
                     NotSubalgebra, SplitFailed)
from .lie_core import (LieAlgebra, Subspace, bracket_span, null_space,
                       restricted_killing_form)
from .metric import DEFAULT_TOL, MetricLieAlgebra, biinvariance_residual, orthogonal_complement

DEFAULT_SEED = 42
EIGEN_GAP_RTOL = 1e-6
KILLING_FIT_RTOL = 1e-9


@dataclass
class CompactSplit:
    abelian_part: Subspace
    semisimple_part: Subspace


@dataclass
class SimpleIdealList:
    ideals: list[Subspace] = field(default_factory=list)
    killing_multipliers: list[float | None] = field(default_factory=list)

    def __len__(self):
        return len(self.ideals)


def lie_triple_residual(alg: LieAlgebra, w: Subspace) -> float:
    """Largest norm of the part of [[u, v], s] outside w, over basis triples of w."""
    if w.is_zero:
        return 0.0
    b = w.basis
    uv = np.einsum("pi,qj,ijk->pqk", b, b, alg.c)
    triple = np.einsum("pqm,rj,mjk->pqrk", uv, b, alg.c).reshape(-1, alg.dim)
    return w.residual(triple)


def is_lie_triple(alg: LieAlgebra, w: Subspace, tol: float = DEFAULT_TOL) -> bool:
    return lie_triple_residual(alg, w) <= tol


def is_subalgebra(alg: LieAlgebra, s: Subspace, tol: float = DEFAULT_TOL) -> bool:
    return s.contains(bracket_span(alg, s), tol)


def span_of(*subspaces: Subspace) -> Subspace:
    n = subspaces[0].ambient_dim
    return Subspace(np.vstack([s.basis for s in subspaces]), n)


def generated_subalgebra(alg: LieAlgebra, w: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """w + [w, w]; raises NotClosed when that is not a subalgebra."""
    result = span_of(w, bracket_span(alg, w))
    if not is_subalgebra(alg, result, tol):
        raise NotClosed("w + [w, w] is not closed under the bracket; w is not a Lie triple system")
    return result


def metric_projection(m: MetricLieAlgebra, s: Subspace, target: Subspace) -> Subspace:
    """Image of s under the metric-orthogonal projection onto target."""
    if s.is_zero or target.is_zero:
        return Subspace.zero(m.dim)
    p = target.metric_projector(m.g)
    return Subspace(s.basis @ p.T, m.dim)


def compact_split(m: MetricLieAlgebra, sub: Subspace, tol: float = DEFAULT_TOL) -> CompactSplit:
    if biinvariance_residual(m) > tol:
        raise NotBiinvariant("compact splitting needs a biinvariant metric")
    if not is_subalgebra(m.alg, sub, tol):
        raise NotSubalgebra("subspace is not closed under the bracket")
    semisimple = bracket_span(m.alg, sub)
    abelian = orthogonal_complement(m, semisimple, sub, tol)
    if not abelian.is_zero:
        leak = bracket_span(m.alg, abelian, sub)
        if not leak.is_zero and np.max(np.abs(leak.generators), initial=0.0) > tol:
            raise SplitFailed("complement of the derived algebra is not central")
    return CompactSplit(abelian, semisimple)


def _restricted_ads(m: MetricLieAlgebra, q: np.ndarray) -> np.ndarray:
    """ads[p][r, t] = <[q_p, q_t], q_r> for a metric-orthonormal q (rows)."""
    return np.einsum("pi,tj,ijk,kl,rl->prt", q, q, m.alg.c, m.g, q)


def _split_once(m: MetricLieAlgebra, s: Subspace, rng: np.random.Generator,
                attempts: int = 8) -> list[Subspace]:
    q = s.onb(m.g)
    d = q.shape[0]
    if d <= 1:
        return [s]
    ads = _restricted_ads(m, q)
    eye = np.eye(d)
    system = np.vstack([np.kron(a, eye) - np.kron(eye, a.T) for a in ads])
    commutant = null_space(system)
    if commutant.shape[0] <= 1:
        return [s]
    for _ in range(attempts):
        coeffs = rng.standard_normal(commutant.shape[0])
        op = (coeffs @ commutant).reshape(d, d)
        op = 0.5 * (op + op.T)
        evals, evecs = np.linalg.eigh(op)
        scale = max(float(np.max(np.abs(evals))), 1e-300)
        cuts = np.nonzero(np.diff(evals) > EIGEN_GAP_RTOL * scale)[0] + 1
        if cuts.size == 0:
            continue
        groups = np.split(np.arange(d), cuts)
        return [Subspace(evecs[:, idx].T @ q, m.dim) for idx in groups]
    return [s]


def _first_coordinate(s: Subspace) -> int:
    weights = np.sum(s.basis ** 2, axis=0)
    return int(np.argmax(weights > 1e-9))


def killing_multiplier(m: MetricLieAlgebra, s: Subspace) -> float | None:
    """lambda with <x, y> = lambda * Tr(ad x ad y) on s (ad restricted to s), if it exists."""
    b = s.basis
    gram = b @ m.g @ b.T
    kil = restricted_killing_form(m.alg, s)
    denom = float(np.sum(kil * kil))
    if denom == 0.0:
        return None
    lam = float(np.sum(gram * kil)) / denom
    if np.linalg.norm(gram - lam * kil) > KILLING_FIT_RTOL * np.linalg.norm(gram):
        return None
    return lam


def simple_ideals(m: MetricLieAlgebra, semisimple: Subspace,
                  rng: np.random.Generator | None = None,
                  tol: float = DEFAULT_TOL) -> SimpleIdealList:
    """Decompose a semisimple subalgebra into simple ideals.

    Eigenspaces of a random symmetric element of the commutant of the
    restricted adjoint action are ideals; split recursively until each piece
    has a one-dimensional commutant.
    """
    if semisimple.is_zero:
        return SimpleIdealList()
    if rng is None:
        rng = np.random.default_rng(DEFAULT_SEED)
    if not is_subalgebra(m.alg, semisimple, tol):
        raise NotSemisimple("subspace is not closed under the bracket")
    kil = restricted_killing_form(m.alg, semisimple)
    ev = np.abs(np.linalg.eigvalsh(0.5 * (kil + kil.T)))
    if ev.max() == 0.0 or ev.min() <= 1e-9 * ev.max():
        raise NotSemisimple("Killing form restricted to the subspace is degenerate")

    done: list[Subspace] = []
    todo = [semisimple]
    while todo:
        s = todo.pop()
        parts = _split_once(m, s, rng)
        if len(parts) == 1:
            done.append(s)
        else:
            todo.extend(parts)
    done.sort(key=_first_coordinate)
    return SimpleIdealList(done, [killing_multiplier(m, s) for s in done])


def is_ideal(alg: LieAlgebra, ambient: Subspace, s: Subspace, tol: float = DEFAULT_TOL) -> bool:
    if not ambient.contains(s, tol):
        raise NotContained("s is not contained in the ambient subspace")
    return s.contains(bracket_span(alg, ambient, s), tol)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    n = a.ambient_dim
    if a.is_zero or b.is_zero:
        return Subspace.zero(n)
    eye = np.eye(n)
    stacked = np.vstack([eye - a.projector(), eye - b.projector()])
    return Subspace(null_space(stacked), n)
