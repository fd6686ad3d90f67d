"""Pointwise harmonicity residuals for the Gauss map, and the totally geodesic classifier.

Every residual is returned as an n x q matrix whose entry (j, alpha) is the
left-hand side of the corresponding equation for tangent index j and normal
index alpha, evaluated in orthonormal frames.  Internally all computations
are carried out in frame coordinates, where the metric is the identity:

    gam[a, b, c] = <nabla_{Y_a} Y_b, Y_c>
    brk[a, b, c] = <[Y_a, Y_b], Y_c>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (DegenerateLambda, DimensionMismatch, FrameNotOrthonormal,
                     InvalidParameter, NoWitness, NotBiinvariant, NotLieTriple,
                     WitnessNotBiinvariant)
from .lie_core import Subspace, bracket_span, restricted_killing_form
from .metric import (DEFAULT_TOL, InnerProduct, MetricLieAlgebra, biinvariance_residual,
                     complete_frame, orthogonal_complement, orthonormalize)
from .structure import (CompactSplit, SimpleIdealList, compact_split, generated_subalgebra,
                        lie_triple_residual, metric_projection, simple_ideals,
                        subspace_intersect)

FRAME_TOL = 1e-9
B_SYMMETRY_TOL = 1e-12


class Criterion(str, Enum):
    EQ1 = "EQ1"              # general left-invariant criterion
    EQ1_2 = "EQ1_2"          # totally geodesic form
    EQ2 = "EQ2"              # biinvariant form
    PR2EQ1_1 = "PR2EQ1_1"    # totally geodesic, biinvariant, normal projections
    PR2EQ1_2 = "PR2EQ1_2"    # same, tangent projections


@dataclass
class ImmersionPointData:
    tangent_frame: np.ndarray            # n x N, rows Y_1..Y_n
    normal_frame: np.ndarray             # q x N, rows Y_{n+1}..Y_{n+q}
    b: np.ndarray                        # n x n x q second fundamental form
    dH: np.ndarray                       # n x q, <nabla_{Y_j}(nH), Y_alpha>
    dH_defaulted: bool = False

    def __post_init__(self):
        self.tangent_frame = np.atleast_2d(np.asarray(self.tangent_frame, dtype=float))
        self.normal_frame = np.atleast_2d(np.asarray(self.normal_frame, dtype=float))
        n, q = self.n, self.q
        self.b = np.zeros((n, n, q)) if self.b is None else np.asarray(self.b, dtype=float)
        if self.dH is None:
            self.dH = np.zeros((n, q))
            self.dH_defaulted = True
        self.dH = np.asarray(self.dH, dtype=float)
        if self.b.shape != (n, n, q):
            raise DimensionMismatch(f"b has shape {self.b.shape}, expected {(n, n, q)}")
        if self.dH.shape != (n, q):
            raise DimensionMismatch(f"dH has shape {self.dH.shape}, expected {(n, q)}")
        if np.max(np.abs(self.b - self.b.transpose(1, 0, 2)), initial=0.0) > B_SYMMETRY_TOL:
            raise DimensionMismatch("b is not symmetric in its first two indices")

    @classmethod
    def totally_geodesic(cls, m: MetricLieAlgebra, tangent: Subspace) -> "ImmersionPointData":
        t, nrm = frames_for(m, tangent)
        return cls(t, nrm, None, None)

    @property
    def n(self) -> int:
        return self.tangent_frame.shape[0]

    @property
    def q(self) -> int:
        return self.normal_frame.shape[0]

    @property
    def frame(self) -> np.ndarray:
        return np.vstack([self.tangent_frame, self.normal_frame])

    def mean_curvature(self) -> np.ndarray:
        """nH at the point, as an algebra vector."""
        h = np.einsum("iia->a", self.b)
        return h @ self.normal_frame

    def check(self, m: MetricLieAlgebra):
        frame = self.frame
        if frame.shape[1] != m.dim:
            raise DimensionMismatch(f"frame vectors have length {frame.shape[1]}, algebra dim {m.dim}")
        if frame.shape[0] != m.dim:
            raise DimensionMismatch(f"frame has {frame.shape[0]} vectors, algebra dim {m.dim}")
        gram = frame @ m.g @ frame.T
        err = float(np.max(np.abs(gram - np.eye(m.dim))))
        if err > FRAME_TOL:
            raise FrameNotOrthonormal(f"combined frame deviates from orthonormal by {err:.3g}")


@dataclass
class HarmonicityReport:
    criterion_id: Criterion
    residual: np.ndarray
    tol: float = DEFAULT_TOL
    max_abs: float = field(init=False)
    harmonic: bool = field(init=False)

    def __post_init__(self):
        self.residual = np.atleast_2d(self.residual)
        self.max_abs = float(np.max(np.abs(self.residual), initial=0.0))
        self.harmonic = self.max_abs <= self.tol

    @property
    def n(self) -> int:
        return self.residual.shape[0]

    def at(self, j: int, alpha: int) -> float:
        """Entry with 1-based indices: j in 1..n, alpha in n+1..n+q."""
        return float(self.residual[j - 1, alpha - self.n - 1])

    def entries(self):
        """Yield (j, alpha, value) with 1-based indices."""
        n, q = self.residual.shape
        for j in range(n):
            for a in range(q):
                yield j + 1, n + a + 1, float(self.residual[j, a])


def frames_for(m: MetricLieAlgebra, tangent: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Tangent ONB (Gram-Schmidt of the generators) and the completing normal ONB."""
    if tangent.ambient_dim != m.dim:
        raise DimensionMismatch("tangent subspace lives in a different dimension")
    t = orthonormalize(m, list(tangent.generators))
    return t, complete_frame(m, t)


def _frame_tensors(m: MetricLieAlgebra, frame: np.ndarray):
    gy = m.g @ frame.T
    gam = np.einsum("ai,bj,ijk,kc->abc", frame, frame, m.gamma, gy)
    brk = np.einsum("ai,bj,ijk,kc->abc", frame, frame, m.alg.c, gy)
    return gam, brk


def residual_eq1(m: MetricLieAlgebra, d: ImmersionPointData,
                 tol: float = DEFAULT_TOL) -> HarmonicityReport:
    d.check(m)
    n = d.n
    gam, brk = _frame_tensors(m, d.frame)
    T, N = slice(0, n), slice(n, None)
    # sum_i R(Y_j, Y_i) Y_i
    curv = (np.einsum("iic,jcx->jx", gam[T, T], gam[T])
            - np.einsum("jic,icx->jx", gam[T, T], gam[T])
            - np.einsum("jic,cix->jx", brk[T, T], gam[:, T]))
    t1 = curv[:, N]
    t2 = -np.einsum("iic,cja->ja", gam[T, T], gam[:, T, N])
    h = np.einsum("iia->a", d.b)
    t3 = np.einsum("g,gja->ja", h, gam[N, T, N]) - d.dH
    t4 = 2.0 * np.einsum("ika,ikj->ja", d.b, gam[T, T, T])
    t5 = 2.0 * np.einsum("ijg,iga->ja", d.b, gam[T, N, N])
    t6 = -np.einsum("ijk,iak->ja", gam[T, T, T], gam[T, N, T])
    t7 = np.einsum("ijc,iac->ja", gam[T, T, N], gam[T, N, N])
    return HarmonicityReport(Criterion.EQ1, t1 + t2 + t3 + t4 + t5 + t6 + t7, tol)


def residual_eq1_2(m: MetricLieAlgebra, tangent: Subspace,
                   tol: float = DEFAULT_TOL) -> HarmonicityReport:
    """Totally geodesic criterion, evaluated with frames built from ``tangent``."""
    t, nrm = frames_for(m, tangent)
    n = t.shape[0]
    gam, brk = _frame_tensors(m, np.vstack([t, nrm]))
    T = slice(0, n)
    a1 = np.einsum("iic,jcx->jx", gam[T, T], brk[T])
    a2 = np.einsum("jic,icx->jx", brk[T, T], brk[T])
    # U_i = [Y_i, Y_j]^T - (nabla_{Y_j} Y_i)^perp, one vector per (j, i)
    u = np.concatenate([brk[T, T, :n].transpose(1, 0, 2),
                        -gam[T, T, n:]], axis=2)          # u[j, i, c]
    a3 = 2.0 * np.einsum("jic,icx->jx", u, gam[T])
    return HarmonicityReport(Criterion.EQ1_2, (a1 + a2 + a3)[:, n:], tol)


def _require_biinvariant(m: MetricLieAlgebra, tol: float):
    res = biinvariance_residual(m)
    if res > tol:
        raise NotBiinvariant(f"metric is not biinvariant (residual {res:.3g})")


def residual_eq2(m: MetricLieAlgebra, d: ImmersionPointData,
                 tol: float = DEFAULT_TOL) -> HarmonicityReport:
    _require_biinvariant(m, tol)
    d.check(m)
    n = d.n
    _, brk = _frame_tensors(m, d.frame)
    T, N = slice(0, n), slice(n, None)
    h = np.einsum("iia->a", d.b)
    # for a biinvariant metric nabla_X Y = [X, Y] / 2
    r1 = 0.5 * np.einsum("g,gja->ja", h, brk[N, T, N]) - d.dH
    r2 = np.einsum("ijg,iga->ja", d.b, brk[T, N, N])
    r3 = 0.5 * np.einsum("ijc,iac->ja", brk[T, T, N], brk[T, N, N])
    return HarmonicityReport(Criterion.EQ2, r1 + r2 + r3, tol)


def residual_pr2(m: MetricLieAlgebra, tangent: Subspace,
                 tol: float = DEFAULT_TOL) -> tuple[HarmonicityReport, HarmonicityReport]:
    """(normal-form, tangent-form) residuals for a totally geodesic tangent space."""
    _require_biinvariant(m, tol)
    lts = lie_triple_residual(m.alg, tangent)
    if lts > tol:
        raise NotLieTriple(f"tangent space is not a Lie triple system (residual {lts:.3g})")
    t, nrm = frames_for(m, tangent)
    n = t.shape[0]
    _, brk = _frame_tensors(m, np.vstack([t, nrm]))
    T, N = slice(0, n), slice(n, None)
    normal = np.einsum("ijc,iac->ja", brk[T, T, N], brk[T, N, N])
    tang = np.einsum("ijk,iak->ja", brk[T, T, T], brk[T, N, T])
    return (HarmonicityReport(Criterion.PR2EQ1_1, normal, tol),
            HarmonicityReport(Criterion.PR2EQ1_2, tang, tol))


@dataclass
class Theorem2Classification:
    tangent: Subspace
    n_bar: Subspace
    split: CompactSplit
    w_script: Subspace
    w_bar: Subspace
    v: Subspace
    ideals: SimpleIdealList
    w_tilde: Subspace
    projections: list[Subspace]
    case1_applies: bool
    case2_applies: bool
    case3_applies: bool
    witness_index: int | None = None     # 0-based index into ideals


def _multipliers_equal(mults) -> bool:
    if any(lam is None or lam >= 0 for lam in mults):
        return False
    ref = mults[0]
    return all(abs(lam - ref) <= 1e-9 * abs(ref) for lam in mults)


def classify_theorem2(m: MetricLieAlgebra, tangent: Subspace,
                      rng: np.random.Generator | None = None,
                      tol: float = DEFAULT_TOL) -> Theorem2Classification:
    _require_biinvariant(m, tol)
    lts = lie_triple_residual(m.alg, tangent)
    if lts > tol:
        raise NotLieTriple(f"tangent space is not a Lie triple system (residual {lts:.3g})")
    alg = m.alg
    n_bar = generated_subalgebra(alg, tangent, tol)
    split = compact_split(m, n_bar, tol)
    w_script = metric_projection(m, tangent, split.semisimple_part)
    w_bar = subspace_intersect(w_script, bracket_span(alg, w_script))
    v = orthogonal_complement(m, w_bar, split.semisimple_part, tol)
    ideals = simple_ideals(m, v, rng, tol)
    w_tilde = subspace_intersect(w_script, v)
    projections = [metric_projection(m, w_tilde, s) for s in ideals.ideals]
    bad = [l for l, p in enumerate(projections)
           if not subspace_intersect(p, bracket_span(alg, p)).is_zero]
    case3 = bool(bad)
    case1 = v.is_zero or _multipliers_equal(ideals.killing_multipliers)
    return Theorem2Classification(
        tangent=tangent, n_bar=n_bar, split=split, w_script=w_script, w_bar=w_bar,
        v=v, ideals=ideals, w_tilde=w_tilde, projections=projections,
        case1_applies=case1, case2_applies=not case3, case3_applies=case3,
        witness_index=bad[0] if bad else None)


def _killing_on(m: MetricLieAlgebra, s: Subspace) -> np.ndarray:
    """Bilinear form X, Y -> Tr(ad P(X) ad P(Y)) on the whole algebra, P onto s."""
    coords = s.basis @ s.metric_projector(m.g)
    return coords.T @ restricted_killing_form(m.alg, s) @ coords


def _witness_gram(m: MetricLieAlgebra, cls: Theorem2Classification, lam: float) -> np.ndarray:
    q = np.eye(m.dim) - cls.v.metric_projector(m.g)
    gram = q.T @ m.g @ q
    for l, s in enumerate(cls.ideals.ideals):
        kil = _killing_on(m, s)
        gram = gram - kil
        if l == cls.witness_index:
            gram = gram - lam ** 2 * kil
    return 0.5 * (gram + gram.T)


@dataclass
class WitnessResult:
    metric: InnerProduct
    lam: float
    tangent_form: HarmonicityReport


def find_witness(m: MetricLieAlgebra, cls: Theorem2Classification, lam: float = 1.0,
                 tol: float = DEFAULT_TOL, retries: int = 5) -> WitnessResult:
    """Build the rescaled biinvariant metric and confirm non-harmonicity in it.

    lam is doubled (at most ``retries`` times) if the residual vanishes.
    """
    if not cls.case3_applies or cls.witness_index is None:
        raise NoWitness("classification is not case 3; no witness metric exists")
    if lam == 0 or not np.isfinite(lam):
        raise InvalidParameter("lambda must be a nonzero finite number")
    for _ in range(retries + 1):
        ip = InnerProduct(_witness_gram(m, cls, lam))
        m2 = MetricLieAlgebra(m.alg, ip)
        res = biinvariance_residual(m2)
        if res > tol:
            raise WitnessNotBiinvariant(
                f"witness metric is not biinvariant (residual {res:.3g}); V is not an ideal of the algebra")
        _, tang = residual_pr2(m2, cls.tangent, tol)
        if not tang.harmonic:
            return WitnessResult(ip, lam, tang)
        lam *= 2.0
    raise DegenerateLambda("residual vanished for every tried lambda")


def witness_metric(m: MetricLieAlgebra, cls: Theorem2Classification, lam: float = 1.0,
                   tol: float = DEFAULT_TOL) -> InnerProduct:
    return find_witness(m, cls, lam, tol).metric
