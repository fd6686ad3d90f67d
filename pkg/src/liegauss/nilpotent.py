"""2-step nilpotent metric Lie algebras: J(Z) operators and geodesic Gauss maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotCentral, NotTwoStep, ZeroVector
from .lie_core import Subspace, bracket, center, derived_subalgebra
from .metric import DEFAULT_TOL, MetricLieAlgebra, orthogonal_complement

DEFAULT_SAMPLES = 1000


@dataclass
class NilpotentStructure:
    m: MetricLieAlgebra
    z: Subspace
    v: Subspace
    z_onb: np.ndarray
    v_onb: np.ndarray
    j_cache: list[np.ndarray]   # J(z_onb[k]) in v_onb coordinates

    def split(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(V part, Z part) of an algebra vector."""
        x = self.m.alg.check(x)
        g = self.m.g
        xz = (self.z_onb @ g @ x) @ self.z_onb if self.z_onb.size else np.zeros_like(x)
        return x - xz, xz


def build_nilpotent(m: MetricLieAlgebra, tol: float = DEFAULT_TOL) -> NilpotentStructure:
    derived = derived_subalgebra(m.alg)
    if derived.is_zero:
        raise NotTwoStep("algebra is abelian ([N, N] = 0)")
    z = center(m.alg)
    if not z.contains(derived, tol):
        raise NotTwoStep("[N, N] is not central ([[N, N], N] != 0)")
    v = orthogonal_complement(m, z, tol=tol)
    z_onb, v_onb = z.onb(m.g), v.onb(m.g)
    # <J(Z) x_t, x_r> = <[x_t, x_r], Z>
    brackets = np.einsum("ti,rj,ijk->trk", v_onb, v_onb, m.alg.c)
    j_cache = [np.einsum("trk,kl,l->rt", brackets, m.g, zk) for zk in z_onb]
    for jm in j_cache:
        if np.max(np.abs(jm + jm.T), initial=0.0) > tol:
            raise NotTwoStep("J(Z) is not skew-symmetric")
    return NilpotentStructure(m, z, v, z_onb, v_onb, j_cache)


def j_operator(ns: NilpotentStructure, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Matrix of J(z) on V, in the orthonormal basis ``ns.v_onb``."""
    z = ns.m.alg.check(z)
    if ns.z.residual(z) > tol * max(1.0, float(np.linalg.norm(z))):
        raise NotCentral("vector is not in the center")
    coeffs = ns.z_onb @ ns.m.g @ z
    d = ns.v_onb.shape[0]
    return sum((a * jm for a, jm in zip(coeffs, ns.j_cache)), np.zeros((d, d)))


def apply_j(ns: NilpotentStructure, z, x) -> np.ndarray:
    """J(z) x as an algebra vector (x is projected to V first)."""
    jm = j_operator(ns, z)
    coords = ns.v_onb @ ns.m.g @ ns.m.alg.check(x)
    return (jm @ coords) @ ns.v_onb


@dataclass
class NonsingularReport:
    nonsingular_witnessed: bool
    singular_z: np.ndarray | None
    probabilistic: bool
    samples: int
    min_abs_det: float


def nonsingular_probe(ns: NilpotentStructure, samples: int = DEFAULT_SAMPLES,
                      seed: int = 42, tol: float = DEFAULT_TOL) -> NonsingularReport:
    """Look for a nonzero central Z with singular J(Z).

    Exact when dim Z = 1; otherwise random unit samples, so a negative result
    is only probabilistic.
    """
    k = ns.z_onb.shape[0]
    if k == 1:
        det = abs(float(np.linalg.det(ns.j_cache[0])))
        singular = det <= tol
        return NonsingularReport(not singular, ns.z_onb[0] if singular else None,
                                 False, 1, det)
    rng = np.random.default_rng(seed)
    best = np.inf
    for s in range(1, samples + 1):
        a = rng.standard_normal(k)
        a /= np.linalg.norm(a)
        z = a @ ns.z_onb
        det = abs(float(np.linalg.det(j_operator(ns, z))))
        best = min(best, det)
        if det <= tol:
            return NonsingularReport(False, z, True, s, det)
    return NonsingularReport(True, None, True, samples, best)


def nilpotent_connection(ns: NilpotentStructure, x, y) -> np.ndarray:
    """Levi-Civita connection from the V/Z splitting formulas."""
    xv, xz = ns.split(x)
    yv, yz = ns.split(y)
    return (0.5 * bracket(ns.m.alg, xv, yv)
            - 0.5 * apply_j(ns, yz, xv)
            - 0.5 * apply_j(ns, xz, yv))


@dataclass
class GeodesicVerdict:
    x_part: np.ndarray
    z_part: np.ndarray
    jzx_norm: float
    residual_norm: float
    harmonic: bool
    one_parameter: bool


def geodesic_gauss_verdict(ns: NilpotentStructure, v,
                           tol: float = DEFAULT_TOL) -> GeodesicVerdict:
    """Is the Gauss map of the geodesic through e with direction v harmonic at e?

    The residual is |(J(Z)^2 X)^perp| for the unit tangent X + Z, perp taken
    against the tangent line.
    """
    v = ns.m.alg.check(v)
    ip = ns.m.ip
    nrm = ip.norm(v)
    if nrm == 0.0:
        raise ZeroVector("direction vector is zero")
    y1 = v / nrm
    x, z = ns.split(y1)
    jx = apply_j(ns, z, x)
    j2x = apply_j(ns, z, jx)
    perp = j2x - ip(j2x, y1) * y1
    jzx = ip.norm(jx)
    harmonic = jzx <= tol
    return GeodesicVerdict(x, z, jzx, ip.norm(perp), harmonic, harmonic)
