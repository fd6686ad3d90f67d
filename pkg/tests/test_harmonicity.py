import numpy as np
import pytest

from liegauss.errors import (DimensionMismatch, FrameNotOrthonormal, InvalidParameter, NoWitness,
                             NotBiinvariant, NotLieTriple)
from liegauss.harmonicity import (Criterion, ImmersionPointData, classify_theorem2, find_witness,
                                  frames_for, residual_eq1, residual_eq1_2, residual_eq2,
                                  residual_pr2, witness_metric)
from liegauss.lie_core import Subspace
from liegauss.metric import MetricLieAlgebra, is_biinvariant

from conftest import (CASE2_W, DIAGONAL_W, heisenberg3, random_b, random_biinvariant,
                      random_frames, random_metric, so3, so3xso3_metric)


def test_frames_follow_generator_order():
    m = so3xso3_metric(2.0)
    t, nrm = frames_for(m, DIAGONAL_W)
    s = np.sqrt(5.0)
    assert np.allclose(t[0], [1 / s, 0, 0, 1 / s, 0, 0])
    assert np.allclose(t[1], [0, 1 / s, 0, 0, -1 / s, 0])
    assert np.allclose(nrm[0], np.array([4.0, 0, 0, -1, 0, 0]) / (2 * s))
    full = np.vstack([t, nrm])
    assert np.max(np.abs(full @ m.g @ full.T - np.eye(6))) <= 1e-12


def test_report_indexing():
    _, tang = residual_pr2(so3xso3_metric(2.0), DIAGONAL_W)
    assert tang.criterion_id is Criterion.PR2EQ1_2
    entries = list(tang.entries())
    assert len(entries) == 9
    assert entries[0][:2] == (1, 4) and entries[-1][:2] == (3, 6)
    assert all(tang.at(j, a) == v for j, a, v in entries)


def test_immersion_data_validation():
    m = so3xso3_metric(1.0)
    t, nrm = frames_for(m, DIAGONAL_W)
    d = ImmersionPointData(t, nrm, None, None)
    assert d.dH_defaulted and d.b.shape == (3, 3, 3)
    b = np.zeros((3, 3, 3))
    b[0, 1, 0] = 1.0
    with pytest.raises(DimensionMismatch):
        ImmersionPointData(t, nrm, b, None)
    with pytest.raises(DimensionMismatch):
        ImmersionPointData(t, nrm, None, np.zeros((2, 3)))
    with pytest.raises(FrameNotOrthonormal):
        residual_eq1(m, ImmersionPointData(2 * t, nrm, None, None))


def test_mean_curvature():
    m = so3xso3_metric(1.0)
    t, nrm = frames_for(m, DIAGONAL_W)
    b = np.zeros((3, 3, 3))
    b[0, 0, 1] = 1.0
    b[2, 2, 1] = 2.0
    d = ImmersionPointData(t, nrm, b, None)
    assert np.allclose(d.mean_curvature(), 3.0 * nrm[1])


def test_eq2_and_pr2_need_biinvariant(rng):
    m = MetricLieAlgebra(heisenberg3(), np.eye(3))
    t, nrm = random_frames(m, rng, n=1)
    with pytest.raises(NotBiinvariant):
        residual_eq2(m, ImmersionPointData(t, nrm, None, None))
    with pytest.raises(NotBiinvariant):
        residual_pr2(m, Subspace([[1.0, 0, 0]]))


def test_pr2_needs_lie_triple():
    with pytest.raises(NotLieTriple):
        residual_pr2(so3xso3_metric(1.0), Subspace([[1.0, 0, 0, 0, 0, 0], [0, 1.0, 0, 1.0, 0, 0]]))


def test_one_dimensional_tangent_is_harmonic():
    # a one-parameter subgroup of a biinvariant group is a geodesic with harmonic Gauss map
    normal, tang = residual_pr2(so3xso3_metric(2.0), Subspace([[1.0, 2.0, 0, 0.5, 0, 1.0]]))
    assert normal.harmonic and tang.harmonic


def test_subalgebra_tangent_is_harmonic():
    normal, tang = residual_pr2(so3xso3_metric(2.0), Subspace(np.eye(6)[:3]))
    assert normal.max_abs <= 1e-12 and tang.max_abs <= 1e-12


@pytest.mark.parametrize("scale", [0.25, 3.0, 100.0])
def test_verdict_invariant_under_metric_scaling(scale):
    for w in (DIAGONAL_W, CASE2_W):
        base = so3xso3_metric(2.0)
        scaled = MetricLieAlgebra(base.alg, scale * base.g)
        for rep_a, rep_b in zip(residual_pr2(base, w), residual_pr2(scaled, w)):
            assert rep_a.harmonic == rep_b.harmonic
            # each bracket factor picks up scale**-0.5, and every entry has two factors
            assert np.allclose(rep_b.residual, rep_a.residual / scale, atol=1e-12)
        assert residual_eq1_2(base, w).harmonic == residual_eq1_2(scaled, w).harmonic


def test_eq1_equals_eq2_on_biinvariant(rng):
    for _ in range(100):
        m = random_biinvariant(rng)
        t, nrm = random_frames(m, rng)
        d = ImmersionPointData(t, nrm, random_b(rng, t.shape[0], nrm.shape[0]),
                               rng.standard_normal((t.shape[0], nrm.shape[0])))
        assert np.max(np.abs(residual_eq1(m, d).residual - residual_eq2(m, d).residual)) <= 1e-9


def test_eq1_totally_geodesic_matches_eq1_2(rng):
    for _ in range(100):
        m = random_metric(rng)
        w = Subspace(rng.standard_normal((int(rng.integers(1, m.dim)), m.dim)))
        t, nrm = frames_for(m, w)
        d = ImmersionPointData(t, nrm, None, None)
        assert np.max(np.abs(residual_eq1(m, d).residual - residual_eq1_2(m, w).residual)) <= 1e-9


def test_eq1_is_linear_in_dh(rng):
    m = random_metric(rng)
    t, nrm = random_frames(m, rng)
    n, q = t.shape[0], nrm.shape[0]
    b = random_b(rng, n, q)
    dh = rng.standard_normal((n, q))
    r0 = residual_eq1(m, ImmersionPointData(t, nrm, b, None)).residual
    r1 = residual_eq1(m, ImmersionPointData(t, nrm, b, dh)).residual
    assert np.allclose(r1, r0 - dh, atol=1e-12)


def test_classify_diagonal_case3():
    cls = classify_theorem2(so3xso3_metric(2.0), DIAGONAL_W, np.random.default_rng(42))
    assert cls.case3_applies and not cls.case2_applies and not cls.case1_applies
    assert cls.witness_index == 0
    assert cls.n_bar.rank == 6 and cls.w_bar.is_zero and cls.v.rank == 6
    assert cls.ideals.killing_multipliers == pytest.approx([-0.5, -2.0])


def test_classify_case2():
    cls = classify_theorem2(so3xso3_metric(2.0), CASE2_W, np.random.default_rng(0))
    assert cls.case2_applies and not cls.case3_applies and cls.witness_index is None
    with pytest.raises(NoWitness):
        find_witness(so3xso3_metric(2.0), cls)


def test_classify_subalgebra_gives_empty_v():
    m = MetricLieAlgebra(so3(), np.eye(3))
    cls = classify_theorem2(m, Subspace.whole(3))
    assert cls.v.is_zero and cls.case1_applies and cls.case2_applies


def test_witness_metric():
    m = so3xso3_metric(2.0)
    cls = classify_theorem2(m, DIAGONAL_W, np.random.default_rng(42))
    w = find_witness(m, cls, lam=1.0)
    assert w.lam == 1.0 and not w.tangent_form.harmonic
    assert is_biinvariant(MetricLieAlgebra(m.alg, w.metric))
    assert np.allclose(w.metric.g, np.diag([4.0] * 3 + [2.0] * 3))
    lam2 = witness_metric(m, cls, lam=3.0)
    assert np.allclose(lam2.g, np.diag([20.0] * 3 + [2.0] * 3))
    with pytest.raises(InvalidParameter):
        find_witness(m, cls, lam=0.0)
