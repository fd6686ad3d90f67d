import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from liegauss.errors import DimensionMismatch, InvalidStructureConstants
from liegauss.lie_core import (LieAlgebra, Subspace, ad_matrix, bracket, center,
                               derived_subalgebra, jacobi_residual, killing_form)

from conftest import abelian, heisenberg3, so3, so3xso3, so3xso3_metric

e = np.eye(3)
finite = st.floats(-10, 10, allow_nan=False)


def jacobi_oracle(c):
    """Plain triple loop over basis triples."""
    n = c.shape[0]

    def br(x, y):
        out = np.zeros(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    out[k] += x[i] * y[j] * c[i, j, k]
        return out

    basis = np.eye(n)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = (br(br(basis[i], basis[j]), basis[k]) + br(br(basis[j], basis[k]), basis[i])
                     + br(br(basis[k], basis[i]), basis[j]))
                worst = max(worst, float(np.sqrt(np.sum(s * s))))
    return worst


def test_bracket_so3():
    assert np.allclose(bracket(so3(), e[0], e[1]), e[2])
    assert np.allclose(bracket(so3(), e[1], e[0]), -e[2])


def test_bracket_heisenberg():
    assert np.array_equal(bracket(heisenberg3(), e[0], e[1]), e[2])


def test_bracket_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        bracket(so3(), [1, 0], [0, 1, 0])


@given(arrays(float, 6, elements=finite))
def test_bracket_self_is_zero(x):
    assert np.allclose(bracket(so3xso3(), x, x), 0.0, atol=1e-12)


@settings(max_examples=100)
@given(arrays(float, 6, elements=finite), arrays(float, 6, elements=finite))
def test_bracket_antisymmetry(x, y):
    alg = so3xso3()
    assert np.max(np.abs(bracket(alg, x, y) + bracket(alg, y, x))) <= 1e-12


@given(arrays(float, 6, elements=finite), arrays(float, 6, elements=finite), finite, finite)
def test_ad_linearity(x, y, a, b):
    alg = so3xso3()
    lhs = ad_matrix(alg, a * x + b * y)
    rhs = a * ad_matrix(alg, x) + b * ad_matrix(alg, y)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_construction_rejects_non_antisymmetric():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    with pytest.raises(InvalidStructureConstants):
        LieAlgebra(c)


def test_from_brackets_rejects_diagonal_entry():
    with pytest.raises(InvalidStructureConstants):
        LieAlgebra.from_brackets(["a", "b"], [(1, 1, 0, 1.0)])


def test_jacobi_residual_zero():
    assert jacobi_residual(so3()) == 0.0
    assert jacobi_residual(abelian(3)) == 0.0
    assert jacobi_residual(so3xso3()) == 0.0


def test_jacobi_residual_random_tensor(rng):
    c = rng.standard_normal((4, 4, 4))
    alg = LieAlgebra(c - c.transpose(1, 0, 2))
    res = jacobi_residual(alg)
    assert res > 0.1
    assert res == pytest.approx(jacobi_oracle(alg.c), rel=1e-12)


def test_jacobi_residual_heisenberg_matches_oracle():
    assert jacobi_oracle(heisenberg3().c) == 0.0 == jacobi_residual(heisenberg3())


def test_ad_matrix():
    ad3 = ad_matrix(so3(), e[2])
    assert np.allclose(ad3 @ e[0], e[1])
    assert np.allclose(ad3 @ e[1], -e[0])
    assert np.allclose(ad3 @ e[2], 0)
    assert np.array_equal(ad_matrix(abelian(3), [1, 2, 3]), np.zeros((3, 3)))
    ad1 = ad_matrix(heisenberg3(), e[0])
    assert np.array_equal(ad1 @ e[1], e[2])
    assert np.array_equal(ad1 @ e[0], np.zeros(3))
    assert np.array_equal(ad1 @ e[2], np.zeros(3))


def killing_oracle(alg):
    n = alg.dim
    ads = [np.array([[alg.c[a, j, k] for j in range(n)] for k in range(n)]) for a in range(n)]
    return np.array([[np.trace(ads[a] @ ads[b]) for b in range(n)] for a in range(n)])


def test_killing_form():
    assert np.max(np.abs(killing_form(so3()) + 2 * np.eye(3))) <= 1e-12
    assert np.array_equal(killing_form(abelian(4)), np.zeros((4, 4)))
    expected = np.diag([-2.0] * 6)
    assert np.max(np.abs(killing_form(so3xso3()) - expected)) <= 1e-12
    assert np.allclose(killing_form(heisenberg3()), killing_oracle(heisenberg3()))


def test_killing_associativity(rng):
    for alg in (so3(), so3xso3(), heisenberg3()):
        k = killing_form(alg)
        for _ in range(20):
            x, y, z = rng.standard_normal((3, alg.dim))
            assert abs(bracket(alg, x, y) @ k @ z - x @ k @ bracket(alg, y, z)) <= 1e-9


def test_center():
    z = center(heisenberg3())
    assert z.rank == 1 and z.contains(np.array([[0, 0, 1.0]]))
    assert center(so3()).is_zero
    assert center(abelian(2)).rank == 2


def test_center_kills_everything(rng):
    for alg in (heisenberg3(), so3xso3(), abelian(3)):
        for zv in center(alg).basis:
            for a in range(alg.dim):
                assert np.linalg.norm(bracket(alg, zv, np.eye(alg.dim)[a])) <= 1e-9


def test_derived_subalgebra():
    assert derived_subalgebra(so3()).rank == 3
    d = derived_subalgebra(heisenberg3())
    assert d.rank == 1 and d.contains(np.array([[0, 0, 1.0]]))
    assert derived_subalgebra(abelian(3)).is_zero


def test_derived_contains_random_brackets(rng):
    for alg in (so3xso3(), heisenberg3()):
        d = derived_subalgebra(alg)
        for _ in range(50):
            x, y = rng.standard_normal((2, alg.dim))
            assert d.residual(bracket(alg, x, y)) <= 1e-9


def test_subspace_onb_is_orthonormal(rng):
    m = so3xso3_metric(2.0)
    s = Subspace(rng.standard_normal((4, 6)))
    q = s.onb(m.g)
    assert q.shape == (4, 6)
    assert np.max(np.abs(q @ m.g @ q.T - np.eye(4))) <= 1e-12


def test_subspace_rank_drops_dependent_generators():
    s = Subspace([[1, 0, 0], [2, 0, 0], [0, 1, 0]])
    assert s.rank == 2
    assert s.onb().shape == (2, 3)


def test_canonical_basis():
    s = Subspace([[1, 1, 0], [1, -1, 0]])
    assert np.allclose(s.canonical_basis(), [[1, 0, 0], [0, 1, 0]])
