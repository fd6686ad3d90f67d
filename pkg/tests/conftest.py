import numpy as np
import pytest

from liegauss.lie_core import LieAlgebra, Subspace
from liegauss.metric import MetricLieAlgebra, orthonormalize

SO3 = [(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, 1.0)]


def so3():
    return LieAlgebra.from_brackets(["e1", "e2", "e3"], SO3)


def so3xso3():
    shifted = [(i + 3, j + 3, k + 3, c) for i, j, k, c in SO3]
    return LieAlgebra.from_brackets(["e1", "e2", "e3", "f1", "f2", "f3"], SO3 + shifted)


def so3_plus_r():
    return LieAlgebra.from_brackets(["e1", "e2", "e3", "t"], SO3)


def heisenberg3():
    return LieAlgebra.from_brackets(["X1", "X2", "Z"], [(0, 1, 2, 1.0)])


def heisenberg5():
    return LieAlgebra.from_brackets(["X1", "X2", "X3", "X4", "Z"],
                                    [(0, 1, 4, 1.0), (2, 3, 4, 1.0)])


def j_singular3():
    return LieAlgebra.from_brackets(["X1", "X2", "X3", "Z1", "Z2"],
                                    [(0, 1, 3, 1.0), (0, 2, 4, 1.0)])


def abelian(n):
    return LieAlgebra(np.zeros((n, n, n)))


def solvable3():
    """[x, y] = y, [x, z] = 2z: a non-unimodular solvable algebra."""
    return LieAlgebra.from_brackets(["x", "y", "z"], [(0, 1, 1, 1.0), (0, 2, 2, 2.0)])


def so3xso3_metric(a):
    return MetricLieAlgebra(so3xso3(), np.diag([1.0, 1.0, 1.0, a * a, a * a, a * a]))


DIAGONAL_W = Subspace([[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, -1, 0], [0, 0, 1, 0, 0, 1]])
CASE2_W = Subspace([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0],
                    [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]])


def random_biinvariant(rng):
    """A random biinvariant metric on one of the compact catalog algebras."""
    kind = rng.integers(3)
    s = rng.uniform(0.3, 3.0, size=3)
    if kind == 0:
        return MetricLieAlgebra(so3(), s[0] * np.eye(3))
    if kind == 1:
        return MetricLieAlgebra(so3xso3(), np.diag([s[0]] * 3 + [s[1]] * 3))
    return MetricLieAlgebra(so3_plus_r(), np.diag([s[0]] * 3 + [s[2]]))


def random_spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + 0.5 * np.eye(n)


def random_metric(rng):
    """A random (generally not biinvariant) left-invariant metric."""
    alg = [so3, so3xso3, heisenberg3, heisenberg5, solvable3, so3_plus_r][rng.integers(6)]()
    return MetricLieAlgebra(alg, random_spd(rng, alg.dim))


def random_frames(m, rng, n=None):
    """Random orthonormal tangent/normal frames with 1 <= n < dim."""
    dim = m.dim
    if n is None:
        n = int(rng.integers(1, dim))
    full = orthonormalize(m, list(rng.standard_normal((dim, dim))))
    return full[:n], full[n:]


def random_b(rng, n, q):
    b = rng.standard_normal((n, n, q))
    return 0.5 * (b + b.transpose(1, 0, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
