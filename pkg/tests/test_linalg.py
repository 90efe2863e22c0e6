import random

import numpy as np
import pytest

from mmfp.field import find_roots
from mmfp.linalg import charpoly, identity, matmul, matrix_power, nullspace, rank, rref, solve


def _random_matrix(rng, shape, order):
    return np.array([[rng.randrange(order) for _ in range(shape[1])] for _ in range(shape[0])], dtype=np.int64)


def test_rref_pivots(f5):
    a = np.array([[2, 4, 1], [1, 2, 3], [0, 0, 1]])
    r, pivots = rref(f5, a)
    assert pivots == [0, 2]
    assert r[0].tolist() == [1, 2, 0]
    assert r[1].tolist() == [0, 0, 1]
    assert not r[2].any()


def test_rank_and_nullspace(f7):
    rng = random.Random(3)
    for _ in range(10):
        a = _random_matrix(rng, (3, 5), 7)
        kernel = nullspace(f7, a)
        assert kernel.shape[1] == 5 - rank(f7, a)
        assert not matmul(f7, a, kernel).any()


def test_nullspace_over_extension(f25):
    rng = random.Random(5)
    a = _random_matrix(rng, (2, 4), 25)
    kernel = nullspace(f25, a)
    assert kernel.shape[1] == 4 - rank(f25, a)
    assert not matmul(f25, a, kernel).any()


def test_solve(f7):
    a = np.array([[1, 0], [2, 1], [3, 4]])
    x = np.array([[3], [5]])
    b = matmul(f7, a, x)
    assert solve(f7, a, b).tolist() == [[3], [5]]


def test_solve_inconsistent(f7):
    a = np.array([[1], [1]])
    with pytest.raises(ArithmeticError):
        solve(f7, a, np.array([[1], [2]]))


def test_matrix_power(f5):
    a = np.array([[1, 1], [0, 1]])
    assert matrix_power(f5, a, 5).tolist() == identity(f5, 2).tolist()


def test_charpoly_small(f7):
    assert charpoly(f7, np.zeros((0, 0), dtype=np.int64)) == [1]
    # [[1, 2], [3, 4]]: x^2 - 5x - 2
    assert charpoly(f7, np.array([[1, 2], [3, 4]])) == [5, 2, 1]


def test_charpoly_cayley_hamilton(f5, f49):
    rng = random.Random(17)
    for field, order in ((f5, 5), (f49, 49)):
        for _ in range(5):
            a = _random_matrix(rng, (4, 4), order)
            chi = charpoly(field, a)
            assert len(chi) == 5 and chi[-1] == 1
            value = np.zeros((4, 4), dtype=np.int64)
            for c in reversed(chi):
                value = field.add(matmul(field, value, a), field.mul(identity(field, 4), c))
            assert not value.any()


def test_charpoly_roots_are_eigenvalues(f7):
    # upper triangular: eigenvalues on the diagonal
    a = np.array([[2, 1, 5], [0, 3, 4], [0, 0, 2]])
    roots = find_roots(charpoly(f7, a), f7)
    assert [r.residue for r in roots] == [2, 3]
