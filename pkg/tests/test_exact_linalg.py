import pytest
import sympy
from hypothesis import given, settings, strategies as st

from osculate.exact_linalg import (
    IntegerMatrix,
    det,
    kernel_basis,
    lattice_index,
    rank,
    row_hnf,
    saturate,
    smith_diagonal,
    solve_rational,
)

small = st.integers(-6, 6)


def matrices(max_r=5, max_c=6):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


def test_rank_examples():
    assert rank(IntegerMatrix.identity(3)) == 3
    assert rank(IntegerMatrix([[1, 1, 1, 1], [0, 1, 2, 3], [0, 0, 1, 3]])) == 3
    assert rank(IntegerMatrix.zeros(2, 5)) == 0


def test_kernel_twisted_cubic():
    K = kernel_basis(IntegerMatrix([[1, 1, 1, 1], [0, 1, 2, 3], [0, 0, 1, 3]]))
    assert K.shape == (4, 1)
    col = K.column(0)
    assert col in [(-1, 3, -3, 1), (1, -3, 3, -1)]


def test_kernel_identity_is_empty():
    assert kernel_basis(IntegerMatrix.identity(4)).shape == (4, 0)


def test_kernel_sum_zero_lattice_is_saturated():
    K = kernel_basis(IntegerMatrix([[1, 1, 1, 1]]))
    assert K.shape == (4, 3)
    for c in K.columns():
        assert sum(c) == 0
    assert smith_diagonal(K) == [1, 1, 1]


def test_smith_examples():
    assert smith_diagonal(IntegerMatrix([[2, 0], [0, 3]])) == [1, 6]
    assert smith_diagonal(IntegerMatrix.identity(5)) == [1] * 5
    assert smith_diagonal(IntegerMatrix([[2, 0], [0, 2]])) == [2, 2]


def test_lattice_index_examples():
    I2 = IntegerMatrix.identity(2)
    assert lattice_index(I2, I2) == 1
    assert lattice_index(I2, IntegerMatrix([[2, 0], [0, 3]])) == 6
    assert lattice_index(IntegerMatrix([[1, 1]]), IntegerMatrix([[2, 2]])) == 2


def test_matrix_is_immutable():
    M = IntegerMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        M.rows = 5
    assert (M @ IntegerMatrix.identity(2)) == M
    assert M.T.tolist() == [[1, 3], [2, 4]]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(IntegerMatrix(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_saturated_kernel(rows):
    M = IntegerMatrix(rows)
    K = kernel_basis(M)
    r, c = M.shape
    assert K.shape == (c, c - rank(M))
    if K.cols:
        assert (M @ K).is_zero()
        assert smith_diagonal(K) == [1] * K.cols


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_smith(rows):
    d = det(IntegerMatrix(rows))
    assert d == sympy.Matrix(rows).det()
    if d:
        prod = 1
        for x in smith_diagonal(IntegerMatrix(rows)):
            prod *= x
        assert prod == abs(d)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 5))
def test_hnf_preserves_row_lattice(rows):
    H = row_hnf(rows)
    assert len(H) == rank(rows)
    nonzero = [r for r in rows if any(r)]
    if H:
        # both generate sublattices of the same saturation with the same index
        S = saturate(rows)
        assert lattice_index(S, H) == lattice_index(S, nonzero)
        assert all(rank(H + [r]) == len(H) for r in nonzero)


def test_solve_rational():
    assert solve_rational([[2, 0], [0, 4]], [1, 1]) == [sympy.Rational(1, 2), sympy.Rational(1, 4)]
    assert solve_rational([[1, 1], [2, 2]], [1, 2]) is None
