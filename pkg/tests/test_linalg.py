from fractions import Fraction as F

import sympy as sp
from hypothesis import given, strategies as st

from hvkernel.linalg import Echelon, kernel, rank, solve_in_span


def matmul_vec(A, x):
    return [sum((a * b for a, b in zip(row, x)), F(0)) for row in A]


def test_kernel_examples():
    assert kernel([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    assert len(kernel([[0, 0, 0], [0, 0, 0]])) == 3
    (k,) = kernel([[1, 2], [2, 4]])
    # proportional to (2, -1)
    assert k[0] * -1 == k[1] * 2


def test_solve_in_span():
    vecs = [{"a": 1, "b": 1}, {"b": 1, "c": 2}]
    coeffs = solve_in_span(vecs, {"a": 2, "b": 5, "c": 6})
    assert coeffs is not None
    assert solve_in_span(vecs, {"c": 1, "a": 5}) is None


matrices = st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=5))


@given(matrices)
def test_rank_nullity_against_sympy(A):
    ker = kernel(A)
    ncols = len(A[0])
    assert rank(A) == sp.Matrix(A).rank()
    assert rank(A) + len(ker) == ncols
    for k in ker:
        assert all(v == 0 for v in matmul_vec(A, k))


@given(matrices)
def test_incremental_echelon_matches_batch(A):
    ech = Echelon()
    for i, row in enumerate(A):
        ech.add({j: F(v) for j, v in enumerate(row) if v})
        assert ech.rank == sp.Matrix(A[: i + 1]).rank()
