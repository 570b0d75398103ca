import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdgdec import gf2
from gdgdec.gf2 import BitVector, NotInSpan, SparseBitMatrix

from conftest import dense_rank_oracle, dense_solve_oracle, random_sparse_dense


def test_matvec_identity():
    M = SparseBitMatrix.identity(3)
    v = BitVector(3, [0, 2])
    assert gf2.matvec(M, v) == v


def test_matvec_zero_vector():
    rng = np.random.default_rng(0)
    M = SparseBitMatrix.from_dense(random_sparse_dense(rng, 5, 7))
    assert gf2.matvec(M, BitVector(7)).weight == 0


def test_matvec_dimension_mismatch():
    M = SparseBitMatrix.identity(3)
    with pytest.raises(gf2.DimensionMismatch):
        gf2.matvec(M, BitVector(4, [0]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_matvec_linearity(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 6, 9)
    M = SparseBitMatrix.from_dense(d)
    a = BitVector.from_dense(rng.integers(0, 2, 9))
    b = BitVector.from_dense(rng.integers(0, 2, 9))
    assert gf2.matvec(M, a ^ b) == gf2.matvec(M, a) ^ gf2.matvec(M, b)


def test_row_reduce_identity():
    M = SparseBitMatrix.identity(3)
    pivots, _ = gf2.row_reduce(M)
    assert pivots.tolist() == [0, 1, 2]


def test_row_reduce_dependent_columns():
    M = SparseBitMatrix.from_dense([[1, 1], [1, 1]])
    pivots, _ = gf2.row_reduce(M, [0, 1])
    assert pivots.tolist() == [0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_row_reduce_rank_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 10, 20)
    M = SparseBitMatrix.from_dense(d)
    pivots, _ = gf2.row_reduce(M)
    assert len(pivots) == dense_rank_oracle(d)


def test_rank_identity_and_zero():
    assert gf2.rank(SparseBitMatrix.identity(4)) == 4
    assert gf2.rank(SparseBitMatrix(3, 5, [])) == 0


def test_rank_transpose_invariance():
    rng = np.random.default_rng(7)
    d = random_sparse_dense(rng, 8, 13)
    M = SparseBitMatrix.from_dense(d)
    assert gf2.rank(M) == gf2.rank(M.transpose())


def test_rank_pivot_count_order_independent():
    rng = np.random.default_rng(3)
    d = random_sparse_dense(rng, 8, 12)
    M = SparseBitMatrix.from_dense(d)
    base = gf2.rank(M)
    for seed in range(5):
        order = np.random.default_rng(seed).permutation(12)
        pivots, _ = gf2.row_reduce(M, order)
        assert len(pivots) == base


def test_kernel_identity_empty():
    assert gf2.kernel_basis(SparseBitMatrix.identity(4)) == []


def test_kernel_1x2():
    M = SparseBitMatrix.from_dense([[1, 1]])
    basis = gf2.kernel_basis(M)
    assert len(basis) == 1
    assert basis[0] == BitVector(2, [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_kernel_vectors_annihilated(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 6, 11)
    M = SparseBitMatrix.from_dense(d)
    basis = gf2.kernel_basis(M)
    assert len(basis) == 11 - dense_rank_oracle(d)
    for k in basis:
        assert gf2.matvec(M, k).weight == 0
    # basis is linearly independent
    if basis:
        stacked = np.stack([k.to_dense() for k in basis])
        assert dense_rank_oracle(stacked) == len(basis)


def test_solve_identity():
    M = SparseBitMatrix.identity(4)
    pivots, rec = gf2.row_reduce(M)
    s = BitVector(4, [1, 3])
    assert gf2.solve_in_span(M, s, pivots, rec) == s


def test_solve_not_in_span():
    M = SparseBitMatrix.from_dense([[1], [1]])
    pivots, rec = gf2.row_reduce(M)
    with pytest.raises(NotInSpan):
        gf2.solve_in_span(M, np.array([1, 0], dtype=np.uint8), pivots, rec)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_solve_random_achievable(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 8, 16)
    M = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 16).astype(np.uint8)
    s = d @ e % 2
    assert dense_solve_oracle(d, s) is not None
    pivots, rec = gf2.row_reduce(M)
    x = gf2.solve_in_span(M, s, pivots, rec)
    assert gf2.matvec(M, x) == BitVector.from_dense(s)
    # solution supported on pivots only
    assert set(x.support.tolist()) <= set(pivots.tolist())


def test_solve_respects_column_order():
    # with reversed order the solver must pick pivots from the tail first
    d = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    M = SparseBitMatrix.from_dense(d)
    order = np.array([2, 1, 0])
    pivots, rec = gf2.row_reduce(M, order)
    assert pivots.tolist() == [2, 1]
    x = gf2.solve_in_span(M, np.array([1, 0], dtype=np.uint8), pivots, rec)
    assert gf2.matvec(M, x).to_dense().tolist() == [1, 0]


def test_triplet_round_trip():
    rng = np.random.default_rng(11)
    M = SparseBitMatrix.from_dense(random_sparse_dense(rng, 6, 9))
    text = gf2.write_triplets(M)
    again = gf2.read_triplets(text)
    assert again == M
    assert gf2.write_triplets(again) == text


def test_duplicate_entries_cancel():
    M = SparseBitMatrix(2, 2, [(0, 0), (0, 0), (1, 1)])
    assert M.nnz == 1
    assert M.rows[1].tolist() == [1]


def test_row_col_views_consistent():
    rng = np.random.default_rng(5)
    M = SparseBitMatrix.from_dense(random_sparse_dense(rng, 7, 9))
    from_rows = {(i, int(c)) for i, cs in enumerate(M.rows) for c in cs}
    from_cols = {(int(r), j) for j, rs in enumerate(M.cols) for r in rs}
    assert from_rows == from_cols
    assert M.col_weights().tolist() == [len(M.cols[j]) for j in range(9)]
