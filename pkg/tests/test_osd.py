import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdgdec import bp, gf2, osd
from gdgdec.gf2 import BitVector, NotInSpan, SparseBitMatrix
from gdgdec.osd import OsdConfig

from conftest import brute_force_min_metric, random_sparse_dense


def pm_of(e_hat, llrs):
    return float(np.asarray(llrs)[e_hat.to_dense() != 0].sum())


def test_rank_columns_example():
    assert osd.rank_columns([3.0, -1.0, 0.0]).tolist() == [1, 2, 0]


def test_rank_columns_ties_identity():
    assert osd.rank_columns([1.0, 1.0, 1.0]).tolist() == [0, 1, 2]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_rank_columns_matches_sort_oracle(seed):
    rng = np.random.default_rng(seed)
    scores = rng.uniform(-5, 5, 15)
    order = osd.rank_columns(scores)
    assert sorted(scores.tolist()) == scores[order].tolist()


def test_osd0_identity():
    H = SparseBitMatrix.identity(4)
    s = np.array([1, 0, 1, 0], dtype=np.uint8)
    for order in ([0, 1, 2, 3], [3, 2, 1, 0]):
        assert osd.osd0(H, s, order).to_dense().tolist() == s.tolist()


def test_osd0_zero_syndrome():
    rng = np.random.default_rng(1)
    H = SparseBitMatrix.from_dense(random_sparse_dense(rng, 5, 9))
    assert osd.osd0(H, np.zeros(5, np.uint8), np.arange(9)).weight == 0


def test_osd0_not_in_span():
    H = SparseBitMatrix.from_dense([[1], [1]])
    with pytest.raises(NotInSpan):
        osd.osd0(H, np.array([1, 0], np.uint8), [0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_osd0_random_instances(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 8, 20)
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 20).astype(np.uint8)
    s = d @ e % 2
    order = osd.rank_columns(rng.uniform(0, 1, 20))
    x = osd.osd0(H, s, order)
    assert gf2.matvec(H, x) == BitVector.from_dense(s)
    pivots, _ = gf2.row_reduce(H, order)
    assert set(x.support.tolist()) <= set(pivots.tolist())


def test_osd_cs_order0_equals_osd0():
    rng = np.random.default_rng(3)
    d = random_sparse_dense(rng, 6, 14)
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 14).astype(np.uint8)
    s = d @ e % 2
    llrs = rng.uniform(0.5, 5.0, 14)
    order = osd.rank_columns(llrs)
    assert osd.osd_cs(H, s, order, llrs, 0) == osd.osd0(H, s, order)


def cs_candidates_oracle(H, s, order, llrs, lam, restrict_to=None):
    """Explicit candidate enumeration mirroring the sweep definition."""
    pivots, rec = gf2.row_reduce(H, order)
    dense = H.to_dense()
    pivot_set = set(rec.pivot_positions.tolist())
    limit = len(order) if restrict_to is None else restrict_to
    sweep_cols = [int(order[p]) for p in range(limit) if p not in pivot_set]
    forced_sets = [()]
    if lam > 0:
        forced_sets += [(c,) for c in sweep_cols]
        head = sweep_cols[:lam]
        forced_sets += [(head[i], head[j]) for i in range(len(head))
                        for j in range(i + 1, len(head))]
    out = []
    for forced in forced_sets:
        rhs = np.asarray(s, np.uint8).copy()
        for c in forced:
            rhs ^= dense[:, c]
        x = gf2.solve_in_span(H, rhs, pivots, rec)
        full = x.to_dense()
        full[list(forced)] = 1
        out.append(BitVector.from_dense(full))
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_osd_cs_matches_candidate_oracle(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 4, 8, density=0.4)
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 8).astype(np.uint8)
    s = d @ e % 2
    llrs = rng.uniform(0.5, 5.0, 8)
    order = osd.rank_columns(llrs)
    got = osd.osd_cs(H, s, order, llrs, 3)
    cands = cs_candidates_oracle(H, s, order, llrs, 3)
    best_pm = min(pm_of(c, llrs) for c in cands)
    assert pm_of(got, llrs) == pytest.approx(best_pm)
    assert gf2.matvec(H, got) == BitVector.from_dense(s)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_osd_cs_monotone_in_lambda(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 6, 16, density=0.35)
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 16).astype(np.uint8)
    s = d @ e % 2
    llrs = rng.uniform(0.5, 5.0, 16)
    order = osd.rank_columns(llrs)
    pms = [pm_of(osd.osd_cs(H, s, order, llrs, lam), llrs)
           for lam in (0, 1, 2, 4, 8)]
    assert all(a >= b - 1e-12 for a, b in zip(pms, pms[1:]))
    # exhaustive ML is a lower bound on every candidate-set minimum
    ml_pm, _ = brute_force_min_metric(d, s, llrs)
    assert pms[-1] >= ml_pm - 1e-12


def test_osd_cs_restricted_subset():
    rng = np.random.default_rng(8)
    d = random_sparse_dense(rng, 5, 14, density=0.4)
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 14).astype(np.uint8)
    s = d @ e % 2
    llrs = rng.uniform(0.5, 5.0, 14)
    order = osd.rank_columns(llrs)
    got = osd.osd_cs(H, s, order, llrs, 4, restrict_to=10)
    cands = cs_candidates_oracle(H, s, order, llrs, 4, restrict_to=10)
    best_pm = min(pm_of(c, llrs) for c in cands)
    assert pm_of(got, llrs) == pytest.approx(best_pm)


def test_bp_osd_decode_converged_bp_short_circuits():
    # single low-prior column explains the syndrome; BP finds it alone
    H = SparseBitMatrix.from_dense([[1, 0], [1, 1]])
    llrs = np.array([1.0, 6.0])
    s = np.array([1, 1], np.uint8)
    e_hat, pm = osd.bp_osd_decode(H, llrs, s, OsdConfig(order=0))
    assert e_hat.to_dense().tolist() == [1, 0]
    assert pm == pytest.approx(1.0)


def test_bp_osd_decode_zero_syndrome():
    rng = np.random.default_rng(5)
    H = SparseBitMatrix.from_dense(random_sparse_dense(rng, 6, 12))
    e_hat, pm = osd.bp_osd_decode(H, np.full(12, 3.0), np.zeros(6, np.uint8),
                                  OsdConfig())
    assert e_hat.weight == 0 and pm == 0.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_bp_osd_decode_always_satisfies_syndrome(seed):
    rng = np.random.default_rng(seed)
    d = random_sparse_dense(rng, 7, 18, density=0.3)
    # ensure full row span so every syndrome is achievable
    d[np.arange(7), np.arange(7)] = 1
    H = SparseBitMatrix.from_dense(d)
    e = rng.integers(0, 2, 18).astype(np.uint8)
    s = d @ e % 2
    llrs = rng.uniform(0.5, 5.0, 18)
    e_hat, pm = osd.bp_osd_decode(H, llrs, s, OsdConfig(order=5))
    assert gf2.matvec(H, e_hat) == BitVector.from_dense(s)
    assert pm == pytest.approx(pm_of(e_hat, llrs))


def test_config_validation():
    with pytest.raises(ValueError):
        OsdConfig(order=-1)
    with pytest.raises(ValueError):
        OsdConfig(bp_pre_iterations=0)
