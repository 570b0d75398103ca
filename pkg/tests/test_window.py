import numpy as np
import pytest

from gdgdec import codes, gdg, gf2, noise_model as nm, osd, window as win
from gdgdec.gf2 import BitVector, SparseBitMatrix
from gdgdec.window import WindowPlan


def toy_code():
    H_X = SparseBitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    L = codes.logical_basis(H_X, SparseBitMatrix(0, 3, []))
    return codes.CssCode(N=3, K=1, H_X=H_X, H_Z=SparseBitMatrix(0, 3, []),
                         L_Z=L)


def small_gdg():
    return win.gdg_window_decoder(gdg.DecisionTreeConfig(
        main_Dmax=8, side_split_depths=(2, 3), side_extra_steps=4,
        tree_depth=3, tree_extra_steps=4, low_error_mode=True, shorten=False))


def osd_dec(lam=4):
    return win.osd_window_decoder(osd.OsdConfig(order=lam))


def test_window_view_toy():
    model = nm.build_phenomenological_model(toy_code(), 2, 0.01, 0.01)
    H_win, priors, cols, commit, rows = win.window_view(model, 0, 2, F=1)
    assert H_win.n_rows == 4
    assert cols.tolist() == list(range(10))
    # per-round layout: 3 data then 2 measurement columns each round
    assert commit.tolist() == [True] * 5 + [False] * 5
    assert rows.tolist() == [0, 1, 2, 3]


def test_window_view_whole_model():
    model = nm.build_phenomenological_model(toy_code(), 2, 0.01, 0.01)
    H_win, priors, cols, commit, rows = win.window_view(model, 0, 3, F=3)
    assert H_win.n_rows == model.n_detectors
    assert cols.size == model.n_faults
    assert commit.all()
    assert H_win == model.H


def test_window_view_range_checks():
    model = nm.build_phenomenological_model(toy_code(), 2, 0.01, 0.01)
    with pytest.raises(ValueError):
        win.window_view(model, 2, 2)
    flat = nm.DetectorModel(H=SparseBitMatrix.identity(2),
                            priors=np.array([0.1, 0.1]),
                            L=SparseBitMatrix(0, 2, []))
    with pytest.raises(ValueError):
        win.window_view(flat, 0, 1)


def test_plan_validation():
    with pytest.raises(ValueError):
        WindowPlan(3, 0, osd_dec())
    with pytest.raises(ValueError):
        WindowPlan(3, 4, osd_dec())


def test_sliding_zero_syndrome():
    model = nm.build_phenomenological_model(toy_code(), 4, 0.01, 0.01)
    plan = WindowPlan(3, 1, small_gdg())
    res = win.sliding_decode(model, np.zeros(model.n_detectors, np.uint8), plan)
    assert res.status == win.SUCCESS
    assert res.e_hat.weight == 0


def test_sliding_single_measurement_fault():
    model = nm.build_phenomenological_model(toy_code(), 5, 0.01, 0.01)
    # measurement fault on detector 1 of round 2 (0-based round index 1)
    per_round = 5  # 3 data + 2 measurement columns
    col = 1 * per_round + 3 + 1
    e = np.zeros(model.n_faults, np.uint8)
    e[col] = 1
    s = (model.H.to_dense() @ e) % 2
    for decoder in (small_gdg(), osd_dec()):
        plan = WindowPlan(3, 1, decoder)
        res = win.sliding_decode(model, s.astype(np.uint8), plan)
        assert res.status == win.SUCCESS
        assert res.e_hat.support.tolist() == [col]
    sample = nm.FaultSample(BitVector.from_dense(e),
                            BitVector.from_dense(s),
                            BitVector(model.n_logicals), seed=0)
    assert win.judge(res.e_hat, sample, model) == win.SUCCESS


def test_window_equals_global_when_w_covers_all():
    code = toy_code()
    model = nm.build_phenomenological_model(code, 3, 0.05, 0.03)
    rng = np.random.default_rng(3)
    cfg = gdg.DecisionTreeConfig(main_Dmax=8, side_split_depths=(2, 3),
                                 side_extra_steps=4, tree_depth=3,
                                 tree_extra_steps=4, low_error_mode=True,
                                 shorten=False)
    for seed in range(10):
        smp = nm.sample(model, seed)
        plan = WindowPlan(4, 4, win.gdg_window_decoder(cfg))
        res = win.sliding_decode(model, smp.s, plan)
        direct = gdg.gdg_decode(model.H, model.llrs(), smp.s.to_dense(), cfg)
        assert res.e_hat == direct.e_hat
        assert res.syndrome_ok == direct.success


def test_chaining_consistency():
    model = nm.build_phenomenological_model(toy_code(), 6, 0.05, 0.05)
    plan = WindowPlan(3, 1, osd_dec())
    for seed in range(30):
        smp = nm.sample(model, seed)
        res = win.sliding_decode(model, smp.s, plan)
        if all(r.converged for r in res.windows):
            assert res.syndrome_ok
        # committed sets are disjoint and cover all columns
        seen = np.concatenate([r.committed_columns for r in res.windows])
        assert sorted(seen.tolist()) == list(range(model.n_faults))


def test_commit_reproduces_leading_blocks():
    model = nm.build_phenomenological_model(toy_code(), 6, 0.05, 0.05)
    plan = WindowPlan(3, 1, osd_dec())
    r_blocks, w = model.blocks
    for seed in range(20):
        smp = nm.sample(model, seed)
        res = win.sliding_decode(model, smp.s, plan)
        if res.status != win.SUCCESS:
            continue
        dense = model.H.to_dense()
        s = smp.s.to_dense()
        # after each window, committed columns explain its first F blocks
        partial = np.zeros(model.n_faults, np.uint8)
        for rec in res.windows:
            partial[rec.committed_columns] = rec.committed_values
            upto = (rec.start_block + 1) * w if rec is not res.windows[-1] \
                else model.n_detectors
            assert np.array_equal((dense[:upto] @ partial) % 2, s[:upto])


def test_judge_logical_failure():
    code = toy_code()
    model = nm.build_data_qubit_model(code, 0.05)
    e = np.zeros(3, np.uint8)
    smp = nm.sample(model, 0)
    truth = nm.FaultSample(BitVector.from_dense(e),
                           BitVector(model.n_detectors),
                           BitVector(model.n_logicals), seed=0)
    # a full logical operator flips no detectors but flips the observable
    logical = code.L_Z.to_dense()[0]
    wrong = BitVector.from_dense(logical)
    assert win.judge(BitVector.from_dense(e), truth, model) == win.SUCCESS
    assert win.judge(wrong, truth, model) == win.LOGICAL_FAILURE


def test_judge_syndrome_failure():
    model = nm.build_data_qubit_model(toy_code(), 0.05)
    smp = nm.sample(model, 5)
    bad = BitVector.from_dense(1 - smp.e.to_dense())
    if win.judge(bad, smp, model) == win.SUCCESS:
        pytest.skip("complement happened to match")
    assert win.judge(bad, smp, model) in (win.SYNDROME_FAILURE,
                                          win.LOGICAL_FAILURE)


def test_judge_equivalent_duplicate_columns():
    model = nm.parse_dem(
        "detectors 2\nlogicals 1\nerror 0.01 D0 D1 L0\nerror 0.01 D0 D1 L0\n")
    e = np.array([1, 0], np.uint8)
    smp = nm.FaultSample(BitVector.from_dense(e),
                         BitVector(2, [0, 1]), BitVector(1, [0]), seed=0)
    other = BitVector.from_dense(np.array([0, 1], np.uint8))
    assert win.judge(other, smp, model) == win.SUCCESS


def test_last_window_override_used():
    calls = {"n": 0}

    def counting(H, llrs, s):
        calls["n"] += 1
        return osd_dec()(H, llrs, s)

    model = nm.build_phenomenological_model(toy_code(), 5, 0.02, 0.02)
    plan = WindowPlan(3, 1, osd_dec(), last_window_decoder=counting)
    smp = nm.sample(model, 2)
    win.sliding_decode(model, smp.s, plan)
    assert calls["n"] == 1


def test_window_starts_cover_tail():
    assert win.window_starts(6, 3, 1) == [0, 1, 2, 3]
    assert win.window_starts(6, 3, 2) == [0, 2, 3]
    assert win.window_starts(5, 5, 2) == [0]
