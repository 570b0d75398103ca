"""Sliding-window decoding over block-structured detector models.

Each window covers W consecutive detector blocks; after the inner decode,
columns that will leave the window (span starting in the first F blocks)
are committed and their contribution is subtracted from the remaining
syndrome.  The final window commits everything it sees.  Global success
requires the assembled pattern to reproduce the full syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gdg as gdg_mod
from . import osd as osd_mod
from .gf2 import BitVector, NotInSpan, SparseBitMatrix, matvec
from .noise_model import DetectorModel, FaultSample, prior_to_llr

SUCCESS = "Success"
SYNDROME_FAILURE = "SyndromeFailure"
LOGICAL_FAILURE = "LogicalFailure"


def gdg_window_decoder(config: gdg_mod.DecisionTreeConfig):
    def decode(H, priors_llr, s):
        out = gdg_mod.gdg_decode(H, priors_llr, s, config)
        return out.e_hat, out.pm, out.success
    return decode


def osd_window_decoder(config: osd_mod.OsdConfig):
    def decode(H, priors_llr, s):
        try:
            e_hat, pm = osd_mod.bp_osd_decode(H, priors_llr, s, config)
        except NotInSpan:
            return None, float("inf"), False
        return e_hat, pm, True
    return decode


@dataclass
class WindowPlan:
    W: int
    F: int
    decoder: object                     # callable(H, llrs, s) -> (e, pm, ok)
    last_window_decoder: object = None  # optional override

    def __post_init__(self):
        if not 1 <= self.F <= self.W:
            raise ValueError("need 1 <= F <= W")


def window_view(model: DetectorModel, start_block: int, W: int, F: int = 1):
    """Rows of blocks [start, start+W); columns whose span starts inside.

    Returns (H_win, priors_win, column_ids, commit_mask, row_ids) where
    commit_mask marks the columns leaving the window after a slide of F.
    """
    if model.blocks is None:
        raise ValueError("model has no round-block structure")
    r_blocks, w = model.blocks
    if start_block < 0 or start_block + W > r_blocks:
        raise ValueError("window outside the block range")
    span = model.column_block_span
    cols = np.flatnonzero((span[:, 0] >= start_block)
                          & (span[:, 0] < start_block + W)).astype(np.int64)
    rows = np.arange(start_block * w, (start_block + W) * w, dtype=np.int64)
    H_win = model.H.submatrix(rows, cols)
    commit_mask = span[cols, 0] < start_block + F
    return H_win, model.priors[cols], cols, commit_mask, rows


@dataclass
class WindowRecord:
    start_block: int
    committed_columns: np.ndarray
    committed_values: np.ndarray
    pm: float
    converged: bool


@dataclass
class SlidingResult:
    e_hat: BitVector
    status: str
    windows: list = field(default_factory=list)
    syndrome_ok: bool = False


def window_starts(r_blocks: int, W: int, F: int) -> list:
    if W > r_blocks:
        raise ValueError(f"window of {W} blocks exceeds the {r_blocks} "
                         "available")
    starts = list(range(0, r_blocks - W + 1, F))
    if starts[-1] != r_blocks - W:
        starts.append(r_blocks - W)
    return starts


def sliding_decode(model: DetectorModel, s_stream, plan: WindowPlan) -> SlidingResult:
    if model.blocks is None:
        # no round structure: decode globally as a single window
        model = DetectorModel(H=model.H, priors=model.priors, L=model.L,
                              blocks=(1, model.n_detectors))
    r_blocks, w = model.blocks
    s_full = s_stream.to_dense() if isinstance(s_stream, BitVector) else \
        np.asarray(s_stream, dtype=np.uint8)
    if s_full.shape != (model.n_detectors,):
        raise ValueError("syndrome stream length mismatch")
    residual = s_full.copy()
    e_full = np.zeros(model.n_faults, dtype=np.uint8)
    committed = np.zeros(model.n_faults, dtype=bool)
    records = []
    starts = window_starts(r_blocks, plan.W, plan.F)
    all_converged = True
    for idx, start in enumerate(starts):
        last = idx == len(starts) - 1
        H_win, priors_win, cols, commit_mask, rows = window_view(
            model, start, plan.W, plan.F)
        # columns already committed by an overlapping window drop out;
        # their syndrome contribution is in the residual already
        fresh = ~committed[cols]
        cols = cols[fresh]
        commit_mask = commit_mask[fresh]
        H_win = model.H.submatrix(rows, cols)
        priors_win = model.priors[cols]
        s_win = residual[rows]
        decoder = plan.decoder
        if last and plan.last_window_decoder is not None:
            decoder = plan.last_window_decoder
        e_win, pm, ok = decoder(H_win, prior_to_llr(priors_win), s_win)
        if last:
            commit_mask = np.ones(cols.size, dtype=bool)
        if not ok or e_win is None:
            all_converged = False
            records.append(WindowRecord(start, cols[commit_mask],
                                        np.zeros(int(commit_mask.sum()),
                                                 np.uint8), pm, False))
            committed[cols[commit_mask]] = True
            continue
        values = e_win.to_dense()
        commit_cols = cols[commit_mask]
        commit_vals = values[commit_mask]
        e_full[commit_cols] = commit_vals
        committed[commit_cols] = True
        for c, v in zip(commit_cols, commit_vals):
            if v:
                residual[model.H.cols[c]] ^= 1
        records.append(WindowRecord(start, commit_cols, commit_vals,
                                    pm, True))
    e_hat = BitVector.from_dense(e_full)
    syndrome_ok = matvec(model.H, e_hat) == BitVector.from_dense(s_full)
    status = SUCCESS if (syndrome_ok and all_converged) else SYNDROME_FAILURE
    return SlidingResult(e_hat, status, records, bool(syndrome_ok))


def judge(e_hat: BitVector, sample: FaultSample, model: DetectorModel) -> str:
    if matvec(model.H, e_hat) != sample.s:
        return SYNDROME_FAILURE
    if matvec(model.L, e_hat) != sample.l:
        return LOGICAL_FAILURE
    return SUCCESS


def decode_and_judge(model: DetectorModel, sample: FaultSample,
                     plan: WindowPlan) -> tuple:
    """Full trial: sliding decode then the two-part success criterion."""
    result = sliding_decode(model, sample.s, plan)
    if not result.syndrome_ok:
        return result, SYNDROME_FAILURE
    return result, judge(result.e_hat, sample, model)
