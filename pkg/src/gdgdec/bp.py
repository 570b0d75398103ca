"""Flooding min-sum belief propagation with decimation and peeling.

State holds per-edge messages over a flat Tanner-graph layout, per-variable
posteriors with a 4-deep history ring, a ternary decision mask, and a
working syndrome that decimation keeps in sync.  The same state drives the
guided-decimation decoder, OSD preprocessing, and column ranking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _bp_kernels as _k
from .gf2 import BitVector, DimensionMismatch, SparseBitMatrix

CLIP = 50.0
HISTORY_LEN = 4

UNDECIDED = -1

PEEL_OK = 0
PEEL_CONTRADICTION = 1


@dataclass(frozen=True)
class BPConfig:
    scale: float = 1.0
    clip: float = CLIP


class TannerGraph:
    """Flat check-major edge layout of a parity-check matrix."""

    def __init__(self, H: SparseBitMatrix):
        self.H = H
        m, n = H.n_rows, H.n_cols
        lens = np.array([len(r) for r in H.rows], dtype=np.int64)
        self.cn_ptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        self.cn_vn = (np.concatenate(H.rows) if lens.sum() else
                      np.empty(0, np.int32)).astype(np.int32)
        self.edge_cn = np.repeat(np.arange(m, dtype=np.int32), lens)
        order = np.argsort(self.cn_vn, kind="stable").astype(np.int64)
        self.vn_edge = order
        counts = np.bincount(self.cn_vn, minlength=n)
        self.vn_ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.vn_static_deg = counts.astype(np.int32)
        self.n_edges = int(lens.sum())
        self.n_checks = m
        self.n_vars = n


class BPState:
    def __init__(self, graph: TannerGraph, priors_llr, syndrome, config: BPConfig):
        self.graph = graph
        self.config = config
        self.priors = np.ascontiguousarray(priors_llr, dtype=np.float64)
        if self.priors.shape != (graph.n_vars,):
            raise DimensionMismatch("one prior LLR per variable required")
        if not np.all(np.isfinite(self.priors)):
            raise ValueError("prior LLRs must be finite")
        s = syndrome.to_dense() if isinstance(syndrome, BitVector) else \
            np.asarray(syndrome, dtype=np.uint8)
        if s.shape != (graph.n_checks,):
            raise DimensionMismatch("syndrome length must match check count")
        self.syndrome = s.astype(np.uint8)  # original, never mutated
        self.working_syndrome = self.syndrome.copy()
        self.vn_status = np.full(graph.n_vars, UNDECIDED, dtype=np.int8)
        self.cn_active_deg = np.diff(graph.cn_ptr).astype(np.int32)
        self.msg_vc = np.empty(graph.n_edges, dtype=np.float64)
        self.msg_cv = np.zeros(graph.n_edges, dtype=np.float64)
        self.posterior = self.priors.copy()
        self.history = np.zeros((graph.n_vars, HISTORY_LEN), dtype=np.float64)
        self.t = 0
        self.reinit_messages()

    def reinit_messages(self):
        """Fresh message field over the current decision mask."""
        self.msg_vc[:] = self.priors[self.graph.cn_vn]
        self.msg_cv[:] = 0.0
        self.posterior[:] = self.priors
        self.history[:] = 0.0
        self.t = 0

    @property
    def n_undecided(self) -> int:
        return int(np.count_nonzero(self.vn_status == UNDECIDED))

    def history_sums(self) -> np.ndarray:
        return self.history.sum(axis=1)


def bp_init(H, priors_llr, syndrome, config: BPConfig | None = None) -> BPState:
    graph = H if isinstance(H, TannerGraph) else TannerGraph(H)
    return BPState(graph, priors_llr, syndrome, config or BPConfig())


def bp_iterate(state: BPState, n_iters: int) -> BPState:
    g = state.graph
    for _ in range(n_iters):
        _k.cn_update(g.cn_ptr, g.cn_vn, state.vn_status,
                     state.working_syndrome, state.msg_vc, state.msg_cv,
                     state.config.scale, state.config.clip)
        _k.vn_update(g.vn_ptr, g.vn_edge, state.priors, state.vn_status,
                     state.msg_cv, state.msg_vc, state.posterior,
                     state.history, state.t % HISTORY_LEN, state.config.clip)
        state.t += 1
    return state


def hard_decision(state: BPState) -> BitVector:
    dec = np.where(state.vn_status >= 0, state.vn_status,
                   state.posterior <= 0.0).astype(np.uint8)
    return BitVector.from_dense(dec)


def check_syndrome(state: BPState) -> bool:
    """Hard decision against the original (unmutated) syndrome."""
    g = state.graph
    dec = np.where(state.vn_status >= 0, state.vn_status,
                   state.posterior <= 0.0).astype(np.int64)
    if g.n_edges:
        syn = np.bincount(g.edge_cn, weights=dec[g.cn_vn],
                          minlength=g.n_checks).astype(np.int64) % 2
    else:
        syn = np.zeros(g.n_checks, dtype=np.int64)
    return bool(np.array_equal(syn, state.syndrome))


def path_metric(e_hat, priors_llr, H: SparseBitMatrix, s) -> float:
    """Sum of prior LLRs on the support when H e = s, else infinity."""
    e = e_hat.to_dense() if isinstance(e_hat, BitVector) else \
        np.asarray(e_hat, dtype=np.uint8)
    s_arr = s.to_dense() if isinstance(s, BitVector) else \
        np.asarray(s, dtype=np.uint8)
    from .gf2 import matvec
    if matvec(H, BitVector.from_dense(e)) != BitVector.from_dense(s_arr):
        return float("inf")
    return float(np.asarray(priors_llr, dtype=np.float64)[e != 0].sum())


def decimate(state: BPState, vn: int, value: int) -> BPState:
    if state.vn_status[vn] != UNDECIDED:
        raise ValueError(f"variable {vn} already decided")
    state.vn_status[vn] = value
    g = state.graph
    for k in range(g.vn_ptr[vn], g.vn_ptr[vn + 1]):
        cj = g.edge_cn[g.vn_edge[k]]
        state.cn_active_deg[cj] -= 1
        if value:
            state.working_syndrome[cj] ^= 1
    return state


def peel(state: BPState) -> int:
    """PEEL_OK, or PEEL_CONTRADICTION when the decision path is dead."""
    g = state.graph
    return int(_k.peel(g.cn_ptr, g.cn_vn, g.vn_ptr, g.vn_edge, g.edge_cn,
                       state.vn_status, state.working_syndrome,
                       state.cn_active_deg))
