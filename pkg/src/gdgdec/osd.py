"""Ordered-statistics decoding over BP posteriors.

OSD-0 solves the syndrome on the first independent columns of a
reliability ranking; the combination-sweep variant additionally tries
every weight-one flip of the unselected columns and weight-two flips of
the first lambda of them, keeping the minimum path metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bp as bp_mod
from . import gf2
from .gf2 import BitVector, NotInSpan, SparseBitMatrix


@dataclass(frozen=True)
class OsdConfig:
    order: int = 10
    bp_pre_iterations: int = 16
    scale: float = 1.0
    restrict_to_2wprime: bool = False
    use_latest_posterior: bool = False

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("combination-sweep order must be >= 0")
        if self.bp_pre_iterations < 1:
            raise ValueError("at least one BP iteration required")


def rank_columns(scores) -> np.ndarray:
    """Ascending stable ranking: most likely to flip first, ties by index."""
    return np.argsort(np.asarray(scores, dtype=np.float64),
                      kind="stable").astype(np.int64)


def osd0(H: SparseBitMatrix, s, column_order) -> BitVector:
    pivots, rec = gf2.row_reduce(H, column_order)
    return gf2.solve_in_span(H, s, pivots, rec)


def _lex_less(a: BitVector, b: BitVector) -> bool:
    da, db = a.to_dense(), b.to_dense()
    diff = np.flatnonzero(da != db)
    return bool(diff.size and da[diff[0]] < db[diff[0]])


def osd_cs(H: SparseBitMatrix, s, column_order, priors_llr, lam: int,
           restrict_to: int | None = None) -> BitVector:
    """Minimum-path-metric candidate from the combination sweep.

    Candidates: the pivot-only solution, every single unselected column
    within the sweep range, and every pair among the first lam unselected
    columns of the range.  Ties go to the lexicographically smallest
    pattern.
    """
    llrs = np.asarray(priors_llr, dtype=np.float64)
    order = np.asarray(column_order, dtype=np.int64)
    pivots, rec = gf2.row_reduce(H, order)
    r = len(pivots)
    if isinstance(s, BitVector):
        s = s.to_dense()
    s = np.asarray(s, dtype=np.uint8) % 2
    y = rec.transform @ s % 2
    if np.any(y[r:]):
        raise NotInSpan("syndrome outside column span")
    llr_piv = llrs[pivots]
    y_piv = y[:r]

    def assemble(piv_bits, extra_cols=()):
        dense = np.zeros(H.n_cols, dtype=np.uint8)
        dense[pivots[np.flatnonzero(piv_bits)]] = 1
        for c in extra_cols:
            dense[c] = 1
        return BitVector.from_dense(dense)

    best = assemble(y_piv)
    best_pm = float(llr_piv @ y_piv)

    if lam == 0:
        return best
    pivot_set = set(rec.pivot_positions.tolist())
    limit = len(order) if restrict_to is None else min(restrict_to, len(order))
    sweep = [pos for pos in range(limit) if pos not in pivot_set]

    def consider(pm, piv_bits, extra_cols):
        nonlocal best, best_pm
        if pm < best_pm or (pm == best_pm and
                            _lex_less(cand := assemble(piv_bits, extra_cols),
                                      best)):
            best = assemble(piv_bits, extra_cols)
            best_pm = pm

    for pos in sweep:
        c = int(order[pos])
        bits = y_piv ^ rec.rref[:r, pos]
        consider(float(llrs[c] + llr_piv @ bits), bits, (c,))
    for a_i in range(min(lam, len(sweep))):
        for b_i in range(a_i + 1, min(lam, len(sweep))):
            pa, pb = sweep[a_i], sweep[b_i]
            ca, cb = int(order[pa]), int(order[pb])
            bits = y_piv ^ rec.rref[:r, pa] ^ rec.rref[:r, pb]
            consider(float(llrs[ca] + llrs[cb] + llr_piv @ bits), bits,
                     (ca, cb))
    return best


def bp_osd_decode(H: SparseBitMatrix, priors_llr, s, config: OsdConfig):
    """BP with early stopping, then OSD on the reliability ranking.

    Returns (e_hat, path_metric).
    """
    llrs = np.asarray(priors_llr, dtype=np.float64)
    state = bp_mod.bp_init(H, llrs, s, bp_mod.BPConfig(scale=config.scale))
    converged = bp_mod.check_syndrome(state)
    for _ in range(config.bp_pre_iterations):
        if converged:
            break
        bp_mod.bp_iterate(state, 1)
        converged = bp_mod.check_syndrome(state)
    if converged:
        e_hat = bp_mod.hard_decision(state)
        return e_hat, bp_mod.path_metric(e_hat, llrs, H, s)
    if config.use_latest_posterior or state.t < bp_mod.HISTORY_LEN:
        scores = state.posterior
    else:
        scores = state.history_sums()
    order = rank_columns(scores)
    restrict = 2 * H.n_rows if config.restrict_to_2wprime else None
    if config.order == 0:
        e_hat = osd0(H, s, order)
    else:
        e_hat = osd_cs(H, s, order, llrs, config.order, restrict)
    return e_hat, bp_mod.path_metric(e_hat, llrs, H, s)
