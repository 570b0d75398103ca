"""Detector models: fault columns with priors, detectors, and logical action.

Builders cover data-qubit bit-flip noise, single-shot models with noisy
syndrome bits, and multi-round phenomenological noise; circuit-level models
arrive through a small line-oriented text format.  Columns carry a prior
probability each and, when a round-block structure is declared, a span of
at most two consecutive detector blocks.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .codes import CssCode
from .gf2 import BitVector, SparseBitMatrix, matvec

PRIOR_FLOOR = 1e-12


def clamp_prior(p: float) -> float:
    """Map raw probabilities into [1e-12, 0.5] so LLRs stay finite."""
    return float(min(max(p, PRIOR_FLOOR), 0.5))


def prior_to_llr(p):
    """Intrinsic log-likelihood ratio log((1-p)/p), nonnegative on (0, 0.5]."""
    arr = np.asarray(p, dtype=np.float64)
    if np.any(arr <= 0) or np.any(arr > 0.5):
        raise ValueError("prior probabilities must lie in (0, 0.5]")
    out = np.log((1.0 - arr) / arr)
    return float(out) if np.isscalar(p) or arr.ndim == 0 else out


@dataclass
class DetectorModel:
    """Binary fault model: H maps faults to detectors, L to logical bits."""

    H: SparseBitMatrix
    priors: np.ndarray
    L: SparseBitMatrix
    blocks: tuple[int, int] | None = None  # (R_blocks, detectors_per_round)
    column_block_span: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.priors = np.asarray(self.priors, dtype=np.float64)
        if self.priors.shape != (self.H.n_cols,):
            raise ValueError("one prior per fault column required")
        if np.any(self.priors <= 0) or np.any(self.priors > 0.5):
            raise ValueError("priors must lie in (0, 0.5]")
        if self.L.n_cols != self.H.n_cols:
            raise ValueError("L must have the same column count as H")
        if self.blocks is not None:
            r_blocks, w = self.blocks
            if self.H.n_rows != r_blocks * w:
                raise ValueError("detector count must equal R_blocks * w")
            self.column_block_span = self._compute_spans(r_blocks, w)
        else:
            self.column_block_span = None

    def _compute_spans(self, r_blocks: int, w: int) -> np.ndarray:
        span = np.zeros((self.H.n_cols, 2), dtype=np.int32)
        for j in range(self.H.n_cols):
            rows = self.H.cols[j]
            if rows.size == 0:
                raise ValueError(f"column {j} touches no detector")
            lo, hi = int(rows[0]) // w, int(rows[-1]) // w
            if hi - lo > 1:
                raise ValueError(
                    f"column {j} spans blocks {lo}..{hi}; at most 2 "
                    "consecutive blocks allowed")
            span[j] = (lo, hi)
        return span

    @property
    def n_detectors(self) -> int:
        return self.H.n_rows

    @property
    def n_faults(self) -> int:
        return self.H.n_cols

    @property
    def n_logicals(self) -> int:
        return self.L.n_rows

    def llrs(self) -> np.ndarray:
        return prior_to_llr(self.priors)


@dataclass(frozen=True)
class FaultSample:
    """One sampled fault pattern with its detector and logical outcomes."""

    e: BitVector
    s: BitVector
    l: BitVector
    seed: int


def build_data_qubit_model(code: CssCode, p_d: float) -> DetectorModel:
    """Bit-flip channel on data qubits: detectors are the X checks."""
    p = clamp_prior(p_d)
    return DetectorModel(
        H=code.H_X,
        priors=np.full(code.N, p),
        L=code.L_Z,
        blocks=(1, code.H_X.n_rows),
    )


def build_single_shot_model(code: CssCode, p_d: float, p_s: float) -> DetectorModel:
    """Data faults plus independent syndrome-bit flips: H = [H_X | I]."""
    if not (0 < p_s < p_d < 0.5):
        warnings.warn("expected 0 < p_s < p_d < 0.5", stacklevel=2)
    w = code.H_X.n_rows
    H = SparseBitMatrix.hstack([code.H_X, SparseBitMatrix.identity(w)])
    priors = np.concatenate([
        np.full(code.N, clamp_prior(p_d)),
        np.full(w, clamp_prior(p_s)),
    ])
    L = SparseBitMatrix.hstack([code.L_Z, SparseBitMatrix(code.L_Z.n_rows, w, [])])
    return DetectorModel(H=H, priors=priors, L=L, blocks=(1, w))


def build_phenomenological_model(code: CssCode, R: int, p_d: float,
                                 p_s: float) -> DetectorModel:
    """R noisy measurement rounds plus one noiseless readout block.

    A data fault in epoch r fires the block-r detectors of its qubit's
    checks; a measurement fault in round r fires that detector in blocks r
    and r+1.  The final block adds detectors but no fault columns.
    """
    if R < 1:
        raise ValueError("at least one noisy round required")
    w = code.H_X.n_rows
    n_rows = (R + 1) * w
    entries = []
    l_entries = []
    priors = []
    col = 0
    lz = code.L_Z
    for r in range(R):
        base = r * w
        for q in range(code.N):
            for chk in code.H_X.cols[q]:
                entries.append((base + int(chk), col))
            for k in lz.cols[q]:
                l_entries.append((int(k), col))
            priors.append(clamp_prior(p_d))
            col += 1
        for d in range(w):
            entries.append((base + d, col))
            entries.append((base + w + d, col))
            priors.append(clamp_prior(p_s))
            col += 1
    H = SparseBitMatrix(n_rows, col, entries)
    L = SparseBitMatrix(lz.n_rows, col, l_entries)
    return DetectorModel(H=H, priors=np.array(priors), L=L, blocks=(R + 1, w))


def merge_equivalent_columns(model: DetectorModel) -> DetectorModel:
    """Merge columns sharing detector and logical supports.

    The merged prior is the odd-parity combination, folded pairwise:
    p <- p1 (1 - p2) + p2 (1 - p1).
    """
    groups: dict[tuple, int] = {}
    keep_entries = []
    keep_l = []
    keep_priors: list[float] = []
    for j in range(model.n_faults):
        key = (tuple(model.H.cols[j].tolist()), tuple(model.L.cols[j].tolist()))
        if key in groups:
            k = groups[key]
            p1, p2 = keep_priors[k], model.priors[j]
            keep_priors[k] = p1 * (1 - p2) + p2 * (1 - p1)
        else:
            k = len(keep_priors)
            groups[key] = k
            keep_priors.append(float(model.priors[j]))
            keep_entries.extend((int(r), k) for r in model.H.cols[j])
            keep_l.extend((int(r), k) for r in model.L.cols[j])
    n = len(keep_priors)
    return DetectorModel(
        H=SparseBitMatrix(model.H.n_rows, n, keep_entries),
        priors=np.array([clamp_prior(p) for p in keep_priors]),
        L=SparseBitMatrix(model.L.n_rows, n, keep_l),
        blocks=model.blocks,
    )


def sample(model: DetectorModel, rng_seed: int) -> FaultSample:
    """Independent Bernoulli draw per column with a counter-based stream."""
    rng = np.random.Generator(np.random.Philox(rng_seed))
    e_dense = (rng.random(model.n_faults) < model.priors).astype(np.uint8)
    e = BitVector.from_dense(e_dense)
    return FaultSample(e=e, s=matvec(model.H, e), l=matvec(model.L, e),
                       seed=int(rng_seed))


# -- detector-model text format -----------------------------------------------


def parse_dem(text: str) -> DetectorModel:
    """Parse the line-oriented detector model format.

    Header: `detectors <D>` then `logicals <K>`, optionally `rounds <R> <w>`;
    body lines `error <p> D<i> ... [L<k> ...]` with strictly increasing
    0-based indices.
    """
    n_det = n_log = None
    blocks = None
    entries = []
    l_entries = []
    priors = []
    col = 0

    def fail(line_no, msg):
        raise ValueError(f"line {line_no}: {msg}")

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "detectors":
            if n_det is not None or len(parts) != 2:
                fail(line_no, "bad detectors directive")
            n_det = int(parts[1])
        elif parts[0] == "logicals":
            if n_log is not None or len(parts) != 2:
                fail(line_no, "bad logicals directive")
            n_log = int(parts[1])
        elif parts[0] == "rounds":
            if blocks is not None or len(parts) != 3:
                fail(line_no, "bad rounds directive")
            blocks = (int(parts[1]), int(parts[2]))
            if n_det is None or n_det != blocks[0] * blocks[1]:
                fail(line_no, "rounds directive inconsistent with detectors")
        elif parts[0] == "error":
            if n_det is None or n_log is None:
                fail(line_no, "error line before detectors/logicals header")
            if len(parts) < 3:
                fail(line_no, "error line needs a probability and a detector")
            try:
                p = float(parts[1])
            except ValueError:
                fail(line_no, f"bad probability {parts[1]!r}")
            if not 0 < p <= 0.5:
                fail(line_no, f"probability {p} outside (0, 0.5]")
            dets: list[int] = []
            logs: list[int] = []
            for tok in parts[2:]:
                if tok[:1] == "D":
                    if logs:
                        fail(line_no, "detector index after logical index")
                    idx = int(tok[1:])
                    if not 0 <= idx < n_det:
                        fail(line_no, f"detector index {idx} out of range")
                    if dets and idx <= dets[-1]:
                        fail(line_no, "detector indices must strictly increase")
                    dets.append(idx)
                elif tok[:1] == "L":
                    idx = int(tok[1:])
                    if not 0 <= idx < n_log:
                        fail(line_no, f"logical index {idx} out of range")
                    if logs and idx <= logs[-1]:
                        fail(line_no, "logical indices must strictly increase")
                    logs.append(idx)
                else:
                    fail(line_no, f"bad token {tok!r}")
            if not dets:
                fail(line_no, "error line needs at least one detector")
            entries.extend((d, col) for d in dets)
            l_entries.extend((k, col) for k in logs)
            priors.append(p)
            col += 1
        else:
            fail(line_no, f"unknown directive {parts[0]!r}")
    if n_det is None or n_log is None:
        raise ValueError("missing detectors/logicals header")
    return DetectorModel(
        H=SparseBitMatrix(n_det, col, entries),
        priors=np.array(priors, dtype=np.float64),
        L=SparseBitMatrix(n_log, col, l_entries),
        blocks=blocks,
    )


def export_dem(model: DetectorModel) -> str:
    """Canonical serialization; parse(export(m)) reproduces m."""
    lines = [f"detectors {model.n_detectors}", f"logicals {model.n_logicals}"]
    if model.blocks is not None:
        lines.append(f"rounds {model.blocks[0]} {model.blocks[1]}")
    for j in range(model.n_faults):
        toks = [f"error {model.priors[j]:.12g}"]
        toks.extend(f"D{int(r)}" for r in model.H.cols[j])
        toks.extend(f"L{int(r)}" for r in model.L.cols[j])
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"
