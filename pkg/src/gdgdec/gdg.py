"""Guided-decimation-guessing ensemble decoder.

A main branch follows the history-guided decimation rule; side branches
flip one decision at a chosen split depth; tree branches force the first
few decisions through all sign patterns of a binary counter.  Every branch
ends with a path metric (infinite when its syndrome equation cannot be
met) and the minimum-metric pattern wins, with a fixed priority order so
results are independent of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _bp_kernels as _k
from . import bp as bp_mod
from . import osd as osd_mod
from .bp import BPConfig, BPState, TannerGraph
from .gf2 import BitVector, SparseBitMatrix


@dataclass(frozen=True)
class DecisionTreeConfig:
    iters_per_step: int = 6
    main_Dmax: int = 25
    side_split_depths: tuple = (4, 5, 6, 7, 8, 9, 10)
    side_extra_steps: int = 10
    tree_depth: int = 4
    tree_extra_steps: int = 10
    low_error_mode: bool = False
    P_A: float = -3.0          # all-history threshold for forcing a 1 (main)
    P_A_other: float = 0.0
    P_B: float = -12.0         # history-sum threshold for forcing a 1 (main)
    P_B_other: float = -10.0
    P_B_first: float = -16.0   # override at depth 1
    P_C: float = 30.0          # confident-zero threshold, early depths
    P_D: float = 3.0           # weak-zero threshold near unsatisfied checks
    preprocess_iters: int = 8
    shorten: bool = True
    shorten_to: int | None = None  # None: twice the window row count
    scale: float = 1.0

    def __post_init__(self):
        if self.iters_per_step < 4:
            raise ValueError("steps must fill the 4-deep history")
        if self.main_Dmax < 1 or self.tree_depth < 1:
            raise ValueError("depth bounds must be positive")
        if any(d < 1 or d > self.main_Dmax for d in self.side_split_depths):
            raise ValueError("side split depths must lie in [1, main_Dmax]")


PRESETS = {
    "n144-circuit": DecisionTreeConfig(),
    "n288-circuit": DecisionTreeConfig(
        main_Dmax=40,
        side_split_depths=tuple(range(4, 21)),
        side_extra_steps=20,
        tree_depth=5,
        tree_extra_steps=20,
        preprocess_iters=16,
    ),
    "data-qubit": DecisionTreeConfig(
        main_Dmax=40,
        side_split_depths=tuple(range(4, 21)),
        side_extra_steps=30,
        tree_depth=5,
        tree_extra_steps=30,
        low_error_mode=True,
        preprocess_iters=16,
        shorten=False,
        scale=0.625,
    ),
}


def preset(name: str) -> DecisionTreeConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; "
                         f"choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class BranchSpec:
    kind: str                      # "main" | "side" | "tree"
    max_depth: int
    split_depth: int = 0           # side branches
    tree_id: int = 0               # tree branches

    def first_divergence(self, config: DecisionTreeConfig) -> int:
        """Earliest depth whose decision can differ from the main branch."""
        if self.kind == "main":
            return self.max_depth + 1
        if self.kind == "side":
            return self.split_depth
        low = (self.tree_id & -self.tree_id).bit_length()  # lowest set bit, 1-based
        return low if low <= config.tree_depth else self.max_depth + 1


def branch_plan(config: DecisionTreeConfig) -> list:
    """Priority-ordered ensemble: main, sides by split depth, tree by id."""
    plan = [BranchSpec("main", config.main_Dmax)]
    for d in config.side_split_depths:
        plan.append(BranchSpec("side", d + config.side_extra_steps,
                               split_depth=d))
    for tid in range(2, 1 << config.tree_depth):
        plan.append(BranchSpec("tree", config.tree_depth + config.tree_extra_steps,
                               tree_id=tid))
    return plan


@dataclass
class Snapshot:
    """Decision mask of a branch just before one decimation step."""

    depth: int
    vn_status: np.ndarray
    working_syndrome: np.ndarray
    cn_active_deg: np.ndarray
    selected_vn: int
    selected_f: int


@dataclass
class BranchResult:
    spec: BranchSpec
    e_hat: BitVector | None
    pm: float
    depth: int
    last_dec_depth: int  # deepest step at which this branch decimated


def agg_dec(history, depth: int, on_main: bool, unsat_neighbors: int,
            config: DecisionTreeConfig = DecisionTreeConfig()) -> int:
    """Aggressive decimation verdict for one variable: 1, 0, or -1 (none)."""
    h = np.asarray(history, dtype=np.float64)
    if h.shape != (4,):
        raise ValueError("history must hold exactly 4 posteriors")
    p_a = config.P_A if on_main else config.P_A_other
    p_b = config.P_B_first if depth == 1 else (
        config.P_B if on_main else config.P_B_other)
    if np.all(h < p_a) and h.sum() < p_b:
        return 1
    if np.all(h > config.P_C) and depth <= 4:
        return 0
    if np.all(h > config.P_D) and unsat_neighbors >= 3:
        return 0
    return -1


def select_vn(state: BPState, depth: int, on_main: bool,
              config: DecisionTreeConfig):
    """Pick the next variable to decimate; aggressive picks are fixed
    in place.  Returns (vn, f) or (-1, -1) when none is eligible."""
    g = state.graph
    use_agg = not config.low_error_mode
    p_a = config.P_A if on_main else config.P_A_other
    p_b = config.P_B_first if depth == 1 else (
        config.P_B if on_main else config.P_B_other)
    return _k.select_and_decimate(
        state.history, state.vn_status, g.vn_static_deg, state.posterior,
        g.cn_ptr, g.cn_vn, g.vn_ptr, g.vn_edge, g.edge_cn,
        state.working_syndrome, state.cn_active_deg,
        use_agg, depth, p_a, p_b, config.P_C, config.P_D)


def _branch_value(spec: BranchSpec, depth: int, f: int,
                  config: DecisionTreeConfig) -> int:
    if spec.kind == "side" and depth == spec.split_depth:
        return 1 - f
    if spec.kind == "tree" and depth <= config.tree_depth:
        b = (spec.tree_id >> (depth - 1)) & 1
        return b + (1 if b == 0 else -1) * f
    return f


def _finish(state: BPState, spec: BranchSpec, depth: int, n_dec: int):
    if bp_mod.check_syndrome(state):
        e_hat = bp_mod.hard_decision(state)
        pm = float(state.priors[e_hat.to_dense() != 0].sum())
        return BranchResult(spec, e_hat, pm, depth, n_dec)
    return BranchResult(spec, None, float("inf"), depth, n_dec)


def run_branch(graph: TannerGraph, priors_llr, s, spec: BranchSpec,
               config: DecisionTreeConfig, record_snapshots: bool = False,
               state: BPState | None = None, start_depth: int = 1):
    """Execute one decision branch to completion.

    Returns (BranchResult, snapshots).  A snapshot captures the mask just
    before each decimation together with the selection it is about to
    apply, which is exactly what a forked branch needs to resume.
    """
    if state is None:
        state = bp_mod.bp_init(graph, priors_llr, s, BPConfig(scale=config.scale))
    snapshots = []
    diverge = spec.first_divergence(config)
    last_dec = start_depth - 1
    for depth in range(start_depth, spec.max_depth + 1):
        bp_mod.bp_iterate(state, config.iters_per_step)
        if bp_mod.check_syndrome(state):
            return _finish(state, spec, depth, last_dec), snapshots
        # thresholds follow the main branch until the state can diverge
        on_main = spec.kind == "main" or depth <= diverge
        vn, f = select_vn(state, depth, on_main, config)
        if vn < 0:
            return _finish(state, spec, depth, last_dec), snapshots
        if record_snapshots:
            snapshots.append(Snapshot(
                depth, state.vn_status.copy(), state.working_syndrome.copy(),
                state.cn_active_deg.copy(), int(vn), int(f)))
        value = _branch_value(spec, depth, int(f), config)
        bp_mod.decimate(state, int(vn), value)
        last_dec = depth
        if spec.kind == "side" and depth == spec.split_depth:
            state.reinit_messages()
        if bp_mod.peel(state) == bp_mod.PEEL_CONTRADICTION:
            return BranchResult(spec, None, float("inf"), depth, last_dec), snapshots
        if state.n_undecided == 0:
            return _finish(state, spec, depth, last_dec), snapshots
    return _finish(state, spec, spec.max_depth, last_dec), snapshots


def run_side_from_snapshot(graph: TannerGraph, priors_llr, s, snap: Snapshot,
                           spec: BranchSpec, config: DecisionTreeConfig):
    """Resume a side branch from a main-branch snapshot at its split."""
    assert spec.kind == "side" and snap.depth == spec.split_depth
    state = bp_mod.bp_init(graph, priors_llr, s, BPConfig(scale=config.scale))
    state.vn_status = snap.vn_status.copy()
    state.working_syndrome = snap.working_syndrome.copy()
    state.cn_active_deg = snap.cn_active_deg.copy()
    bp_mod.decimate(state, snap.selected_vn, 1 - snap.selected_f)
    state.reinit_messages()
    if bp_mod.peel(state) == bp_mod.PEEL_CONTRADICTION:
        return BranchResult(spec, None, float("inf"), snap.depth, snap.depth)
    if state.n_undecided == 0:
        return _finish(state, spec, snap.depth, snap.depth)
    result, _ = run_branch(graph, priors_llr, s, spec, config,
                           state=state, start_depth=snap.depth + 1)
    return result


def preprocess_shorten(H_win: SparseBitMatrix, priors_llr, s,
                       config: DecisionTreeConfig):
    """Rank columns by short-BP reliability and keep the most suspect ones.

    Returns (H_short, priors_short, column_map); dropped columns are
    implicitly decided zero.
    """
    n = H_win.n_cols
    priors_llr = np.asarray(priors_llr, dtype=np.float64)
    target = config.shorten_to if config.shorten_to is not None else 2 * H_win.n_rows
    if not config.shorten or target >= n:
        return H_win, priors_llr, np.arange(n, dtype=np.int64)
    state = bp_mod.bp_init(H_win, priors_llr, s, BPConfig(scale=config.scale))
    bp_mod.bp_iterate(state, config.preprocess_iters)
    order = osd_mod.rank_columns(state.history_sums())
    keep = np.sort(order[:target])
    H_short = H_win.submatrix(np.arange(H_win.n_rows), keep)
    return H_short, priors_llr[keep], keep


@dataclass
class GdgResult:
    e_hat: BitVector
    pm: float
    success: bool
    branches: list = field(default_factory=list)


def _better(cand: BranchResult, best: BranchResult | None) -> bool:
    return best is None or cand.pm < best.pm


def gdg_decode(H_win: SparseBitMatrix, priors_llr, s,
               config: DecisionTreeConfig, exact_skip: bool = True) -> GdgResult:
    """Run the full branch ensemble and return the minimum-metric pattern.

    Branches whose forced decisions cannot diverge before the main branch
    terminated would replay it verbatim, so they are skipped when
    ``exact_skip`` is on; the result is identical either way.
    """
    s_arr = s.to_dense() if isinstance(s, BitVector) else \
        np.asarray(s, dtype=np.uint8)
    n = H_win.n_cols
    if not s_arr.any():
        return GdgResult(BitVector(n), 0.0, True, [])
    H_short, priors_short, column_map = preprocess_shorten(
        H_win, priors_llr, s_arr, config)
    graph = TannerGraph(H_short)
    plan = branch_plan(config)
    best: BranchResult | None = None
    diagnostics = []
    main_dec = None
    for spec in plan:
        if (exact_skip and main_dec is not None
                and spec.first_divergence(config) > main_dec):
            continue
        result, _ = run_branch(graph, priors_short, s_arr, spec, config)
        if spec.kind == "main":
            main_dec = result.last_dec_depth
        diagnostics.append((spec, result.pm, result.depth))
        if _better(result, best):
            best = result
    if best is None or best.e_hat is None:
        return GdgResult(BitVector(n), float("inf"), False, diagnostics)
    full = np.zeros(n, dtype=np.uint8)
    full[column_map[best.e_hat.to_dense() != 0]] = 1
    return GdgResult(BitVector.from_dense(full), best.pm, True, diagnostics)
