"""Seeded Monte-Carlo experiments over models, decoders and window plans.

Trials use seed = base_seed + index with a counter-based generator, so any
partitioning of trials across workers reproduces the same aggregate
counts.  Persisted reports contain no wall-clock data and are therefore
byte-identical across runs and thread counts; latency statistics are
collected separately for benchmarking.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import codes, gdg, noise_model as nm, osd, window as win
from .noise_model import DetectorModel


@dataclass(frozen=True)
class ModelSpec:
    kind: str                     # data | single-shot | pheno | dem
    code_text: str | None = None  # bivariate code description
    p_d: float = 0.0
    p_s: float = 0.0
    rounds: int = 1
    dem_text: str | None = None

    def with_rates(self, p_d=None, p_s=None) -> "ModelSpec":
        return ModelSpec(self.kind, self.code_text,
                         self.p_d if p_d is None else p_d,
                         self.p_s if p_s is None else p_s,
                         self.rounds, self.dem_text)


def build_model(spec: ModelSpec) -> DetectorModel:
    if spec.kind == "dem":
        if spec.dem_text is None:
            raise ValueError("dem model needs detector model text")
        return nm.parse_dem(spec.dem_text)
    if spec.code_text is None:
        raise ValueError(f"{spec.kind} model needs a code description")
    code = codes.bb_code_from_description(spec.code_text)
    if spec.kind == "data":
        return nm.build_data_qubit_model(code, spec.p_d)
    if spec.kind == "single-shot":
        return nm.build_single_shot_model(code, spec.p_d, spec.p_s)
    if spec.kind == "pheno":
        return nm.build_phenomenological_model(code, spec.rounds,
                                               spec.p_d, spec.p_s)
    raise ValueError(f"unknown model kind {spec.kind!r}")


@dataclass(frozen=True)
class DecoderSpec:
    name: str = "gdg"             # gdg | osd0 | osd-cs
    preset: str = "n144-circuit"
    order: int = 10
    restrict: bool = False

    def make(self):
        if self.name == "gdg":
            return win.gdg_window_decoder(gdg.preset(self.preset))
        if self.name == "osd0":
            return win.osd_window_decoder(osd.OsdConfig(order=0))
        if self.name == "osd-cs":
            return win.osd_window_decoder(osd.OsdConfig(
                order=self.order, restrict_to_2wprime=self.restrict))
        raise ValueError(f"unknown decoder {self.name!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec
    decoder: DecoderSpec = DecoderSpec()
    last_window_decoder: DecoderSpec | None = None
    W: int = 1
    F: int = 1
    trials: int = 1000
    base_seed: int = 0
    threads: int = 1
    sweep: tuple = ()   # tuple of (p_d, p_s) pairs; empty: single point

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("at least one trial required")


def wilson_interval(k: int, n: int, z: float = 1.959963984540054):
    """95% Wilson score interval for k successes out of n."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # degenerate counts hit the exact bound; avoid rounding past it
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return lo, hi


def per_round_rate(P: float, R: int) -> float:
    if not 0 <= P <= 1 or R < 1:
        raise ValueError("need P in [0,1] and R >= 1")
    return 1.0 - (1.0 - P) ** (1.0 / R)


def lower_bound_curve(code: codes.CssCode, p_d: float, p_s: float,
                      p_L_base: float) -> float:
    """Single-shot failure floor from small syndrome-noise configurations."""
    c_a = codes.count_weight2_syndrome_configs(code.H_X)
    c_b = codes.config_b_coefficient(code.H_X)
    return p_L_base + c_a * p_s ** 2 + c_b * p_d * p_s ** 2


@dataclass
class PointReport:
    p_d: float
    p_s: float
    trials: int
    successes: int
    syndrome_failures: int
    logical_failures: int
    ler: float
    per_round: float
    wilson_low: float
    wilson_high: float
    mean_window_ms: float = field(default=0.0, compare=False)
    worst_window_ms: float = field(default=0.0, compare=False)


@dataclass
class AggregateReport:
    config: dict
    points: list


def _plan(config: ExperimentConfig) -> win.WindowPlan:
    last = (config.last_window_decoder.make()
            if config.last_window_decoder is not None else None)
    return win.WindowPlan(config.W, config.F, config.decoder.make(),
                          last_window_decoder=last)


def _run_point(model: DetectorModel, config: ExperimentConfig,
               p_d: float, p_s: float) -> PointReport:
    plan = _plan(config)
    noisy_rounds = model.blocks[0] - 1 if model.blocks and model.blocks[0] > 1 \
        else 1

    n_windows = len(win.window_starts(
        model.blocks[0] if model.blocks else 1, config.W, config.F))

    def one(seed):
        sample = nm.sample(model, seed)
        t0 = time.perf_counter()
        if sample.s.weight == 0 and sample.l.weight == 0:
            # the all-zero pattern is the exact minimum-metric answer
            outcome = win.SUCCESS
        else:
            _, outcome = win.decode_and_judge(model, sample, plan)
        elapsed = time.perf_counter() - t0
        return outcome, elapsed / max(n_windows, 1)

    seeds = range(config.base_seed, config.base_seed + config.trials)
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(seed) for seed in seeds]
    counts = {win.SUCCESS: 0, win.SYNDROME_FAILURE: 0, win.LOGICAL_FAILURE: 0}
    latencies = []
    for outcome, lat in results:
        counts[outcome] += 1
        latencies.append(lat)
    failures = counts[win.SYNDROME_FAILURE] + counts[win.LOGICAL_FAILURE]
    ler = failures / config.trials
    lo, hi = wilson_interval(failures, config.trials)
    return PointReport(
        p_d=p_d, p_s=p_s, trials=config.trials,
        successes=counts[win.SUCCESS],
        syndrome_failures=counts[win.SYNDROME_FAILURE],
        logical_failures=counts[win.LOGICAL_FAILURE],
        ler=ler, per_round=per_round_rate(ler, noisy_rounds),
        wilson_low=lo, wilson_high=hi,
        mean_window_ms=1e3 * float(np.mean(latencies)),
        worst_window_ms=1e3 * float(np.max(latencies)),
    )


def run_experiment(config: ExperimentConfig) -> AggregateReport:
    points = config.sweep or ((config.model.p_d, config.model.p_s),)
    reports = []
    for p_d, p_s in points:
        model = build_model(config.model.with_rates(p_d, p_s))
        reports.append(_run_point(model, config, p_d, p_s))
    cfg = {
        "model": {k: v for k, v in asdict(config.model).items()
                  if k != "dem_text"},
        "decoder": asdict(config.decoder),
        "window": [config.W, config.F],
        "trials": config.trials,
        "base_seed": config.base_seed,
    }
    return AggregateReport(config=cfg, points=reports)


_PERSISTED_FIELDS = ("p_d", "p_s", "trials", "successes",
                     "syndrome_failures", "logical_failures", "ler",
                     "per_round", "wilson_low", "wilson_high")


def report_to_json(report: AggregateReport) -> str:
    """Deterministic serialization; excludes wall-clock measurements."""
    doc = {
        "config": report.config,
        "points": [{k: getattr(p, k) for k in _PERSISTED_FIELDS}
                   for p in report.points],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_to_csv(report: AggregateReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_PERSISTED_FIELDS)
    for p in report.points:
        writer.writerow([repr(getattr(p, k)) if isinstance(getattr(p, k), float)
                         else getattr(p, k) for k in _PERSISTED_FIELDS])
    return buf.getvalue()
