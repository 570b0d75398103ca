"""Command-line interface: build codes and models, decode, simulate, analyze.

Exit codes: 0 on completion, 2 on configuration errors, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from itertools import product
from pathlib import Path

import numpy as np

from . import codes, gdg, harness, noise_model as nm, osd, window as win


def _window_arg(text: str):
    try:
        w, f = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("window must be 'W,F'") from None
    return w, f


def _float_list(text: str):
    return tuple(float(t) for t in text.split(","))


def _add_model_args(p):
    p.add_argument("--model-kind", default="single-shot",
                   choices=["data", "single-shot", "pheno", "dem"])
    p.add_argument("--code", help="bivariate code description file")
    p.add_argument("--dem", help="detector model file")
    p.add_argument("--p-d", type=_float_list, default=(0.01,),
                   help="data fault rate(s), comma separated")
    p.add_argument("--p-s", type=_float_list, default=(0.01,),
                   help="syndrome fault rate(s), comma separated")
    p.add_argument("--rounds", type=int, default=1)


def _add_decoder_args(p):
    p.add_argument("--decoder", default="gdg",
                   choices=["gdg", "osd0", "osd-cs"])
    p.add_argument("--preset", default="n144-circuit",
                   choices=sorted(gdg.PRESETS))
    p.add_argument("--order", type=int, default=10,
                   help="combination sweep order for osd-cs")
    p.add_argument("--restrict", action="store_true",
                   help="restrict the sweep to the first 2w' ranked columns")
    p.add_argument("--last-window", choices=["gdg", "osd0", "osd-cs"],
                   help="override decoder for the final window")
    p.add_argument("--window", type=_window_arg, default=(1, 1),
                   metavar="W,F")


def _model_spec(args) -> harness.ModelSpec:
    code_text = Path(args.code).read_text() if args.code else None
    dem_text = Path(args.dem).read_text() if getattr(args, "dem", None) else None
    return harness.ModelSpec(
        kind=args.model_kind, code_text=code_text,
        p_d=args.p_d[0], p_s=args.p_s[0], rounds=args.rounds,
        dem_text=dem_text)


def _decoder_spec(args, name=None) -> harness.DecoderSpec:
    return harness.DecoderSpec(name=name or args.decoder, preset=args.preset,
                               order=args.order, restrict=args.restrict)


def _experiment_config(args) -> harness.ExperimentConfig:
    sweep = tuple(product(args.p_d, args.p_s))
    last = _decoder_spec(args, args.last_window) if args.last_window else None
    return harness.ExperimentConfig(
        model=_model_spec(args), decoder=_decoder_spec(args),
        last_window_decoder=last,
        W=args.window[0], F=args.window[1], trials=args.trials,
        base_seed=args.seed, threads=args.threads, sweep=sweep)


def cmd_build_code(args) -> int:
    poly_a = codes.BivariatePoly.parse(args.l, args.m, args.a)
    poly_b = codes.BivariatePoly.parse(args.l, args.m, args.b)
    code = codes.build_bb_code(args.l, args.m, poly_a, poly_b, d=args.d)
    text = f"{args.l} {args.m}\na: {poly_a}\nb: {poly_b}\n"
    if args.d is not None:
        text += f"d: {args.d}\n"
    if args.out:
        Path(args.out).write_text(text)
    print(f"[[{code.N}, {code.K}" + (f", {code.d}]]" if code.d else "]]"))
    print(f"checks: {code.H_X.n_rows} X, {code.H_Z.n_rows} Z")
    return 0


def cmd_build_model(args) -> int:
    model = harness.build_model(_model_spec(args))
    if args.merge:
        model = nm.merge_equivalent_columns(model)
    text = nm.export_dem(model)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# detectors {model.n_detectors} faults {model.n_faults} "
          f"logicals {model.n_logicals}", file=sys.stderr)
    return 0


def cmd_decode(args) -> int:
    model = nm.parse_dem(Path(args.dem).read_text())
    bits = np.array(Path(args.syndrome).read_text().split(), dtype=np.uint8)
    plan = win.WindowPlan(args.window[0], args.window[1],
                          _decoder_spec(args).make())
    result = win.sliding_decode(model, bits, plan)
    print(f"status: {result.status}")
    print("support:", " ".join(str(i) for i in result.e_hat.support))
    return 0


def cmd_simulate(args) -> int:
    report = harness.run_experiment(_experiment_config(args))
    for p in report.points:
        print(f"p_d={p.p_d:g} p_s={p.p_s:g} trials={p.trials} "
              f"ler={p.ler:.6g} per_round={p.per_round:.6g} "
              f"wilson=[{p.wilson_low:.6g}, {p.wilson_high:.6g}]")
    if args.out:
        Path(args.out + ".json").write_text(harness.report_to_json(report))
        Path(args.out + ".csv").write_text(harness.report_to_csv(report))
    return 0


def cmd_bench(args) -> int:
    report = harness.run_experiment(_experiment_config(args))
    for p in report.points:
        print(f"p_d={p.p_d:g} p_s={p.p_s:g} "
              f"mean_window_ms={p.mean_window_ms:.3f} "
              f"worst_window_ms={p.worst_window_ms:.3f}")
    return 0


def cmd_analyze(args) -> int:
    if args.what == "counts":
        if not args.code:
            raise ValueError("analyze counts needs --code")
        code = codes.bb_code_from_description(Path(args.code).read_text())
        c_a = codes.count_weight2_syndrome_configs(code.H_X)
        c_b = codes.config_b_coefficient(code.H_X)
        print(f"weight2_configs: {c_a}")
        print(f"weight3_triple_coefficient: {c_b}")
        return 0
    if not args.a or not args.b:
        raise ValueError("analyze gcd needs --a and --b exponent lists")
    a = codes.poly_from_exponents(int(t) for t in args.a.split(","))
    b = codes.poly_from_exponents(int(t) for t in args.b.split(","))
    g = codes.poly_gcd_gf2(a, b)
    if args.modulus:
        g = codes.poly_gcd_gf2(g, codes.poly_from_exponents([args.modulus, 0]))
    exps = [i for i in range(g.bit_length()) if (g >> i) & 1]
    print(f"gcd_degree: {g.bit_length() - 1}")
    print("gcd_exponents:", " ".join(map(str, exps)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdgdec",
        description="guided-decimation decoding for quantum LDPC codes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-code", help="construct a bivariate code")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", required=True, help="polynomial, e.g. 'x^3+y^2+y^7'")
    p.add_argument("--b", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_code)

    p = sub.add_parser("build-model", help="build or import a detector model")
    _add_model_args(p)
    p.add_argument("--merge", action="store_true",
                   help="merge columns with identical supports")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_model)

    p = sub.add_parser("decode", help="decode one syndrome file")
    p.add_argument("--dem", required=True)
    p.add_argument("--syndrome", required=True,
                   help="file of whitespace-separated detector bits")
    _add_decoder_args(p)
    p.set_defaults(func=cmd_decode)

    for name, fn in (("simulate", cmd_simulate), ("bench", cmd_bench)):
        p = sub.add_parser(name)
        _add_model_args(p)
        _add_decoder_args(p)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        if name == "simulate":
            p.add_argument("--out", help="report path prefix (.json/.csv)")
        p.set_defaults(func=fn)

    p = sub.add_parser("analyze", help="code structure analyses")
    p.add_argument("what", choices=["counts", "gcd"])
    p.add_argument("--code")
    p.add_argument("--a", help="polynomial exponents, comma separated")
    p.add_argument("--b")
    p.add_argument("--modulus", type=int, default=0,
                   help="cyclic ring exponent, e.g. 127 for x^127 + 1")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
