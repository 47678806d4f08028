"""Command line entry point: ``maxwell-demon {demo,verify,dilate}``.

Exit status is 0 exactly when every check of the invoked command passes.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import io as mio
from .dilation import build_standard_dilation, verify_dilation
from .errors import MaxwellDemonError, NotMaxwell
from .instruments import recover_maxwell_form
from .scenarios import (
    ScenarioReport,
    parse_grid,
    run_die,
    run_erasure,
    run_figure2_sweep,
    run_property_suite,
    run_simple_qmd,
)
from .states import DensityOperator

LOG2 = math.log(2.0)


def _print_report(rep: ScenarioReport, bits: bool, out=None) -> None:
    out = out or sys.stdout
    unit = "bits" if bits else "nats"
    scale = 1 / LOG2 if bits else 1.0
    print(f"scenario: {rep.name}  params: {json.dumps(rep.params)}", file=out)
    for key, val in rep.entropies.items():
        print(f"  {key:>10} = {val * scale:.12g} {unit}", file=out)
    for c in rep.checks:
        flag = "PASS" if c.passed else "FAIL"
        print(f"  [{flag}] {c.name:<40} residual={c.residual:.3e} (<= {c.threshold:.1e})",
              file=out)
    print(f"overall: {'PASS' if rep.passed else 'FAIL'}", file=out)


def _report_json(rep: ScenarioReport, bits: bool) -> dict:
    d = rep.to_dict()
    if bits:
        d["entropies"] = {k: v / LOG2 for k, v in d["entropies"].items()}
        d["unit"] = "bits"
    else:
        d["unit"] = "nats"
    return d


def _finish(rep: ScenarioReport, args) -> int:
    _print_report(rep, args.bits)
    if getattr(args, "json", None):
        mio.dump_json(_report_json(rep, args.bits), args.json)
    return 0 if rep.passed else 1


def cmd_erasure(args) -> int:
    state = "uniform"
    if args.state != "uniform":
        state = DensityOperator(mio.matrix_from_json(mio.load_json(args.state)))
    return _finish(run_erasure(args.qubits, state), args)


def cmd_simple_qmd(args) -> int:
    if args.sweep:
        table, rep = run_figure2_sweep(parse_grid(args.sweep))
        text = table.to_csv(bits=args.bits)
        if args.csv:
            Path(args.csv).write_text(text)
        else:
            sys.stdout.write(text)
        return _finish(rep, args)
    return _finish(run_simple_qmd(args.p), args)


def cmd_die(args) -> int:
    return _finish(run_die(), args)


def cmd_verify(args) -> int:
    rep = run_property_suite(args.dim_max, args.outcomes_max, args.trials, args.seed,
                             corrupt=args.corrupt)
    return _finish(rep, args)


def cmd_dilate(args) -> int:
    instr = mio.instrument_from_json(mio.load_json(args.instrument))
    try:
        ps, us = recover_maxwell_form(instr)
    except NotMaxwell as exc:
        print(f"instrument is not a conditional-action instrument: {exc}", file=sys.stderr)
        return 1
    spec = build_standard_dilation(ps, us)
    print(f"standard dilation: object dim {spec.object_dim}, ancilla dim {spec.ancilla_dim}")
    status = 0
    if args.check:
        rep = verify_dilation(spec, instr, args.trials, args.seed)
        flag = "PASS" if rep.passed else "FAIL"
        print(f"  [{flag}] max residual {rep.max_residual:.3e} over {args.trials} states")
        status = 0 if rep.passed else 1
    if args.emit:
        mio.dump_json(mio.dilation_to_json(spec), args.emit)
        print(f"  wrote {args.emit}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxwell-demon", description=__doc__)
    parser.add_argument("--bits", action="store_true", help="report entropies in bits")
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="run a worked scenario")
    demo_sub = demo.add_subparsers(dest="scenario", required=True)

    er = demo_sub.add_parser("erasure", help="erase N qubits")
    er.add_argument("--qubits", type=int, required=True)
    er.add_argument("--state", default="uniform", help="'uniform' or a matrix JSON file")
    er.add_argument("--json")
    er.set_defaults(func=cmd_erasure)

    sq = demo_sub.add_parser("simple-qmd", help="one-particle demon model")
    group = sq.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float)
    group.add_argument("--sweep", help="grid as start:stop:step or comma list")
    sq.add_argument("--csv", help="write the sweep table here")
    sq.add_argument("--json")
    sq.set_defaults(func=cmd_simple_qmd)

    die = demo_sub.add_parser("die", help="classical die example")
    die.add_argument("--json")
    die.set_defaults(func=cmd_die)

    ver = sub.add_parser("verify", help="randomized inequality suite")
    ver.add_argument("--dim-max", type=int, default=6)
    ver.add_argument("--outcomes-max", type=int, default=4)
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int, required=True)
    ver.add_argument("--json")
    ver.add_argument("--corrupt", action="store_true",
                     help="inject a non-trace-preserving instrument (negative control)")
    ver.set_defaults(func=cmd_verify)

    dil = sub.add_parser("dilate", help="standard dilation of an instrument file")
    dil.add_argument("--instrument", required=True)
    dil.add_argument("--check", action="store_true")
    dil.add_argument("--trials", type=int, default=50)
    dil.add_argument("--seed", type=int, default=7)
    dil.add_argument("--emit")
    dil.set_defaults(func=cmd_dilate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MaxwellDemonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
