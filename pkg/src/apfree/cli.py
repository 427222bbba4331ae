"""Command-line front end.

Numeric I/O is rational strings everywhere except plot-data CSV, which
is explicitly lossy.  Exit codes: 0 success, 1 verification failure,
2 malformed input, 3 refinement exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import builder
from .apsearch import ap_witness_long, brute_force_ap3, has_ap3, min_defect
from .errors import MalformedInput, RefinementExhausted, ScheduleInfeasible
from .homeo import PLHomeo
from .intervals import IntervalUnion, parse_rat, rat_str
from .ndsets import NDGenerator
from .report import plot_rows, render_figure, write_plot_csv

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_MALFORMED = 2
EXIT_REFINEMENT = 3


def _read_json_arg(value: str):
    """Inline JSON, @path, or '-' for stdin."""
    if value == "-":
        text = sys.stdin.read()
    elif value.startswith("@"):
        with open(value[1:]) as fh:
            text = fh.read()
    else:
        text = value
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_union(value: str) -> IntervalUnion:
    return IntervalUnion.from_jsonable(_read_json_arg(value))


def _load_homeo(value: str) -> PLHomeo:
    return PLHomeo.from_jsonable(_read_json_arg(value))


def _load_gens(value: str) -> list[NDGenerator]:
    data = _read_json_arg(value)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise MalformedInput("generator input must be an object or an array")
    return [NDGenerator.from_config(c) for c in data]


def _cmd_gen_set(args) -> int:
    gens = _load_gens(args.gens)
    gen = gens[0] if len(gens) == 1 else __import__(
        "apfree.ndsets", fromlist=["UnionGen"]).UnionGen(gens)
    union = gen.cover(args.generation)
    _write_output(_dump(union.to_jsonable()), args.out)
    return EXIT_OK


def _cmd_destroy(args) -> int:
    gens = _load_gens(args.gens)
    from .ndsets import UnionGen
    gen = gens[0] if len(gens) == 1 else UnionGen(gens)
    f = _load_homeo(args.homeo) if args.homeo else PLHomeo.identity()
    g_new, plan, cert = builder.destroy_step(f, gen, parse_rat(args.eps), args.max_gen)
    out = {
        "homeo": g_new.to_jsonable(),
        "certificate": cert.to_jsonable(),
        "plan": {
            "r": plan.r,
            "cuts": [rat_str(c) for c in plan.cuts],
            "cells": [[rat_str(c.lo), rat_str(c.hi)] for c in plan.cells],
            "targets": [[rat_str(z.lo), rat_str(z.hi)] for z in plan.targets],
            "anchors": None if plan.anchors is None else plan.anchors.to_jsonable(),
        },
    }
    _write_output(_dump(out), args.out)
    return EXIT_OK


def _load_run_config(args):
    cfg = {}
    if args.config:
        cfg = _read_json_arg("@" + args.config)
        if not isinstance(cfg, dict):
            raise MalformedInput("run config must be a JSON object")
    gens_data = cfg.get("generators")
    if args.gens:
        gens_data = _read_json_arg(args.gens)
    if not gens_data:
        raise MalformedInput("no generators configured")
    gens = [NDGenerator.from_config(c) for c in gens_data]
    stages = args.stages if args.stages is not None else cfg.get("stages")
    if stages is None:
        raise MalformedInput("no stage count configured")
    stages = int(stages)
    if stages < 1:
        raise MalformedInput("stages must be at least 1")
    schedule = cfg.get("eps_schedule")
    if args.schedule:
        schedule = json.loads(args.schedule)
    if schedule is not None:
        schedule = [parse_rat(e) for e in schedule]
    max_gen = int(args.max_gen if args.max_gen is not None
                  else cfg.get("max_gen", 64))
    if max_gen < 1:
        raise MalformedInput("max_gen must be at least 1")
    return gens, stages, schedule, max_gen


def _cmd_build(args) -> int:
    gens, stages, schedule, max_gen = _load_run_config(args)
    cert = builder.build_fap(gens, stages, schedule, max_gen)
    _write_output(_dump(cert.to_jsonable()), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cert = builder.FapCertificate.from_jsonable(_read_json_arg("@" + args.certificate))
    gens = _load_gens(args.sets)
    report = builder.verify_certificate(cert, gens)
    if report.ok:
        _write_output(_dump({"ok": True}), args.out)
        return EXIT_OK
    _write_output(_dump({"ok": False, "failure": report.failure}), args.out)
    return EXIT_VERIFY


def _cmd_ap3(args) -> int:
    union = _load_union(args.set)
    witness = has_ap3(union, parse_rat(args.eps), strict=args.strict)
    if witness is None:
        _write_output(_dump({"witness": None}), args.out)
    else:
        _write_output(_dump({"witness": witness.to_jsonable()}), args.out)
    return EXIT_OK


def _cmd_defect(args) -> int:
    union = _load_union(args.set)
    report = min_defect(union, parse_rat(args.eps))
    _write_output(_dump(report.to_jsonable()), args.out)
    return EXIT_OK


def _cmd_witness(args) -> int:
    union = _load_union(args.set)
    witness = ap_witness_long(union, args.n)
    if witness is None:
        _write_output(_dump({"witness": None}), args.out)
    else:
        _write_output(_dump({"witness": witness.to_jsonable()}), args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    union = _load_union(args.set)
    witness = brute_force_ap3(union, parse_rat(args.eps), args.denom_bound)
    _write_output(_dump({"witness": None if witness is None
                         else witness.to_jsonable()}), args.out)
    return EXIT_OK


def _cmd_dist(args) -> int:
    f = _load_homeo(args.f)
    g = _load_homeo(args.g)
    _write_output(_dump({"sup_dist": rat_str(f.sup_dist(g))}), args.out)
    return EXIT_OK


def _cmd_compose(args) -> int:
    outer = _load_homeo(args.outer)
    inner = _load_homeo(args.inner)
    _write_output(_dump(outer.compose(inner).to_jsonable()), args.out)
    return EXIT_OK


def _cmd_rap_witness(args) -> int:
    union = _load_union(args.set)
    phi = _load_homeo(args.homeo) if args.homeo else PLHomeo.identity()
    witness = builder.rap_demo(union, phi, args.n)
    _write_output(_dump({"witness": witness.to_jsonable()}), args.out)
    return EXIT_OK


def _cmd_plot_data(args) -> int:
    phi = _load_homeo(args.homeo) if args.homeo else PLHomeo.identity()
    cover = _load_union(args.set) if args.set else None
    image = phi.image(cover) if cover is not None else None
    rows = plot_rows(phi, cover, image, refine=args.refine)
    write_plot_csv(rows, args.csv)
    if args.fig:
        render_figure(phi, cover, image, args.fig, refine=args.refine)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apfree",
        description="Exact construction and verification of AP-destroying "
                    "PL homeomorphisms")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="output file (atomic write); stdout when absent")
        return p

    p = add("gen-set", _cmd_gen_set, help="emit a cover at a generation")
    p.add_argument("--gens", required=True, help="generator config JSON, @file or -")
    p.add_argument("--generation", type=int, required=True)

    p = add("destroy", _cmd_destroy, help="run a single destruction step")
    p.add_argument("--gens", required=True)
    p.add_argument("--homeo", help="starting map (default identity)")
    p.add_argument("--eps", required=True)
    p.add_argument("--max-gen", type=int, default=64)

    p = add("build", _cmd_build, help="run the full scheduler to a certificate")
    p.add_argument("--config", help="run-config JSON file")
    p.add_argument("--gens", help="generator configs (overrides config file)")
    p.add_argument("--stages", type=int)
    p.add_argument("--schedule", help="JSON array of rational strings")
    p.add_argument("--max-gen", type=int)

    p = add("verify", _cmd_verify, help="replay a certificate; exit 0 iff valid")
    p.add_argument("certificate", help="certificate JSON file")
    p.add_argument("--sets", required=True, help="generator configs the build used")

    p = add("ap3", _cmd_ap3, help="decide 3-term AP existence above a step")
    p.add_argument("--set", required=True, help="interval union JSON, @file or -")
    p.add_argument("--eps", required=True)
    p.add_argument("--strict", action="store_true")

    p = add("defect", _cmd_defect, help="minimal defect over gap-constrained triples")
    p.add_argument("--set", required=True)
    p.add_argument("--eps", required=True)

    p = add("witness", _cmd_witness, help="long AP inside the widest component")
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("oracle", _cmd_oracle, help="brute-force grid oracle for 3-term APs")
    p.add_argument("--set", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--denom-bound", type=int, required=True)

    p = add("dist", _cmd_dist, help="sup-norm distance of two maps")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = add("compose", _cmd_compose, help="compose two maps (outer after inner)")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)

    p = add("rap-witness", _cmd_rap_witness,
            help="long AP in the image of a positive-measure set")
    p.add_argument("--set", required=True)
    p.add_argument("--homeo")
    p.add_argument("--n", type=int, required=True)

    p = add("plot-data", _cmd_plot_data,
            help="CSV of the map graph and set rectangles, optional figure")
    p.add_argument("--homeo")
    p.add_argument("--set")
    p.add_argument("--csv", required=True)
    p.add_argument("--fig", help="also render a PNG/SVG figure")
    p.add_argument("--refine", type=int, default=64)

    return parser


def _error_json(exc: Exception) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)},
                      sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RefinementExhausted as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_REFINEMENT
    except (MalformedInput, ScheduleInfeasible, OSError, KeyError, TypeError) as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
