"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (a rule that never matches, a
run that does not complete, a non-deterministic multi-program), 2 on usage
or parse errors. Machine output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from ..analysis.ctl import PathSemantics, check_ctl, satisfying_points
from ..analysis.ctl_text import parse_formula
from ..analysis.dataflow import (definitely_assigned, live_vars, reaching_defs,
                                 unique_reaching_def)
from ..corpus import load_corpus, random_store
from ..debug_eval import corpus_report
from ..errors import OsrError, OsrSyntaxError, StructureError
from ..ir.cfg import build_cfg
from ..ir.interp import Completed, Store, run
from ..ir.text import load_program, print_program
from ..multiver import build_multiprogram, determinism_check, history_jsonl, mv_run, parse_policy
from ..osr.comp import ReconstructMode, parse_modes
from ..osr.feasibility import feasibility_report
from ..osr.mapping import do_passes
from ..rewrite.pipeline import pad, parse_pipeline
from .stepper import Stepper, interact, replay


class UsageError(Exception):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def parse_store(pairs) -> Store:
    bindings = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep or not name.isidentifier():
            raise UsageError(f"bad store literal {pair!r}; expected NAME=INT")
        if name in bindings:
            raise UsageError(f"{name} given twice")
        try:
            bindings[name] = int(value)
        except ValueError:
            raise UsageError(f"bad integer in {pair!r}") from None
    return Store(bindings)


def _pipeline(text):
    try:
        return parse_pipeline(text)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _modes(text):
    try:
        return parse_modes(text)
    except ValueError:
        raise UsageError(f"bad mode list {text!r}; expected live, avail, or live,avail") from None


def _diagnostics(notes):
    for note in notes:
        print(f"note: {note}", file=sys.stderr)


# --- subcommands ---------------------------------------------------------------------

def cmd_check(args) -> int:
    p = load_program(args.file)
    print(f"ok: {len(p)} instructions, in {' '.join(p.in_vars) or '-'}, "
          f"out {' '.join(p.out_vars) or '-'}")
    return 0


def cmd_analyze(args) -> int:
    p = load_program(args.file)
    points = [args.point] if args.point is not None else list(p.points())
    for l in points:
        if not 1 <= l <= len(p):
            raise UsageError(f"point {l} out of range 1..{len(p)}")
    q = args.query
    if q in ("urdef", "reaching") and not args.var:
        raise UsageError(f"query {q} needs --var")
    if q in ("ctl", "sat") and not args.formula:
        raise UsageError(f"query {q} needs --formula")
    if q == "cfg":
        cfg = build_cfg(p)
        for l in p.points():
            print(f"{l}: -> {' '.join(map(str, sorted(cfg.succ[l]))) or '-'}")
        return 0
    if q in ("ctl", "sat"):
        mode = PathSemantics(args.semantics)
        f = parse_formula(args.formula)
        if q == "sat":
            print(" ".join(map(str, sorted(satisfying_points(p, f, mode)))))
            return 0
        for l in points:
            print(f"{l}: {'true' if check_ctl(p, l, f, mode) else 'false'}")
        return 0
    for l in points:
        if q == "live":
            value = "{" + ", ".join(sorted(live_vars(p, l))) + "}"
        elif q == "da":
            value = "{" + ", ".join(sorted(definitely_assigned(p, l))) + "}"
        elif q == "urdef":
            d = unique_reaching_def(p, l, args.var)
            value = "none" if d is None else str(d)
        else:
            value = "{" + ", ".join(map(str, sorted(reaching_defs(p, l, args.var)))) + "}"
        print(f"{l}: {value}")
    return 0


def cmd_transform(args) -> int:
    p = load_program(args.file)
    res = do_passes(p, _pipeline(args.passes), ReconstructMode(args.mode))
    _diagnostics(res.diagnostics)
    if not res.applied:
        print("error: no rule in the pipeline matched", file=sys.stderr)
        return 1
    if args.dump_mapping:
        print(dump_json({
            "program": print_program(res.program).splitlines(),
            "applied": [name for name, _ in res.applied],
            "mappings": [res.forward.to_json(1, 2), res.backward.to_json(2, 1)],
        }), end="")
    else:
        print(print_program(res.program))
    return 0


def cmd_run(args) -> int:
    p = load_program(args.file)
    outcome = run(p, parse_store(args.inputs), args.fuel)
    print(outcome)
    return 0 if isinstance(outcome, Completed) else 1


def _multiprogram(args):
    p = load_program(args.file)
    pipelines = [_pipeline(t) for t in (args.passes or [])]
    mp = build_multiprogram(p, pipelines, ReconstructMode(args.mode))
    _diagnostics(mp.diagnostics)
    return mp


def cmd_mv_run(args) -> int:
    mp = _multiprogram(args)
    try:
        policy = parse_policy(args.policy, args.seed)
    except ValueError as err:
        raise UsageError(str(err)) from None
    res = mv_run(mp, parse_store(args.inputs), policy, args.fuel, record_norm=args.record_norm)
    print(res.outcome)
    if args.history:
        text = history_jsonl(res.history)
        if args.history == "-":
            print(text, end="")
        else:
            Path(args.history).write_text(text, encoding="utf-8")
    return 0 if isinstance(res.outcome, Completed) else 1


def cmd_osr_points(args) -> int:
    p = load_program(args.file)
    res = do_passes(p, _pipeline(args.passes))
    _diagnostics(res.diagnostics)
    forward = args.direction == "fwd"
    src, dst = (p, res.program) if forward else (res.program, p)
    report = feasibility_report(src, dst, _modes(args.mode), res.point_map(forward), res.aliases)
    print(dump_json(report.to_json()), end="")
    return 0


def cmd_debug_eval(args) -> int:
    entries = load_corpus(args.corpus)
    pipelines = [_pipeline(args.passes)] if args.passes else None
    report = corpus_report(entries, _modes(args.mode), pipelines)
    if args.format == "json":
        print(dump_json(report.to_json()), end="")
    else:
        print(report.to_table(), end="")
    return 0


def cmd_determinism(args) -> int:
    mp = _multiprogram(args)
    if args.inputs:
        stores = [parse_store(args.inputs)]
    else:
        rng = random.Random(args.seed)
        stores = [random_store(mp.version(1), rng) for _ in range(args.stores)]
    status = 0
    for store in stores:
        verdict = determinism_check(mp, store, args.fuel, args.max_osr)
        print(f"{store}: {verdict}")
        if verdict.kind == "Counterexample":
            status = 1
    return status


def cmd_step(args) -> int:
    mp = _multiprogram(args)
    store = parse_store(args.inputs)
    if args.script:
        commands = Path(args.script).read_text(encoding="utf-8").splitlines()
        stepper = replay(mp, store, commands)
    else:
        stepper = interact(Stepper(mp, store), sys.stdin)
    if args.log:
        Path(args.log).write_text("".join(c + "\n" for c in stepper.log), encoding="utf-8")
    return 0


def cmd_pad(args) -> int:
    p = load_program(args.file)
    for at in sorted(args.at, reverse=True):
        if not 1 < at <= len(p):
            raise UsageError(f"--at {at} out of range 2..{len(p)}")
        p = pad(p, at).program
    print(print_program(p))
    return 0


# --- argument parsing --------------------------------------------------------------

def _add_mv_flags(sp):
    sp.add_argument("--passes", action="append", metavar="PIPELINE",
                    help="one derived version per occurrence, e.g. cp*,dce")
    sp.add_argument("--mode", choices=["live", "avail"], default="live")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osrlab", description="OSR mappings for a toy IR")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="parse and validate a program")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("analyze", help="dataflow and CTL queries")
    sp.add_argument("file")
    sp.add_argument("query", choices=["live", "da", "urdef", "reaching", "ctl", "sat", "cfg"])
    sp.add_argument("--point", type=int)
    sp.add_argument("--var")
    sp.add_argument("--formula")
    sp.add_argument("--semantics", choices=[m.value for m in PathSemantics],
                    default=PathSemantics.MAXIMAL_FINITE.value)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("transform", help="apply a rewrite pipeline")
    sp.add_argument("file")
    sp.add_argument("--passes", required=True)
    sp.add_argument("--mode", choices=["live", "avail"], default="live")
    sp.add_argument("--dump-mapping", action="store_true",
                    help="emit JSON with the program and both OSR mappings")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("run", help="run a program")
    sp.add_argument("file")
    sp.add_argument("--in", dest="inputs", action="append", metavar="NAME=INT")
    sp.add_argument("--fuel", type=int, default=10_000)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("mv-run", help="run a multi-version program under an oracle policy")
    sp.add_argument("file")
    _add_mv_flags(sp)
    sp.add_argument("--in", dest="inputs", action="append", metavar="NAME=INT")
    sp.add_argument("--policy", default="never",
                    help="never | always@POINT>VERSION | random:PROB | script:n,2,...")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fuel", type=int, default=10_000)
    sp.add_argument("--history", metavar="PATH", help="write OSR history as JSON lines (- for stdout)")
    sp.add_argument("--record-norm", action="store_true", help="include normal steps in the history")
    sp.set_defaults(func=cmd_mv_run)

    sp = sub.add_parser("osr-points", help="per-point feasibility report (JSON)")
    sp.add_argument("file")
    sp.add_argument("--passes", required=True)
    sp.add_argument("--mode", default="live,avail")
    sp.add_argument("--direction", choices=["fwd", "bwd"], default="fwd")
    sp.set_defaults(func=cmd_osr_points)

    sp = sub.add_parser("debug-eval", help="endangered variables and recoverability over a corpus")
    sp.add_argument("corpus", nargs="?", help="corpus directory (default: bundled corpus)")
    sp.add_argument("--passes", help="use this pipeline instead of the manifest's")
    sp.add_argument("--mode", default="live,avail")
    sp.add_argument("--format", choices=["table", "json"], default="table")
    sp.set_defaults(func=cmd_debug_eval)

    sp = sub.add_parser("determinism", help="exhaustive schedule enumeration")
    sp.add_argument("file")
    _add_mv_flags(sp)
    sp.add_argument("--in", dest="inputs", action="append", metavar="NAME=INT")
    sp.add_argument("--fuel", type=int, default=64)
    sp.add_argument("--max-osr", type=int, default=2)
    sp.add_argument("--stores", type=int, default=5, help="random stores when --in is absent")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_determinism)

    sp = sub.add_parser("step", help="interactive stepper")
    sp.add_argument("file")
    _add_mv_flags(sp)
    sp.add_argument("--in", dest="inputs", action="append", metavar="NAME=INT")
    sp.add_argument("--script", help="replay commands from a file instead of stdin")
    sp.add_argument("--log", help="write the accepted command log here")
    sp.set_defaults(func=cmd_step)

    sp = sub.add_parser("pad", help="insert skip instructions")
    sp.add_argument("file")
    sp.add_argument("--at", type=int, action="append", required=True)
    sp.set_defaults(func=cmd_pad)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OsrSyntaxError, StructureError) as err:
        print(f"error: {type(err).__name__}: {err}" if not isinstance(err, UsageError)
              else f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (OsrError, ValueError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


__all__ = ["main", "build_parser", "parse_store"]
