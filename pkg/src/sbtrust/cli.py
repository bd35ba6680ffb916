"""Command-line front end.

Exit status: 0 true/accepted/success, 1 false/rejected/countermodel found,
2 input error (including an invalid model), 3 resource cap reached.
"""
from __future__ import annotations

import argparse
import json
import sys
from enum import IntEnum
from importlib import resources
from pathlib import Path
from typing import List, Optional, TextIO

from . import aqvist, checker, search
from .formula import ParseError, desugar, parse, render, resugar
from .model import InvalidModel, ModelError, from_json, unknown_atoms, validate
from .proofkit import EXTRA_SCHEMATA, ScriptError, check_proof, load_registry, load_script, parse_schema


class ExitStatus(IntEnum):
    OK = 0
    FALSE = 1
    INPUT_ERROR = 2
    CAP = 3


class InputError(Exception):
    pass


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("sbtrust") / "fixtures" / name))


def _resolve(path: str, subdir: str = "") -> Path:
    """A user path, falling back to the bundled fixture of the same file name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = fixture_path(subdir) / p.name if subdir else fixture_path(p.name)
    if bundled.exists():
        return bundled
    raise InputError(f"no such file: {path}")


def _load_model(path: str, close_belief: bool = False):
    p = _resolve(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: not valid JSON ({exc})") from None
    return validate(from_json(data), close_belief=close_belief)


def _parse_formula(text: str, f_syntax: bool = False):
    return aqvist.parse_f(text) if f_syntax else parse(text)


def _extra_axioms(specs: List[str]):
    out = {}
    for spec in specs or []:
        name, eq, schema = spec.partition("=")
        name = name.strip()
        if eq:
            out[name] = parse_schema(schema)
        elif name in EXTRA_SCHEMATA:
            out[name] = EXTRA_SCHEMATA[name]
        else:
            known = ", ".join(sorted(EXTRA_SCHEMATA))
            raise InputError(f"unknown extra schema {name}; give NAME=SCHEMA or one of: {known}")
    return out


class Report:
    """Collects the text report and its JSON mirror."""

    def __init__(self, out: TextIO, as_json: bool):
        self.out = out
        self.as_json = as_json
        self.data = {"verdict": None, "witness": None, "diagnostics": []}

    def line(self, text: str = ""):
        if not self.as_json:
            print(text, file=self.out)

    def diag(self, text: str):
        self.data["diagnostics"].append(text)

    def finish(self, verdict, witness=None, **extra) -> None:
        self.data["verdict"] = verdict
        self.data["witness"] = witness
        self.data.update(extra)
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True), file=self.out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_parse(args, rep: Report, err: TextIO) -> int:
    f = _parse_formula(args.formula, args.f)
    rep.line(repr(f))
    rep.finish("ok", ast=repr(f), text=render(f))
    return ExitStatus.OK


def cmd_fmt(args, rep: Report, err: TextIO) -> int:
    f = _parse_formula(args.formula, args.f)
    if args.desugar:
        f = desugar(f)
    rep.line(render(f))
    rep.finish("ok", text=render(f))
    return ExitStatus.OK


def cmd_validate(args, rep: Report, err: TextIO) -> int:
    try:
        m = _load_model(args.model, args.close_belief)
    except InvalidModel as exc:
        for v in exc.violations:
            rep.line(str(v))
            rep.diag(str(v))
        rep.line("invalid")
        rep.finish("invalid", violations=[
            {"kind": v.kind, "message": v.message, "witness": list(v.witness)} for v in exc.violations
        ])
        return ExitStatus.INPUT_ERROR
    rep.line(f"valid: {len(m.states)} states, {len(m.blocks)} block(s)")
    rep.finish("valid")
    return ExitStatus.OK


def cmd_mc(args, rep: Report, err: TextIO) -> int:
    m = _load_model(args.model, args.close_belief)
    f = parse(args.formula)
    missing = sorted(unknown_atoms(m, f))
    if missing:
        msg = f"warning: atoms not in the valuation are false everywhere: {', '.join(missing)}"
        print(msg, file=err)
        rep.diag(msg)
    lab = checker.label(m, f)
    if args.state is not None:
        if args.state not in m.index:
            raise InputError(f"unknown state {args.state!r}")
        value = lab.holds(f, args.state)
        rep.line("true" if value else "false")
        rep.finish(value, state=args.state)
        return ExitStatus.OK if value else ExitStatus.FALSE
    values = {s: lab.holds(f, s) for s in m.states}
    for s, v in values.items():
        rep.line(f"{s}: {'true' if v else 'false'}")
    everywhere = all(values.values())
    rep.line("valid in model" if everywhere else "not valid in model")
    rep.finish(everywhere, states=values)
    return ExitStatus.OK if everywhere else ExitStatus.FALSE


def cmd_prove(args, rep: Report, err: TextIO) -> int:
    script = load_script(_resolve(args.script, "proofs"))
    extra = _extra_axioms(args.allow_extra)
    registry = {} if args.no_library else load_registry(extra)
    registry.pop(script.name, None)
    result = check_proof(script, registry, extra)
    lines = []
    for v in result.verdicts:
        deps = f" [{', '.join(sorted(v.hypset))}]" if v.hypset else ""
        status = "ok" if v.ok else f"FAIL: {v.message}"
        rep.line(f"{v.id}: {status}{deps}")
        lines.append({"id": v.id, "ok": v.ok, "hyps": sorted(v.hypset), "message": v.message})
    if result.accepted:
        rep.line(f"accepted: {render(resugar(result.conclusion))}")
        if result.hypset:
            rep.line(f"  under hypotheses: {', '.join(sorted(result.hypset))}")
        if script.premises:
            rep.line("  (derived rule)")
        rep.finish("accepted", conclusion=render(resugar(result.conclusion)), lines=lines)
        return ExitStatus.OK
    where = f" at line {result.failed_line}" if result.failed_line else ""
    rep.line(f"rejected{where}: {result.diagnostic}")
    rep.diag(result.diagnostic)
    rep.finish("rejected", failed_line=result.failed_line, lines=lines)
    return ExitStatus.FALSE


def cmd_translate(args, rep: Report, err: TextIO) -> int:
    out = aqvist.translate(aqvist.parse_f(args.from_f))
    rep.line(render(out))
    rep.finish("ok", text=render(out))
    return ExitStatus.OK


def cmd_search(args, rep: Report, err: TextIO) -> int:
    goals = [(parse(g), not args.negate) for g in args.goal]
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip()) if args.atoms else None
    try:
        bounds = search.SearchBounds(args.max_blocks, args.max_states, atoms, args.cap)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        result = search.find_model(goals, bounds)
    except search.CapExceeded as exc:
        rep.line(str(exc))
        rep.diag(str(exc))
        rep.finish("cap")
        return ExitStatus.CAP
    desc = f"{bounds.max_blocks} block(s) of at most {bounds.max_states_per_block} states"
    if result.found:
        witness = result.model.to_json()
        rep.line(json.dumps(witness, indent=2))
        rep.line(f"state: {result.state}")
        rep.line(f"found after {result.candidates} candidates")
        rep.finish("found", {"model": witness, "state": result.state}, candidates=result.candidates)
        return ExitStatus.FALSE if args.negate else ExitStatus.OK
    rep.line(f"exhausted: no model within {desc} ({result.candidates} candidates)")
    if args.negate:
        rep.line("valid up to these bounds only")
    rep.finish("exhausted", candidates=result.candidates)
    return ExitStatus.OK if args.negate else ExitStatus.FALSE


def cmd_demo(args, rep: Report, err: TextIO) -> int:
    from .demo import run_demo

    rows = run_demo()
    for r in rows:
        rep.line(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.got}" + ("" if r.ok else f" (expected {r.expected})"))
    passed = sum(r.ok for r in rows)
    rep.line(f"{passed}/{len(rows)} fixtures reproduced")
    rep.finish("pass" if passed == len(rows) else "fail",
               rows=[{"name": r.name, "expected": r.expected, "got": r.got, "ok": r.ok} for r in rows])
    return ExitStatus.OK if passed == len(rows) else ExitStatus.FALSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbtrust", description="Support, belief and trust: parse, check, prove, search.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("parse", "show the syntax tree"), ("fmt", "print in normal form")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("formula")
        sp.add_argument("--f", action="store_true", help="read a flat F formula ([], <>, O(./.))")
        if name == "fmt":
            sp.add_argument("--desugar", action="store_true", help="expand T[c](g)")

    sp = sub.add_parser("validate", help="check a model file")
    sp.add_argument("model")
    sp.add_argument("--close-belief", action="store_true", help="close belief transitively first")

    sp = sub.add_parser("mc", help="model check a formula")
    sp.add_argument("--model", required=True)
    sp.add_argument("--state", help="state to check (default: every state)")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--close-belief", action="store_true")

    sp = sub.add_parser("prove", help="check a proof script")
    sp.add_argument("script")
    sp.add_argument("--allow-extra", action="append", metavar="NAME[=SCHEMA]",
                    help="admit an extra axiom schema (CM is built in)")
    sp.add_argument("--no-library", action="store_true", help="do not preload the bundled lemmas")

    sp = sub.add_parser("translate", help="translate a flat F formula")
    sp.add_argument("--from-f", required=True, metavar="FORMULA")

    sp = sub.add_parser("search", help="bounded model search")
    sp.add_argument("--goal", action="append", required=True)
    sp.add_argument("--negate", action="store_true", help="look for a model where the goals are false")
    sp.add_argument("--max-blocks", type=int, default=1)
    sp.add_argument("--max-states", type=int, default=3, help="states per block (at most 4)")
    sp.add_argument("--atoms", help="comma-separated atoms (default: those of the goals)")
    sp.add_argument("--cap", type=int, default=2_000_000)

    sub.add_parser("demo", help="replay the bundled fixtures")
    return p


COMMANDS = {
    "parse": cmd_parse, "fmt": cmd_fmt, "validate": cmd_validate, "mc": cmd_mc, "prove": cmd_prove,
    "translate": cmd_translate, "search": cmd_search, "demo": cmd_demo,
}


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitStatus.OK if exc.code == 0 else ExitStatus.INPUT_ERROR
    rep = Report(out, args.json)
    try:
        return int(COMMANDS[args.command](args, rep, err))
    except (InputError, ParseError, ModelError, ScriptError, OSError) as exc:
        msg = str(exc)
        print(f"error: {msg}", file=err)
        if args.json:
            rep.diag(msg)
            rep.finish("error")
        return ExitStatus.INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
