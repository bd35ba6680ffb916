"""Replays the bundled fixtures and compares each outcome with its expected value."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List

from . import aqvist, search
from .checker import evaluate
from .cli import fixture_path
from .formula import parse, render
from .model import InvalidModel, from_json, validate
from .proofkit import EXTRA_SCHEMATA, bundled_scripts, check_library


@dataclass(frozen=True)
class Row:
    name: str
    expected: str
    got: str

    @property
    def ok(self) -> bool:
        return self.expected == self.got


EXAMPLE5 = [
    ("s", "d ~> !g", True),
    ("s", "d ~> r", True),
    ("s", "(d & r) ~> !g", False),
    ("v", "B(d & r)", True),
    ("v", "T[d](!g)", True),
    ("v", "T[d](r)", True),
    ("v", "T[d & r](!g)", False),
]

# (label, formula, expected verdict of find_countermodel at default bounds)
NON_THEOREMS = [
    ("CM", "(d ~> !g) & (d ~> r) -> (d & r ~> !g)", "found"),
    ("contraposition", "(g ~> f) -> (!f ~> !g)", "found"),
    ("support modus ponens", "d & (d ~> f) -> f", "found"),
    ("REC", "(p ~> q) & (q ~> p) -> ((p ~> r) <-> (q ~> r))", "found"),
    ("ID", "p ~> p", "exhausted"),
    ("ST", "(p ~> bot) -> !p", "exhausted"),
]

TRANSLATIONS = [
    ("O(g / d)", "d ~> g"),
    ("<>p", "!(p ~> bot)"),
    ("[](p -> p)", "!(p -> p) ~> bot"),
]


# scripts that rely on the extra CM schema
NEEDS_CM = ("REC",)


def _verdict(result) -> str:
    return "accepted" if result.accepted else "rejected"


def _tv(b: bool) -> str:
    return "true" if b else "false"


def _load(name: str):
    return json.loads(fixture_path(name).read_text(encoding="utf-8"))


def run_demo() -> List[Row]:
    rows = []
    m = validate(_load("example5.json"))
    for state, text, want in EXAMPLE5:
        rows.append(Row(f"example5 {state} |= {text}", _tv(want), _tv(evaluate(m, state, parse(text)))))

    pm = aqvist.cutdown(m, 0)
    obl = aqvist.parse_f("O(!g / d)")
    rows.append(Row("example5 block 0 |= O(!g / d) everywhere", "true",
                    _tv(all(aqvist.eval_f(pm, s, obl) for s in pm.states))))
    for text, want in TRANSLATIONS:
        rows.append(Row(f"translate {text}", want, render(aqvist.translate(aqvist.parse_f(text)))))

    try:
        validate(from_json(_load("cycle3.json")))
        got = "valid"
    except InvalidModel as exc:
        got = ",".join(sorted({v.kind for v in exc.violations}))
    rows.append(Row("cycle3.json", "limitedness", got))

    scripts = bundled_scripts()
    plain = check_library([s for s in scripts if s.name not in NEEDS_CM])
    with_cm = check_library(scripts, EXTRA_SCHEMATA)
    for name in sorted(plain):
        rows.append(Row(f"proof {name}", "accepted", _verdict(plain[name])))
    for name in NEEDS_CM:
        rows.append(Row(f"proof {name} (admitting CM)", "accepted", _verdict(with_cm[name])))

    for label, text, want in NON_THEOREMS:
        result = search.find_countermodel(parse(text))
        rows.append(Row(f"countermodel {label}", want, result.verdict))
    return rows
