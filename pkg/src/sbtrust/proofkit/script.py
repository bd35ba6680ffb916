"""Proof scripts and their line-oriented text format.

::

    # comment
    proof CUT
    hyp H: (phi ~> psi) & (phi & psi ~> chi)
    1: (phi ~> psi) & (phi & psi ~> chi)      ; HYP H
    2: (phi & psi ~> chi) -> (phi ~> (psi -> chi)) ; AXIOM SH
    ...
    qed (phi ~> psi) & (phi & psi ~> chi) -> (phi ~> chi)

Justifications: ``AXIOM name``, ``HYP name``, ``PREMISE name``,
``PL [i,j,...]``, ``MP i,j``, ``NB i``, ``RCK i with psi=<prop>, n=<int>``,
``S5F i``, ``DT name i`` and ``LEMMA name [i,j,...]``.
``premise`` declarations stand for theorems and turn the script into a
derived rule.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..formula import Formula, ParseError, desugar, is_prop, parse, render
from .schemas import METAVARS


class ScriptError(ValueError):
    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Justification:
    kind: str  # AXIOM HYP PREMISE PL MP NB RCK S5F DT LEMMA
    refs: Tuple[str, ...] = ()
    name: Optional[str] = None
    psi: Optional[Formula] = None
    n: Optional[int] = None

    def __str__(self):
        refs = ",".join(self.refs)
        if self.kind in ("AXIOM", "HYP", "PREMISE"):
            return f"{self.kind} {self.name}"
        if self.kind == "RCK":
            return f"RCK {refs} with psi={render(self.psi)}, n={self.n}"
        if self.kind == "DT":
            return f"DT {self.name} {refs}"
        if self.kind == "LEMMA":
            return f"LEMMA {self.name}" + (f" {refs}" if refs else "")
        return f"{self.kind} {refs}".rstrip()


@dataclass(frozen=True)
class ProofLine:
    id: str
    formula: Formula
    justification: Justification
    lineno: int = 0

    def __str__(self):
        return f"{self.id}: {render(self.formula)} ; {self.justification}"


@dataclass
class ProofScript:
    name: str
    hypotheses: Dict[str, Formula] = field(default_factory=dict)
    premises: Dict[str, Formula] = field(default_factory=dict)
    lines: List[ProofLine] = field(default_factory=list)
    conclusion: Optional[Formula] = None

    def render(self) -> str:
        out = [f"proof {self.name}"]
        out += [f"premise {k}: {render(v)}" for k, v in self.premises.items()]
        out += [f"hyp {k}: {render(v)}" for k, v in self.hypotheses.items()]
        out += [str(line) for line in self.lines]
        if self.conclusion is not None:
            out.append(f"qed {render(self.conclusion)}")
        return "\n".join(out) + "\n"

    def with_line(self, index: int, line: Optional[ProofLine]) -> "ProofScript":
        """Copy with line ``index`` replaced (or dropped when ``line`` is None)."""
        lines = list(self.lines)
        if line is None:
            del lines[index]
        else:
            lines[index] = line
        return replace(self, lines=lines, hypotheses=dict(self.hypotheses), premises=dict(self.premises))


_ID = r"[A-Za-z0-9_]+"
_DECL = re.compile(rf"^(hyp|premise)\s+({_ID})\s*:\s*(.+)$")
_LINE = re.compile(rf"^({_ID})\s*:\s*([^;]+);\s*(.+)$")
_REFS = re.compile(rf"^{_ID}(\s*,\s*{_ID})*$")
_RCK = re.compile(rf"^RCK\s+({_ID})\s+with\s+psi\s*=\s*(.+?)\s*,\s*n\s*=\s*(\d+)$")


def _formula(text: str, lineno: int) -> Formula:
    try:
        return desugar(parse(text, metavars=METAVARS))
    except ParseError as exc:
        raise ScriptError(f"bad formula {text.strip()!r}: {exc}", lineno) from None


def _refs(text: str, lineno: int) -> Tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    if not _REFS.match(text):
        raise ScriptError(f"bad line references {text!r}", lineno)
    return tuple(r.strip() for r in text.split(","))


def parse_justification(text: str, lineno: int = 0) -> Justification:
    text = " ".join(text.split())
    m = _RCK.match(text)
    if m:
        psi = _formula(m.group(2), lineno)
        if not is_prop(psi):
            raise ScriptError("RCK psi must be propositional", lineno)
        n = int(m.group(3))
        return Justification("RCK", (m.group(1),), psi=psi, n=n)
    head, _, rest = text.partition(" ")
    head = head.upper()
    if head in ("AXIOM", "HYP", "PREMISE"):
        if not re.fullmatch(r"[A-Za-z0-9_+]+", rest):
            raise ScriptError(f"{head} needs a name", lineno)
        return Justification(head, name=rest)
    if head in ("PL", "MP", "NB", "S5F"):
        refs = _refs(rest, lineno)
        arity = {"MP": 2, "NB": 1, "S5F": 1}.get(head)
        if arity is not None and len(refs) != arity:
            raise ScriptError(f"{head} takes {arity} line reference(s)", lineno)
        return Justification(head, refs)
    if head == "DT":
        parts = rest.replace(",", " ").split()
        if len(parts) != 2:
            raise ScriptError("DT takes a hypothesis name and a line reference", lineno)
        return Justification("DT", (parts[1],), name=parts[0])
    if head == "LEMMA":
        name, _, refs = rest.partition(" ")
        if not name:
            raise ScriptError("LEMMA needs a name", lineno)
        return Justification("LEMMA", _refs(refs, lineno), name=name)
    raise ScriptError(f"unknown justification {text!r}", lineno)


def parse_script(text: str, name: str = "proof") -> ProofScript:
    script = ProofScript(name=name)
    seen_ids = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("proof ") or line == "proof":
            script.name = line[5:].strip() or name
            continue
        if line.startswith("qed ") or line == "qed":
            script.conclusion = _formula(line[3:], lineno)
            continue
        m = _DECL.match(line)
        if m:
            kind, key, body = m.groups()
            table = script.hypotheses if kind == "hyp" else script.premises
            if key in script.hypotheses or key in script.premises:
                raise ScriptError(f"{key} declared twice", lineno)
            table[key] = _formula(body, lineno)
            continue
        m = _LINE.match(line)
        if not m:
            raise ScriptError(f"cannot read {line!r}", lineno)
        ident, body, just = m.groups()
        if ident in seen_ids:
            raise ScriptError(f"duplicate line id {ident}", lineno)
        seen_ids.add(ident)
        script.lines.append(ProofLine(ident, _formula(body, lineno), parse_justification(just, lineno), lineno))
    return script


def load_script(path) -> ProofScript:
    path = Path(path)
    return parse_script(path.read_text(encoding="utf-8"), name=path.stem)
