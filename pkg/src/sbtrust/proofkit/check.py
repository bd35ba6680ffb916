"""Line-by-line checking of Hilbert-style derivations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from ..formula import (
    And, Belief, Bot, Formula, Imp, Not, Support, conj, is_prop, render,
)
from .schemas import ALIASES, AXIOMS, UnknownAxiom, match
from .script import ProofLine, ProofScript
from .taut import TooManyAtoms, taut_skeleton


@dataclass(frozen=True)
class Lemma:
    """A verified schema.  With premises it is a derived rule."""

    name: str
    conclusion: Formula
    premises: Tuple[Formula, ...] = ()


@dataclass(frozen=True)
class LineVerdict:
    id: str
    ok: bool
    hypset: FrozenSet[str] = frozenset()
    message: str = ""


@dataclass
class ProofResult:
    name: str
    accepted: bool
    verdicts: List[LineVerdict] = field(default_factory=list)
    failed_line: Optional[str] = None
    diagnostic: str = ""
    conclusion: Optional[Formula] = None
    hypset: FrozenSet[str] = frozenset()

    def __bool__(self):
        return self.accepted


class Rejected(Exception):
    pass


def _split_right(f: Formula, n: int) -> Optional[List[Formula]]:
    """Split a right-nested conjunction into exactly ``n`` conjuncts."""
    parts = []
    for _ in range(n - 1):
        if not isinstance(f, And):
            return None
        parts.append(f.left)
        f = f.right
    parts.append(f)
    return parts


def _is_literal(f: Formula) -> bool:
    return isinstance(f, Support) or (isinstance(f, Not) and isinstance(f.arg, Support))


def _support_literals(f: Formula) -> Optional[List[Formula]]:
    """Conjuncts of a right-nested conjunction, provided each is a (possibly negated) support formula."""
    parts = []
    while isinstance(f, And):
        parts.append(f.left)
        f = f.right
    parts.append(f)
    return parts if all(_is_literal(p) for p in parts) else None


class _Checker:
    def __init__(self, script: ProofScript, registry: Mapping[str, Lemma], extra: Mapping[str, Formula]):
        self.script = script
        self.registry = registry
        self.axioms = {**AXIOMS, **extra}
        self.formulas: Dict[str, Formula] = {}
        self.hypsets: Dict[str, FrozenSet[str]] = {}

    def cited(self, ref: str) -> Formula:
        if ref not in self.formulas:
            raise Rejected(f"reference to {ref}, which is not an earlier line")
        return self.formulas[ref]

    def theorem(self, ref: str, rule: str) -> Formula:
        f = self.cited(ref)
        if self.hypsets[ref]:
            hyps = ", ".join(sorted(self.hypsets[ref]))
            raise Rejected(f"{rule} applies only to hypothesis-free lines; line {ref} depends on {hyps}")
        return f

    def union(self, refs) -> FrozenSet[str]:
        out = frozenset()
        for r in refs:
            out |= self.hypsets[r]
        return out

    def check(self, line: ProofLine) -> FrozenSet[str]:
        j, f = line.justification, line.formula
        kind = j.kind
        if kind == "AXIOM":
            name = ALIASES.get(j.name, j.name)
            if name not in self.axioms:
                raise Rejected(f"unknown axiom {j.name}")
            if match(self.axioms[name], f) is None:
                raise Rejected(f"not an instance of axiom {j.name}")
            return frozenset()
        if kind == "HYP":
            if j.name not in self.script.hypotheses:
                raise Rejected(f"undeclared hypothesis {j.name}")
            if self.script.hypotheses[j.name] != f:
                raise Rejected(f"formula differs from hypothesis {j.name}")
            return frozenset([j.name])
        if kind == "PREMISE":
            if j.name not in self.script.premises:
                raise Rejected(f"undeclared premise {j.name}")
            if self.script.premises[j.name] != f:
                raise Rejected(f"formula differs from premise {j.name}")
            return frozenset()
        if kind == "PL":
            premises = [self.cited(r) for r in j.refs]
            claim = Imp(conj(premises), f) if premises else f
            try:
                ok = taut_skeleton(claim)
            except TooManyAtoms as exc:
                raise Rejected(str(exc)) from None
            if not ok:
                cited = ",".join(j.refs) or "no lines"
                raise Rejected(f"not a propositional consequence of {cited}")
            return self.union(j.refs)
        if kind == "MP":
            a, b = (self.cited(r) for r in j.refs)
            if not (b == Imp(a, f) or a == Imp(b, f)):
                raise Rejected("modus ponens needs lines A and A -> (this line)")
            return self.union(j.refs)
        if kind == "NB":
            g = self.theorem(j.refs[0], "NB")
            if f != Belief(g):
                raise Rejected(f"NB of line {j.refs[0]} yields B({render(g)})")
            return frozenset()
        if kind == "RCK":
            return self.check_rck(line)
        if kind == "S5F":
            g = self.theorem(j.refs[0], "S5F")
            if not isinstance(g, Imp):
                raise Rejected("S5F premise must be an implication")
            lits = _support_literals(g.left)
            if lits is None:
                raise Rejected("S5F antecedent must be a right-nested conjunction of (negated) support formulas")
            if not is_prop(g.right):
                raise Rejected("S5F consequent must be propositional")
            expected = Imp(g.left, Support(Not(g.right), Bot()))
            if f != expected:
                raise Rejected(f"S5F yields {render(expected)}")
            return frozenset()
        if kind == "DT":
            if j.name not in self.script.hypotheses:
                raise Rejected(f"undeclared hypothesis {j.name}")
            g = self.cited(j.refs[0])
            expected = Imp(self.script.hypotheses[j.name], g)
            if f != expected:
                raise Rejected(f"discharging {j.name} yields {render(expected)}")
            return self.hypsets[j.refs[0]] - {j.name}
        if kind == "LEMMA":
            lemma = self.registry.get(j.name)
            if lemma is None:
                raise Rejected(f"unknown lemma {j.name}")
            if len(j.refs) != len(lemma.premises):
                raise Rejected(f"lemma {j.name} takes {len(lemma.premises)} premise line(s)")
            bindings = {}
            for ref, pattern in zip(j.refs, lemma.premises):
                bindings = match(pattern, self.theorem(ref, f"lemma {j.name}"), bindings)
                if bindings is None:
                    raise Rejected(f"line {ref} does not match premise of lemma {j.name}")
            if match(lemma.conclusion, f, bindings) is None:
                raise Rejected(f"not an instance of lemma {j.name}")
            return frozenset()
        raise Rejected(f"unknown justification {kind}")

    def check_rck(self, line: ProofLine) -> FrozenSet[str]:
        j, f = line.justification, line.formula
        if j.n is None or j.n < 1:
            raise Rejected("RCK needs n >= 1")
        g = self.theorem(j.refs[0], "RCK")
        if not isinstance(g, Imp):
            raise Rejected("RCK premise must be an implication")
        parts = _split_right(g.left, j.n)
        if parts is None:
            raise Rejected(f"RCK premise antecedent is not a right-nested conjunction of {j.n} formulas")
        if not all(is_prop(p) for p in parts + [g.right]):
            raise Rejected("RCK premise must be propositional")
        expected = Imp(conj([Support(j.psi, p) for p in parts]), Support(j.psi, g.right))
        if f != expected:
            raise Rejected(f"RCK yields {render(expected)}")
        return frozenset()


def check_proof(script: ProofScript, registry: Optional[Mapping[str, Lemma]] = None,
                extra_axioms: Optional[Mapping[str, Formula]] = None) -> ProofResult:
    """Verify every line; the first failure rejects the script."""
    checker = _Checker(script, registry or {}, extra_axioms or {})
    result = ProofResult(script.name, accepted=False)
    for line in script.lines:
        try:
            hyps = checker.check(line)
        except (Rejected, UnknownAxiom) as exc:
            result.verdicts.append(LineVerdict(line.id, False, message=str(exc)))
            result.failed_line = line.id
            result.diagnostic = str(exc)
            return result
        checker.formulas[line.id] = line.formula
        checker.hypsets[line.id] = hyps
        result.verdicts.append(LineVerdict(line.id, True, hyps))
    if not script.lines:
        result.diagnostic = "empty derivation"
        return result
    last = script.lines[-1]
    if script.conclusion is not None and script.conclusion != last.formula:
        result.failed_line = last.id
        result.diagnostic = "stated conclusion differs from the last line"
        return result
    result.accepted = True
    result.conclusion = last.formula
    result.hypset = checker.hypsets[last.id]
    return result


def as_lemma(script: ProofScript, result: ProofResult) -> Lemma:
    """Registry entry for an accepted, hypothesis-free script."""
    if not result.accepted:
        raise ValueError(f"{script.name} was not accepted")
    if result.hypset:
        raise ValueError(f"{script.name} still depends on {', '.join(sorted(result.hypset))}")
    return Lemma(script.name, result.conclusion, tuple(script.premises.values()))
