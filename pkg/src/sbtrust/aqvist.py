"""The flat fragment of Åqvist's dyadic deontic system F.

Flat formulas are boolean combinations of propositional formulas and the
modalities ``[]phi``, ``<>phi`` and ``O(psi / phi)`` ("psi is obligatory given
phi"), whose operands are propositional.  They are interpreted over
preference models ``<S, >=, V>`` and translate into the support language::

    []phi       ->  !phi ~> bot
    <>phi       ->  !(phi ~> bot)
    O(psi/phi)  ->  phi ~> psi

:func:`extend` and :func:`cutdown` move between preference models and trust
models so that truth of flat formulas is preserved in both directions.
"""
from __future__ import annotations

import json
from importlib import resources
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Tuple

from .formula import (
    BOT, And, Atom, Binary, Bot, Formula, Iff, Imp, LayerError, Not, Or, Parser, Support,
    is_prop, render, transform,
)
from .model import (
    ModelError, TrustModel, ValidatedModel, check_limitedness, most_of, validate,
)


class NestedModalError(LayerError):
    """A modal operand is not propositional."""


def _check_flat(op: str, *operands: Formula):
    for f in operands:
        if not is_prop(f):
            raise NestedModalError(f"operand of {op} must be propositional: {render(f)}")


@dataclass(frozen=True, repr=False)
class Box(Formula):
    arg: Formula
    precedence = 6

    def __post_init__(self):
        _check_flat("[]", self.arg)

    def children(self):
        return (self.arg,)

    def rebuild(self, kids):
        return Box(*kids)

    def render_with(self, render, wrap):
        return "[]" + wrap(self.arg, _needs_unary_parens(self.arg))

    def __repr__(self):
        return f"Box({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Diamond(Formula):
    arg: Formula
    precedence = 6

    def __post_init__(self):
        _check_flat("<>", self.arg)

    def children(self):
        return (self.arg,)

    def rebuild(self, kids):
        return Diamond(*kids)

    def render_with(self, render, wrap):
        return "<>" + wrap(self.arg, _needs_unary_parens(self.arg))

    def __repr__(self):
        return f"Diamond({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Obl(Formula):
    """``O(goal / cond)``."""

    goal: Formula
    cond: Formula

    def __post_init__(self):
        _check_flat("O(../..)", self.goal, self.cond)

    def children(self):
        return (self.goal, self.cond)

    def rebuild(self, kids):
        return Obl(*kids)

    def render_with(self, render, wrap):
        return f"O({render(self.goal)} / {render(self.cond)})"

    def __repr__(self):
        return f"Obl({self.goal!r}, {self.cond!r})"


def _needs_unary_parens(f: Formula) -> bool:
    return isinstance(f, (Binary, Support))


class FParser(Parser):
    """Concrete syntax of flat F formulas: no ``~>``, ``B`` or ``T``."""

    def __init__(self, text: str, metavars=None):
        super().__init__(text, prop_only=True, metavars=metavars)

    def parse_prefix(self):
        t = self.tok
        if t.kind in ("[]", "<>"):
            self.advance()
            arg = self.parse_unary()
            return self._flat(Box if t.kind == "[]" else Diamond, t, arg)
        return super().parse_prefix()

    def parse_primary(self):
        t = self.tok
        if t.kind == "ident" and t.text == "O" and self.tokens[self.pos + 1].kind == "(":
            self.advance()
            self.expect("(")
            goal = self.parse_iff()
            self.expect("/")
            cond = self.parse_iff()
            self.expect(")")
            return self._flat(Obl, t, goal, cond)
        return super().parse_primary()

    def _flat(self, ctor, t, *args):
        try:
            return ctor(*args)
        except NestedModalError as exc:
            raise NestedModalError(exc.message, t.line, t.column) from None


def parse_f(text: str, metavars=None) -> Formula:
    return FParser(text, metavars=metavars).parse()


def is_flat(f: Formula) -> bool:
    """True iff ``f`` is built from propositional formulas and flat modalities only."""
    if is_prop(f) or isinstance(f, (Box, Diamond, Obl)):
        return True
    if isinstance(f, Not):
        return is_flat(f.arg)
    if isinstance(f, Binary):
        return is_flat(f.left) and is_flat(f.right)
    return False


def translate(f: Formula) -> Formula:
    """Image of a flat F formula in the support language."""
    if not is_flat(f):
        raise NestedModalError(f"not a flat F formula: {render(f)}")

    def step(g):
        if isinstance(g, Box):
            return Support(Not(g.arg), BOT)
        if isinstance(g, Diamond):
            return Not(Support(g.arg, BOT))
        if isinstance(g, Obl):
            return Support(g.cond, g.goal)
        return None

    return transform(f, step)


# ---------------------------------------------------------------------------
# Preference models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefModel:
    states: Tuple[str, ...]
    pref: FrozenSet[Tuple[str, str]]
    valuation: Dict[str, FrozenSet[str]] = field(default_factory=dict, hash=False)

    @classmethod
    def build(cls, states: Iterable[str], pref: Iterable, valuation=None) -> "PrefModel":
        """Check shape and limitedness, then freeze."""
        states = tuple(states)
        if not states:
            raise ModelError("a preference model needs at least one state")
        if len(set(states)) != len(states):
            raise ModelError("duplicate state names")
        pref = frozenset(tuple(p) for p in pref)
        known = set(states)
        for s, w in pref:
            if s not in known or w not in known:
                raise ModelError(f"preference pair ({s}, {w}) uses an undeclared state")
        valuation = {a: frozenset(vs) for a, vs in (valuation or {}).items()}
        for a, vs in valuation.items():
            if not vs <= known:
                raise ModelError(f"valuation of {a} uses undeclared states")
        stuck = check_limitedness(states, pref)
        if stuck is not None:
            raise ModelError(f"limitedness: subset {{{', '.join(sorted(stuck))}}} has no maximal element")
        return cls(states, pref, valuation)

    def to_json(self) -> dict:
        key = self.states.index
        return {
            "states": list(self.states),
            "pref": sorted([list(p) for p in self.pref], key=lambda p: (key(p[0]), key(p[1]))),
            "valuation": {a: sorted(vs, key=key) for a, vs in sorted(self.valuation.items())},
        }

    def __repr__(self):
        return f"PrefModel({json.dumps(self.to_json())})"


def _holds(pm: PrefModel, s: str, f: Formula) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return s in pm.valuation.get(f.name, ())
    if isinstance(f, Not):
        return not _holds(pm, s, f.arg)
    if isinstance(f, And):
        return _holds(pm, s, f.left) and _holds(pm, s, f.right)
    if isinstance(f, Or):
        return _holds(pm, s, f.left) or _holds(pm, s, f.right)
    if isinstance(f, Imp):
        return not _holds(pm, s, f.left) or _holds(pm, s, f.right)
    if isinstance(f, Iff):
        return _holds(pm, s, f.left) == _holds(pm, s, f.right)
    if isinstance(f, Box):
        return all(_holds(pm, v, f.arg) for v in pm.states)
    if isinstance(f, Diamond):
        return any(_holds(pm, v, f.arg) for v in pm.states)
    if isinstance(f, Obl):
        cond = [v for v in pm.states if _holds(pm, v, f.cond)]
        return all(_holds(pm, v, f.goal) for v in most_of(cond, pm.pref))
    raise NestedModalError(f"cannot evaluate {f!r} in a preference model")


def eval_f(pm: PrefModel, s: str, f: Formula) -> bool:
    """Truth of a flat F formula at ``s``.  The box quantifies over the whole model."""
    if s not in pm.states:
        raise ModelError(f"unknown state {s!r}")
    return _holds(pm, s, f)


def extend(pm: PrefModel) -> ValidatedModel:
    """Trust model with a single block and the total belief relation."""
    states = pm.states
    raw = TrustModel.build(
        states=states,
        blocks=[states],
        pref=[pm.pref],
        belief=[(s, v) for s in states for v in states],
        valuation=pm.valuation,
    )
    return validate(raw)


def cutdown(m: ValidatedModel, i: int) -> PrefModel:
    """Preference model of block ``i``: its states, its preference, the valuation restricted to it."""
    if not 0 <= i < len(m.blocks):
        raise ModelError(f"no block {i}")
    block = m.blocks[i]
    members = set(block)
    valuation = {a: frozenset(vs) & members for a, vs in m.valuation.items()}
    return PrefModel(tuple(block), m.pref[i], valuation)


def load_battery(path=None):
    """``(tag, formula)`` pairs of the flat battery fixture (the bundled one by default)."""
    if path is None:
        text = (resources.files("sbtrust") / "fixtures" / "f_battery.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tag, _, body = line.partition("\t")
            out.append((tag.strip(), parse_f(body)))
    return out


__all__ = [
    "Box", "Diamond", "FParser", "NestedModalError", "Obl", "PrefModel", "cutdown", "eval_f",
    "extend", "is_flat", "load_battery", "parse_f", "translate",
]
