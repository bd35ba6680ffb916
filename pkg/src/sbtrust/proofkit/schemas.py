"""Axiom schemata and first-order matching of schematic letters."""
from __future__ import annotations

from typing import Dict, Optional

from ..formula import Formula, Meta, children, is_prop, parse

# phi, psi, chi, delta, pi range over propositional formulas; alpha, beta over all formulas
METAVARS = {"phi": "prop", "psi": "prop", "chi": "prop", "delta": "prop", "pi": "prop",
            "alpha": "any", "beta": "any"}

AXIOM_TEXT = {
    "ID": "phi ~> phi",
    "ST": "(phi ~> bot) -> !phi",
    "SH": "(psi & chi ~> phi) -> (psi ~> (chi -> phi))",
    "LLP": "(!(phi <-> psi) ~> bot) -> ((phi ~> chi) <-> (psi ~> chi))",
    "KB": "B(alpha -> beta) -> (B(alpha) -> B(beta))",
    "DB": "B(alpha) -> !B(!alpha)",
    "4B": "B(alpha) -> B(B(alpha))",
}

# schemata that are not part of the calculus but can be admitted explicitly
EXTRA_TEXT = {
    "CM": "(phi ~> psi) & (phi ~> chi) -> (phi & psi ~> chi)",
}

ALIASES = {"LL+": "LLP"}


def parse_schema(text: str) -> Formula:
    return parse(text, metavars=METAVARS)


AXIOMS: Dict[str, Formula] = {name: parse_schema(t) for name, t in AXIOM_TEXT.items()}
EXTRA_SCHEMATA: Dict[str, Formula] = {name: parse_schema(t) for name, t in EXTRA_TEXT.items()}


class UnknownAxiom(KeyError):
    pass


Bindings = Dict[Meta, Formula]


def match(pattern: Formula, target: Formula, bindings: Optional[Bindings] = None) -> Optional[Bindings]:
    """Extend ``bindings`` so that ``pattern`` instantiated equals ``target``.

    Propositional letters bind only propositional formulas; ``bot`` and atoms
    in the pattern match only themselves.  Returns None on failure.
    """
    out = dict(bindings or {})
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Meta):
            if p.kind == "prop" and not is_prop(t):
                return None
            bound = out.get(p)
            if bound is None:
                out[p] = t
            elif bound != t:
                return None
            continue
        if type(p) is not type(t):
            return None
        pk, tk = children(p), children(t)
        if not pk:
            if p != t:
                return None
            continue
        stack.extend(zip(pk, tk))
    return out


def match_axiom(name: str, f: Formula, extra: Optional[Dict[str, Formula]] = None) -> Optional[Bindings]:
    """Bindings if ``f`` is an instance of the named schema, else None."""
    name = ALIASES.get(name, name)
    table = dict(AXIOMS)
    if extra:
        table.update(extra)
    if name not in table:
        raise UnknownAxiom(name)
    return match(table[name], f)
