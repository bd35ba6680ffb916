"""Random formulas, models and schema instances for fuzzing and benchmarks."""
from __future__ import annotations

import random
from typing import Dict, Optional, Sequence

from .formula import (
    BOT, And, Atom, Belief, Formula, Iff, Imp, Meta, Not, Or, Support, Trust, metas, substitute,
)
from .model import TrustModel, ValidatedModel, check_limitedness, transitive_closure, validate

DEFAULT_ATOMS = ("p", "q", "r", "s")
_BINARY = (And, Or, Imp, Iff)


def random_prop(rng: random.Random, atoms: Sequence[str] = DEFAULT_ATOMS, depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return BOT if rng.random() < 0.05 else Atom(rng.choice(atoms))
    if rng.random() < 0.2:
        return Not(random_prop(rng, atoms, depth - 1))
    op = rng.choice(_BINARY)
    return op(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1))


def random_formula(rng: random.Random, atoms: Sequence[str] = DEFAULT_ATOMS, depth: int = 3,
                   trust: bool = True) -> Formula:
    """A general formula mixing support, belief and (optionally) trust."""
    if depth <= 0:
        return Atom(rng.choice(atoms))
    roll = rng.random()
    if roll < 0.15:
        return Atom(rng.choice(atoms))
    if roll < 0.35:
        return Support(random_prop(rng, atoms, 2), random_prop(rng, atoms, 2))
    if roll < 0.5:
        return Belief(random_formula(rng, atoms, depth - 1, trust))
    if roll < 0.55 and trust:
        return Trust(random_prop(rng, atoms, 1), random_prop(rng, atoms, 1))
    if roll < 0.65:
        return Not(random_formula(rng, atoms, depth - 1, trust))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, atoms, depth - 1, trust), random_formula(rng, atoms, depth - 1, trust))


def instantiate(rng: random.Random, schema: Formula, atoms: Sequence[str] = DEFAULT_ATOMS,
                depth: int = 2) -> Formula:
    """Replace every schematic letter by a random formula of the matching layer."""
    mapping: Dict[Formula, Formula] = {}
    for m in sorted(metas(schema), key=lambda x: x.name):
        if m.kind == "prop":
            mapping[m] = random_prop(rng, atoms, depth)
        else:
            mapping[m] = random_formula(rng, atoms, depth, trust=False)
    return substitute(schema, mapping)


def random_preference(rng: random.Random, block: Sequence[str], density: Optional[float] = None):
    """A random limited preference relation on ``block`` (arbitrary relation, resampled until limited)."""
    pairs = [(a, b) for a in block for b in block]
    while True:
        d = rng.random() if density is None else density
        chosen = [p for p in pairs if rng.random() < d]
        if check_limitedness(block, chosen) is None:
            return chosen


def random_belief(rng: random.Random, states: Sequence[str]):
    """Serial transitive relation: one or more random successors per state, then closed."""
    pairs = set()
    for s in states:
        for v in rng.sample(list(states), rng.randint(1, len(states))):
            pairs.add((s, v))
    return transitive_closure(pairs)


def random_model(rng: random.Random, max_blocks: int = 3, max_states: int = 4,
                 atoms: Sequence[str] = DEFAULT_ATOMS) -> ValidatedModel:
    """Valid model with up to ``max_blocks`` blocks of 1..``max_states`` states each."""
    sizes = [rng.randint(1, max_states) for _ in range(rng.randint(1, max_blocks))]
    states, blocks = [], []
    for size in sizes:
        block = [f"s{len(states) + k}" for k in range(size)]
        states += block
        blocks.append(block)
    pref = [random_preference(rng, b) for b in blocks]
    valuation = {a: [s for s in states if rng.random() < 0.5] for a in atoms}
    raw = TrustModel.build(states, blocks, pref, random_belief(rng, states), valuation)
    return validate(raw)


def chain_model(n: int, atom: str = "p") -> ValidatedModel:
    """One block ``c0 >= c1 >= ... `` (strict chain); ``atom`` true everywhere; belief reflexive."""
    states = [f"c{k}" for k in range(n)]
    pref = [(states[k], states[k + 1]) for k in range(n - 1)]
    raw = TrustModel.build(states, [states], [pref], [(s, s) for s in states], {atom: states})
    return validate(raw)


__all__ = [
    "DEFAULT_ATOMS", "chain_model", "instantiate", "random_belief", "random_formula",
    "random_model", "random_preference", "random_prop",
]
