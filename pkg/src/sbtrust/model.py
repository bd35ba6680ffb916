"""Trust models: states partitioned into blocks, each block with its own
preference relation, plus a serial transitive belief relation and a valuation.

A preference pair ``(s, w)`` reads "s is at least as likely as w".
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .formula import And, Atom, Bot, Formula, Iff, Imp, Not, Or, atoms, is_prop

Pair = Tuple[str, str]


class ModelError(ValueError):
    """Raised for malformed model input or unknown states."""


class InvalidModel(ModelError):
    def __init__(self, violations: List["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class Violation:
    kind: str  # partition-gap, partition-overlap, empty-block, cross-block-pref, ...
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class TrustModel:
    """Raw (unchecked) model description."""

    states: Tuple[str, ...]
    blocks: Tuple[Tuple[str, ...], ...]
    pref: Tuple[FrozenSet[Pair], ...]
    belief: FrozenSet[Pair]
    valuation: Dict[str, FrozenSet[str]] = field(default_factory=dict, hash=False)

    @classmethod
    def build(cls, states, blocks, pref, belief, valuation) -> "TrustModel":
        blocks = tuple(tuple(b) for b in blocks)
        pref = list(pref) + [()] * (len(blocks) - len(pref))
        return cls(
            states=tuple(states),
            blocks=blocks,
            pref=tuple(frozenset(tuple(p) for p in ps) for ps in pref),
            belief=frozenset(tuple(p) for p in belief),
            valuation={a: frozenset(vs) for a, vs in valuation.items()},
        )

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "blocks": [list(b) for b in self.blocks],
            "pref": [
                {"block": i, "pairs": sorted([list(p) for p in ps], key=self._pair_key)}
                for i, ps in enumerate(self.pref)
            ],
            "belief": sorted([list(p) for p in self.belief], key=self._pair_key),
            "valuation": {a: sorted(vs, key=self._state_key) for a, vs in sorted(self.valuation.items())},
        }

    def _state_key(self, s):
        return self.states.index(s) if s in self.states else len(self.states)

    def _pair_key(self, p):
        return (self._state_key(p[0]), self._state_key(p[1]))


_MODEL_KEYS = {"states", "blocks", "pref", "belief", "valuation"}


def from_json(data: dict) -> TrustModel:
    """Read the JSON model description (already decoded)."""
    if not isinstance(data, dict):
        raise ModelError("model must be a JSON object")
    unknown = set(data) - _MODEL_KEYS
    if unknown:
        raise ModelError(f"unknown keys: {', '.join(sorted(unknown))}")
    missing = {"states", "blocks"} - set(data)
    if missing:
        raise ModelError(f"missing keys: {', '.join(sorted(missing))}")
    blocks = data["blocks"]
    pref: List[set] = [set() for _ in blocks]
    for entry in data.get("pref", []):
        if not isinstance(entry, dict) or set(entry) - {"block", "pairs"}:
            raise ModelError("each pref entry must be {\"block\": int, \"pairs\": [[s, w], ...]}")
        i = entry.get("block")
        if not isinstance(i, int) or not 0 <= i < len(blocks):
            raise ModelError(f"pref entry refers to unknown block {i!r}")
        pref[i].update(_pairs(entry.get("pairs", [])))
    return TrustModel.build(
        states=[_name(s) for s in data["states"]],
        blocks=[[_name(s) for s in b] for b in blocks],
        pref=pref,
        belief=_pairs(data.get("belief", [])),
        valuation={_name(a): [_name(s) for s in vs] for a, vs in data.get("valuation", {}).items()},
    )


def _name(x) -> str:
    if not isinstance(x, str) or not x:
        raise ModelError(f"expected a nonempty string, got {x!r}")
    return x


def _pairs(raw) -> set:
    out = set()
    for p in raw:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise ModelError(f"expected a pair, got {p!r}")
        out.add((_name(p[0]), _name(p[1])))
    return out


def load(path) -> TrustModel:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Limitedness
# ---------------------------------------------------------------------------


def check_limitedness(block: Sequence[str], pref: Iterable[Pair]) -> Optional[FrozenSet[str]]:
    """Return None if every nonempty subset of ``block`` has a maximal element,
    otherwise a subset without one.

    A subset lacks a maximal element exactly when the strict-domination graph
    (``y -> x`` iff ``y >= x`` and not ``x >= y``) has a cycle inside it, so the
    witness returned is the vertex set of such a cycle.
    """
    rel = set(pref)
    succ: Dict[str, List[str]] = {s: [] for s in block}
    for y, x in rel:
        if y in succ and x in succ and (x, y) not in rel:
            succ[y].append(x)
    white, grey, black = 0, 1, 2
    colour = {s: white for s in block}
    for root in block:
        if colour[root] != white:
            continue
        path = [root]
        iters = [iter(succ[root])]
        colour[root] = grey
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                colour[path.pop()] = black
                iters.pop()
            elif colour[nxt] == grey:
                return frozenset(path[path.index(nxt):])
            elif colour[nxt] == white:
                colour[nxt] = grey
                path.append(nxt)
                iters.append(iter(succ[nxt]))
    return None


def most_of(xs: Iterable[str], pref: FrozenSet[Pair]) -> FrozenSet[str]:
    """Maximal elements: s in X such that every v in X with v >= s has s >= v."""
    xs = list(xs)
    return frozenset(s for s in xs if all((v, s) not in pref or (s, v) in pref for v in xs))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def transitive_closure(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    closure = set(pairs)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            return frozenset(closure)
        closure |= extra


def violations(m: TrustModel) -> List[Violation]:
    """Every way in which ``m`` fails to be a Trust model."""
    out: List[Violation] = []
    declared = set(m.states)
    seen = set()
    for s in m.states:
        if s in seen:
            out.append(Violation("duplicate-state", f"state {s} declared twice", (s,)))
        seen.add(s)

    owner: Dict[str, int] = {}
    for i, block in enumerate(m.blocks):
        if not block:
            out.append(Violation("empty-block", f"block {i} is empty", (i,)))
        for s in block:
            if s not in declared:
                out.append(Violation("unknown-state", f"block {i} lists undeclared state {s}", (s,)))
            elif s in owner and owner[s] != i:
                out.append(Violation("partition-overlap", f"state {s} is in blocks {owner[s]} and {i}", (s, owner[s], i)))
            else:
                owner[s] = i
    for s in m.states:
        if s not in owner:
            out.append(Violation("partition-gap", f"state {s} is in no block", (s,)))

    if len(m.pref) != len(m.blocks):
        out.append(Violation("pref-shape", "one preference relation per block is required"))
    for i, pairs in enumerate(m.pref):
        members = set(m.blocks[i]) if i < len(m.blocks) else set()
        for s, w in sorted(pairs):
            for x in (s, w):
                if x not in declared:
                    out.append(Violation("unknown-state", f"preference pair ({s},{w}) uses undeclared state {x}", (x,)))
            if not (s in members and w in members):
                out.append(Violation("cross-block-pref", f"pair ({s},{w}) is not inside block {i}", (i, s, w)))
        if i < len(m.blocks):
            inside = {(s, w) for s, w in pairs if s in members and w in members}
            cycle = check_limitedness(m.blocks[i], inside)
            if cycle is not None:
                ordered = tuple(s for s in m.blocks[i] if s in cycle)
                out.append(Violation(
                    "limitedness",
                    f"block {i}: subset {{{', '.join(ordered)}}} has no maximal element",
                    ordered,
                ))

    belief = m.belief
    for s, v in sorted(belief):
        for x in (s, v):
            if x not in declared:
                out.append(Violation("unknown-state", f"belief pair ({s},{v}) uses undeclared state {x}", (x,)))
    succ: Dict[str, set] = {s: set() for s in m.states}
    for s, v in belief:
        succ.setdefault(s, set()).add(v)
    for s in m.states:
        if not succ.get(s):
            out.append(Violation("not-serial", f"state {s} has no belief successor", (s,)))
    for s in m.states:
        for v in sorted(succ.get(s, ()), key=m._state_key):
            for w in sorted(succ.get(v, ()), key=m._state_key):
                if w not in succ[s]:
                    out.append(Violation("not-transitive", f"({s},{v}) and ({v},{w}) but not ({s},{w})", (s, v, w)))

    for atom, vs in sorted(m.valuation.items()):
        for x in sorted(vs):
            if x not in declared:
                out.append(Violation("unknown-state", f"valuation of {atom} uses undeclared state {x}", (x,)))
    return out


class ValidatedModel:
    """A model certified to satisfy every frame condition.  Immutable.

    Construct via :func:`validate`.  States are also indexed ``0..n-1`` in
    declaration order; the bitmask views (``block_mask``, ``above``, ...)
    back the fast labelling algorithm.
    """

    __slots__ = ("raw", "index", "block_index", "block_mask", "above", "below", "succ_mask", "val_mask")

    def __init__(self, raw: TrustModel):
        self.raw = raw
        self.index = {s: k for k, s in enumerate(raw.states)}
        self.block_index = {}
        self.block_mask = []
        for i, block in enumerate(raw.blocks):
            mask = 0
            for s in block:
                self.block_index[s] = i
                mask |= 1 << self.index[s]
            self.block_mask.append(mask)
        n = len(raw.states)
        self.above = [0] * n  # bit v set in above[s] iff v >= s
        self.below = [0] * n  # bit v set in below[s] iff s >= v
        for pairs in raw.pref:
            for s, w in pairs:
                a, b = self.index[s], self.index[w]
                self.above[b] |= 1 << a
                self.below[a] |= 1 << b
        self.succ_mask = [0] * n
        for s, v in raw.belief:
            self.succ_mask[self.index[s]] |= 1 << self.index[v]
        self.val_mask = {}
        for atom, vs in raw.valuation.items():
            mask = 0
            for s in vs:
                mask |= 1 << self.index[s]
            self.val_mask[atom] = mask

    def __setattr__(self, name, value):
        if hasattr(self, name):
            raise AttributeError("ValidatedModel is immutable")
        object.__setattr__(self, name, value)

    # convenience views
    @property
    def states(self) -> Tuple[str, ...]:
        return self.raw.states

    @property
    def blocks(self) -> Tuple[Tuple[str, ...], ...]:
        return self.raw.blocks

    @property
    def pref(self) -> Tuple[FrozenSet[Pair], ...]:
        return self.raw.pref

    @property
    def belief(self) -> FrozenSet[Pair]:
        return self.raw.belief

    @property
    def valuation(self) -> Dict[str, FrozenSet[str]]:
        return self.raw.valuation

    def successors(self, s: str) -> FrozenSet[str]:
        return frozenset(v for t, v in self.raw.belief if t == s)

    def to_json(self) -> dict:
        return self.raw.to_json()

    def states_of(self, mask: int) -> FrozenSet[str]:
        return frozenset(s for k, s in enumerate(self.raw.states) if mask >> k & 1)

    def mask_of(self, states: Iterable[str]) -> int:
        mask = 0
        for s in states:
            mask |= 1 << self.index[s]
        return mask

    def __eq__(self, other):
        return isinstance(other, ValidatedModel) and self.raw == other.raw and self.raw.valuation == other.raw.valuation

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        return f"ValidatedModel({json.dumps(self.to_json())})"


def validate(m, close_belief: bool = False) -> ValidatedModel:
    """Check every frame condition; raise :class:`InvalidModel` listing all violations.

    ``m`` may be a :class:`TrustModel` or its JSON dict.  With
    ``close_belief`` the belief relation is transitively closed first;
    seriality is never repaired.
    """
    if isinstance(m, dict):
        m = from_json(m)
    if close_belief:
        m = TrustModel(m.states, m.blocks, m.pref, transitive_closure(m.belief), m.valuation)
    problems = violations(m)
    if problems:
        raise InvalidModel(problems)
    return ValidatedModel(m)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def block_of(m: ValidatedModel, s: str) -> int:
    try:
        return m.block_index[s]
    except KeyError:
        raise ModelError(f"unknown state {s!r}") from None


def holds_prop(m: ValidatedModel, s: str, phi: Formula) -> bool:
    """Propositional truth at a state; atoms missing from the valuation are false."""
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        return s in m.raw.valuation.get(phi.name, ())
    if isinstance(phi, Not):
        return not holds_prop(m, s, phi.arg)
    if isinstance(phi, And):
        return holds_prop(m, s, phi.left) and holds_prop(m, s, phi.right)
    if isinstance(phi, Or):
        return holds_prop(m, s, phi.left) or holds_prop(m, s, phi.right)
    if isinstance(phi, Imp):
        return not holds_prop(m, s, phi.left) or holds_prop(m, s, phi.right)
    if isinstance(phi, Iff):
        return holds_prop(m, s, phi.left) == holds_prop(m, s, phi.right)
    raise TypeError(f"not a propositional formula: {phi!r}")


def extension(m: ValidatedModel, i: int, phi: Formula) -> FrozenSet[str]:
    """States of block ``i`` satisfying the propositional formula ``phi``."""
    if not is_prop(phi):
        raise TypeError("extension expects a propositional formula")
    return frozenset(s for s in m.raw.blocks[i] if holds_prop(m, s, phi))


def most(m: ValidatedModel, i: int, xs: Iterable[str]) -> FrozenSet[str]:
    """Maximal elements of ``xs`` (a subset of block ``i``) under that block's preference."""
    xs = frozenset(xs)
    stray = xs - set(m.raw.blocks[i])
    if stray:
        raise ModelError(f"states {sorted(stray)} are not in block {i}")
    return most_of(xs, m.raw.pref[i])


def unknown_atoms(m: ValidatedModel, f: Formula) -> set:
    return atoms(f) - set(m.raw.valuation)


__all__ = [
    "InvalidModel", "ModelError", "TrustModel", "ValidatedModel", "Violation",
    "block_of", "check_limitedness", "extension", "from_json", "load", "most",
    "most_of", "transitive_closure", "unknown_atoms", "validate", "violations",
]
