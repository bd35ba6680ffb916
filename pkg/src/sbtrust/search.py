"""Bounded model search.

Candidates are enumerated in a fixed canonical order, so the same query
always returns the same witness:

1. block shapes: nondecreasing tuples of block sizes, ordered by total number
   of states and then lexicographically; states are named ``s0, s1, ...`` and
   blocks take consecutive runs of them;
2. per block, preference relations as bitmasks over the block's pairs,
   ascending, keeping only the limited ones (blocks vary left to right,
   the last block fastest);
3. belief relations as bitmasks over all pairs, ascending, keeping only the
   serial and transitive ones (only the identity relation when no goal
   mentions ``B``, since belief cannot then affect the outcome);
4. valuations as bitmasks, ascending (atom ``j`` holds at state ``k`` iff
   bit ``j * n + k`` is set).

Two preference relations that pick the same maximal elements from every
subset of a block make exactly the same formulas true.  By default only the
smallest relation of each such class is tried; it precedes the others in the
order above, so the first witness and the exhaustion verdict are unchanged.
``SearchBounds(reduce=False)`` enumerates every relation.

Every finite model with at most the bounded number of blocks and states is
isomorphic to some candidate.  Exhausting the space therefore shows only that
no model exists *within the bounds*.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from .checker import LabelPlan, evaluate
from .formula import Belief, Formula, atoms, desugar, subformulas
from .model import TrustModel, ValidatedModel, check_limitedness, most_of, validate

MAX_STATES_PER_BLOCK = 4
MAX_BELIEF_STATES = 4


class CapExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"search stopped after {cap} candidates without a verdict")


@dataclass(frozen=True)
class SearchBounds:
    max_blocks: int = 1
    max_states_per_block: int = 3
    atoms: Optional[Tuple[str, ...]] = None  # None: the atoms of the goals
    cap: int = 2_000_000
    reduce: bool = True  # try one preference relation per maximal-element behaviour

    def __post_init__(self):
        if self.max_blocks < 1 or self.max_states_per_block < 1:
            raise ValueError("bounds must allow at least one block of one state")
        if self.max_states_per_block > MAX_STATES_PER_BLOCK:
            raise ValueError(f"at most {MAX_STATES_PER_BLOCK} states per block can be enumerated")
        if self.cap < 1:
            raise ValueError("cap must be positive")


@dataclass
class SearchResult:
    found: bool
    model: Optional[ValidatedModel] = None
    state: Optional[str] = None
    candidates: int = 0
    bounds: SearchBounds = field(default_factory=SearchBounds)

    @property
    def verdict(self) -> str:
        return "found" if self.found else "exhausted"

    def __bool__(self):
        return self.found


class _Frame:
    """Bitmask view of a candidate, shaped like :class:`ValidatedModel` for :meth:`LabelPlan.run`."""

    __slots__ = ("states", "block_mask", "above", "below", "succ_mask", "val_mask")


def shapes(bounds: SearchBounds) -> Iterator[Tuple[int, ...]]:
    """Block-size tuples in canonical order."""
    top = bounds.max_blocks * bounds.max_states_per_block
    for total in range(1, top + 1):
        found = []

        def grow(prefix, remaining, low):
            if remaining == 0:
                found.append(tuple(prefix))
                return
            if len(prefix) == bounds.max_blocks:
                return
            for size in range(low, min(remaining, bounds.max_states_per_block) + 1):
                grow(prefix + [size], remaining - size, size)

        grow([], total, 1)
        yield from sorted(found)


@lru_cache(maxsize=None)
def limited_relations(k: int) -> Tuple[int, ...]:
    """Limited preference relations on ``k`` local states, as ascending bitmasks (bit ``a*k+b``: a >= b)."""
    names = [str(i) for i in range(k)]
    pairs = [(a, b) for a in range(k) for b in range(k)]
    out = []
    for mask in range(1 << (k * k)):
        chosen = [(names[a], names[b]) for j, (a, b) in enumerate(pairs) if mask >> j & 1]
        if check_limitedness(names, chosen) is None:
            out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def preference_classes(k: int) -> Tuple[int, ...]:
    """The smallest limited relation of each class with the same maximal elements on every subset."""
    names = [str(i) for i in range(k)]
    seen = set()
    out = []
    for mask in limited_relations(k):
        pairs = frozenset((names[a], names[b]) for a in range(k) for b in range(k) if mask >> (a * k + b) & 1)
        key = tuple(most_of([names[i] for i in range(k) if sub >> i & 1], pairs) for sub in range(1 << k))
        if key not in seen:
            seen.add(key)
            out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def belief_relations(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Serial, transitive relations on ``n`` states as successor masks, in ascending bitmask order."""
    if n > MAX_BELIEF_STATES:
        raise ValueError(f"belief relations are enumerated only up to {MAX_BELIEF_STATES} states")
    out = []
    full = 1 << (n * n)
    row = (1 << n) - 1
    for mask in range(full):
        succ = tuple(mask >> (s * n) & row for s in range(n))
        if not all(succ):
            continue
        if all(succ[v] & ~succ[s] == 0 for s in range(n) for v in range(n) if succ[s] >> v & 1):
            out.append(succ)
    return tuple(out)


def _pref_masks(offset: int, k: int, local: int, above: List[int], below: List[int]) -> None:
    for a in range(k):
        for b in range(k):
            if local >> (a * k + b) & 1:
                above[offset + b] |= 1 << (offset + a)
                below[offset + a] |= 1 << (offset + b)


def _uses_belief(goals) -> bool:
    return any(isinstance(g, Belief) for f, _ in goals for g in subformulas(f))


def _witness(shape, prefs, succ, names_atoms, val_masks) -> TrustModel:
    n = sum(shape)
    states = [f"s{k}" for k in range(n)]
    blocks, pref, offset = [], [], 0
    for k, local in zip(shape, prefs):
        blocks.append(states[offset:offset + k])
        pref.append([(states[offset + a], states[offset + b])
                     for a in range(k) for b in range(k) if local >> (a * k + b) & 1])
        offset += k
    belief = [(states[s], states[v]) for s in range(n) for v in range(n) if succ[s] >> v & 1]
    valuation = {a: [states[k] for k in range(n) if mask >> k & 1] for a, mask in zip(names_atoms, val_masks)}
    return TrustModel.build(states, blocks, pref, belief, valuation)


def find_model(goals: Sequence[Tuple[Formula, bool]], bounds: Optional[SearchBounds] = None) -> SearchResult:
    """First candidate (in canonical order) with a state where each goal has its required truth value."""
    bounds = bounds or SearchBounds()
    goals = [(desugar(f), bool(want)) for f, want in goals]
    if not goals:
        raise ValueError("no goals given")
    if bounds.atoms is None:
        names = tuple(sorted(set().union(*(atoms(f) for f, _ in goals))))
    else:
        names = tuple(bounds.atoms)
    plans = [(LabelPlan(f), want) for f, want in goals]
    with_belief = _uses_belief(goals)
    count = 0
    for shape in shapes(bounds):
        n = sum(shape)
        full = (1 << n) - 1
        offsets = [sum(shape[:i]) for i in range(len(shape))]
        block_mask = [((1 << k) - 1) << off for k, off in zip(shape, offsets)]
        if with_belief:
            beliefs = belief_relations(n)
        else:
            beliefs = (tuple(1 << s for s in range(n)),)
        relations = preference_classes if bounds.reduce else limited_relations
        for prefs in product(*(relations(k) for k in shape)):
            above, below = [0] * n, [0] * n
            for k, off, local in zip(shape, offsets, prefs):
                _pref_masks(off, k, local, above, below)
            for succ in beliefs:
                frame = _Frame()
                frame.states = range(n)
                frame.block_mask = block_mask
                frame.above, frame.below, frame.succ_mask = above, below, succ
                for vals in range(1 << (n * len(names))):
                    count += 1
                    if count > bounds.cap:
                        raise CapExceeded(bounds.cap)
                    val_masks = [vals >> (j * n) & full for j in range(len(names))]
                    frame.val_mask = dict(zip(names, val_masks))
                    hit = full
                    for plan, want in plans:
                        mask = plan.run(frame)[plan.formula]
                        hit &= mask if want else ~mask
                        if not hit:
                            break
                    if hit:
                        k = (hit & -hit).bit_length() - 1
                        model = validate(_witness(shape, prefs, succ, names, val_masks))
                        state = model.states[k]
                        for f, want in goals:
                            if evaluate(model, state, f) != want:
                                raise AssertionError(f"search witness fails the goal {f} at {state}")
                        return SearchResult(True, model, state, count, bounds)
    return SearchResult(False, candidates=count, bounds=bounds)


def find_countermodel(f: Formula, bounds: Optional[SearchBounds] = None) -> SearchResult:
    """A model and state where ``f`` is false."""
    return find_model([(f, False)], bounds)


def find_satisfying(f: Formula, bounds: Optional[SearchBounds] = None) -> SearchResult:
    return find_model([(f, True)], bounds)


__all__ = [
    "CapExceeded", "SearchBounds", "SearchResult", "belief_relations", "find_countermodel",
    "find_model", "find_satisfying", "limited_relations", "preference_classes", "shapes",
]
