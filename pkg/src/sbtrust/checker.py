"""Model checking.

:func:`evaluate` follows the truth conditions directly, one state at a time.
:func:`label` is the two-stage procedure: every distinct support subformula is
decided once per block, then the boolean/belief skeleton is labelled bottom-up
over the belief relation.  The two are kept independent so that each can serve
as the oracle for the other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List

from .formula import (
    And, Atom, Belief, Bot, Formula, Iff, Imp, Not, Or, Support, Trust, children, desugar,
    support_subformulas,
)
from .model import ModelError, ValidatedModel, block_of, extension, most


def evaluate(m: ValidatedModel, s: str, f: Formula) -> bool:
    """Truth of ``f`` at state ``s`` (trust abbreviations are expanded)."""
    if s not in m.index:
        raise ModelError(f"unknown state {s!r}")
    return _eval(m, s, f)


def _eval(m: ValidatedModel, s: str, f: Formula) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return s in m.valuation.get(f.name, ())
    if isinstance(f, Not):
        return not _eval(m, s, f.arg)
    if isinstance(f, And):
        return _eval(m, s, f.left) and _eval(m, s, f.right)
    if isinstance(f, Or):
        return _eval(m, s, f.left) or _eval(m, s, f.right)
    if isinstance(f, Imp):
        return not _eval(m, s, f.left) or _eval(m, s, f.right)
    if isinstance(f, Iff):
        return _eval(m, s, f.left) == _eval(m, s, f.right)
    if isinstance(f, Support):
        i = block_of(m, s)
        return most(m, i, extension(m, i, f.lhs)) <= extension(m, i, f.rhs)
    if isinstance(f, Belief):
        return all(_eval(m, v, f.arg) for v in m.successors(s))
    if isinstance(f, Trust):
        return _eval(m, s, And(Belief(f.cond), Belief(Support(f.cond, f.goal))))
    raise TypeError(f"cannot evaluate {f!r}")


# the public name mirrors the usual vocabulary; ``evaluate`` avoids shadowing the builtin
eval = evaluate  # noqa: A001


def is_trusted(m: ValidatedModel, s: str, cond: Formula, goal: Formula) -> bool:
    """Whether ``T[cond](goal)`` holds at ``s``."""
    return evaluate(m, s, Trust(cond, goal))


# ---------------------------------------------------------------------------
# Labelling
# ---------------------------------------------------------------------------


@dataclass
class LabelStats:
    support_formulas: int = 0  # k: distinct support subformulas
    other_operators: int = 0  # k': atoms, connectives and belief nodes outside the supports
    comparisons: int = 0  # preference lookups made while computing maximal sets
    steps: int = 0  # stage-2 nodes labelled


@dataclass
class Labeling:
    """Truth sets of every subformula of the labelled formula."""

    model: ValidatedModel
    masks: Dict[Formula, int]
    stats: LabelStats = field(default_factory=LabelStats)

    def mask(self, f: Formula) -> int:
        hit = self.masks.get(f)
        return hit if hit is not None else self.masks[desugar(f)]

    def states(self, f: Formula) -> FrozenSet[str]:
        return self.model.states_of(self.mask(f))

    def holds(self, f: Formula, s: str) -> bool:
        return bool(self.mask(f) >> self.model.index[s] & 1)

    def __getitem__(self, f: Formula) -> FrozenSet[str]:
        return self.states(f)

    def __contains__(self, f: Formula) -> bool:
        return f in self.masks or desugar(f) in self.masks


def _most_mask(m, xs: int, stats: LabelStats) -> int:
    """Maximal elements of the state set ``xs`` (all within one block)."""
    out = 0
    members = [k for k in range(xs.bit_length()) if xs >> k & 1]
    for k in members:
        # v in X with v >= k must satisfy k >= v
        stats.comparisons += len(members)
        if not (m.above[k] & xs & ~m.below[k]):
            out |= 1 << k
    return out


def _post_order(f: Formula, seen: set, out: List[Formula], stop=()) -> None:
    """Distinct subformulas of ``f`` children first, skipping those in ``seen``."""
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if g in seen:
            continue
        if expanded or isinstance(g, stop):
            seen.add(g)
            out.append(g)
            continue
        stack.append((g, True))
        for k in reversed(children(g)):
            if k not in seen:
                stack.append((k, False))


class LabelPlan:
    """A formula compiled for repeated labelling.

    Stage 1 lists the support subformulas (and the propositional formulas
    under them); stage 2 the remaining boolean and belief nodes, children
    first.  :meth:`run` works on anything exposing the bitmask views of
    :class:`ValidatedModel` (``states``, ``block_mask``, ``above``,
    ``below``, ``succ_mask``, ``val_mask``).
    """

    def __init__(self, f: Formula):
        self.formula = desugar(f)
        self.supports = support_subformulas(self.formula)
        seen: set = set()
        self.stage1: List[Formula] = []
        for sup in self.supports:
            _post_order(sup, seen, self.stage1)
        self.stage2: List[Formula] = []
        _post_order(self.formula, seen, self.stage2, stop=(Support,))
        self.other_operators = sum(1 for g in self.stage2 if not isinstance(g, Bot))

    def run(self, m, stats: LabelStats = None) -> Dict[Formula, int]:
        stats = stats if stats is not None else LabelStats()
        stats.support_formulas = len(self.supports)
        stats.other_operators = self.other_operators
        full = (1 << len(m.states)) - 1
        masks: Dict[Formula, int] = {}
        for g in self.stage1:
            if isinstance(g, Support):
                lhs, rhs = masks[g.lhs], masks[g.rhs]
                out = 0
                for block in m.block_mask:
                    if not _most_mask(m, lhs & block, stats) & ~rhs:
                        out |= block
                masks[g] = out
            else:
                masks[g] = _boolean(m, g, masks, full)
        succ = m.succ_mask
        for g in self.stage2:
            stats.steps += 1
            if isinstance(g, Belief):
                inner = masks[g.arg]
                out = 0
                for k, reach in enumerate(succ):
                    if not reach & ~inner:
                        out |= 1 << k
                masks[g] = out
            else:
                masks[g] = _boolean(m, g, masks, full)
        return masks


def _boolean(m, g: Formula, masks: Dict[Formula, int], full: int) -> int:
    if isinstance(g, Bot):
        return 0
    if isinstance(g, Atom):
        return m.val_mask.get(g.name, 0)
    if isinstance(g, Not):
        return full & ~masks[g.arg]
    a, b = masks[g.left], masks[g.right]
    if isinstance(g, And):
        return a & b
    if isinstance(g, Or):
        return a | b
    if isinstance(g, Imp):
        return (full & ~a) | b
    if isinstance(g, Iff):
        return full & ~(a ^ b)
    raise TypeError(f"cannot label {g!r}")


def label(m: ValidatedModel, f: Formula) -> Labeling:
    """Label every subformula of ``f`` with the set of states where it holds."""
    plan = LabelPlan(f)
    stats = LabelStats()
    return Labeling(m, plan.run(m, stats), stats)


def label_mask(m: ValidatedModel, f: Formula) -> int:
    """Bitmask of states satisfying ``f``; bit ``k`` is ``m.states[k]``."""
    plan = LabelPlan(f)
    return plan.run(m)[plan.formula]


def valid_in(m: ValidatedModel, f: Formula) -> bool:
    """True iff ``f`` holds at every state of ``m``."""
    return label_mask(m, f) == (1 << len(m.states)) - 1
