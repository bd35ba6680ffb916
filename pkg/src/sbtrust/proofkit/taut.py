"""Propositional tautology checking at the level of the boolean skeleton."""
from __future__ import annotations

from ..formula import And, Atom, Bot, Formula, Iff, Imp, Meta, Not, Or, desugar, skeletonize, subformulas

MAX_ATOMS = 20


class TooManyAtoms(ValueError):
    pass


def _columns(k: int):
    """Bit-parallel truth-table columns: row r assigns atom j the value of bit j of r."""
    rows = 1 << k
    cols = []
    for j in range(k):
        period = 1 << (j + 1)
        unit = ((1 << (1 << j)) - 1) << (1 << j)
        while period < rows:
            unit |= unit << period
            period <<= 1
        cols.append(unit)
    return cols, (1 << rows) - 1


def is_tautology(f: Formula) -> bool:
    """Truth-table check of a formula whose leaves are atoms, ``bot`` and propositional letters."""
    leaves = []
    for g in subformulas(f):
        if isinstance(g, (Atom, Meta)) and g not in leaves:
            leaves.append(g)
    if len(leaves) > MAX_ATOMS:
        raise TooManyAtoms(f"{len(leaves)} distinct atoms exceed the limit of {MAX_ATOMS}")
    cols, full = _columns(len(leaves))
    env = dict(zip(leaves, cols))

    def go(g):
        if isinstance(g, Bot):
            return 0
        if isinstance(g, (Atom, Meta)):
            return env[g]
        if isinstance(g, Not):
            return full & ~go(g.arg)
        a, b = go(g.left), go(g.right)
        if isinstance(g, And):
            return a & b
        if isinstance(g, Or):
            return a | b
        if isinstance(g, Imp):
            return (full & ~a) | b
        if isinstance(g, Iff):
            return full & ~(a ^ b)
        raise TypeError(f"unexpected node {g!r}")

    return go(f) == full


def taut_skeleton(f: Formula) -> bool:
    """True iff the boolean skeleton of ``f`` is a classical tautology."""
    return is_tautology(skeletonize(desugar(f)).skeleton)
