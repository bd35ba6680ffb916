"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from sbtrust.formula import BOT, And, Atom, Belief, Iff, Imp, Not, Or, Support, Trust

ATOMS = ["p", "q", "r", "d", "g", "GoodV_1"]

atoms = st.sampled_from(ATOMS).map(Atom)


def _binary(children):
    return st.tuples(st.sampled_from([And, Or, Imp, Iff]), children, children).map(lambda t: t[0](t[1], t[2]))


props = st.recursive(
    st.one_of(atoms, st.just(BOT)),
    lambda kids: st.one_of(kids.map(Not), _binary(kids)),
    max_leaves=8,
)

formulas = st.recursive(
    st.one_of(
        props,
        st.tuples(props, props).map(lambda t: Support(*t)),
        st.tuples(props, props).map(lambda t: Trust(*t)),
    ),
    lambda kids: st.one_of(kids.map(Not), kids.map(Belief), _binary(kids)),
    max_leaves=10,
)
