import pytest

from sbtrust.checker import evaluate
from sbtrust.formula import parse
from sbtrust.model import validate
from sbtrust.search import (
    CapExceeded, SearchBounds, belief_relations, find_countermodel, find_model, limited_relations,
    preference_classes, shapes,
)

CM = "((d ~> !g) & (d ~> r)) -> ((d & r) ~> !g)"
CONTRA = "(g ~> f) -> ((!f) ~> (!g))"
SUPPORT_MP = "d & (d ~> f) -> f"


def _self_checks(result, goals):
    assert result.found
    validate(result.model.to_json())
    for f, want in goals:
        assert evaluate(result.model, result.state, parse(f)) is want


def test_cm_failure_is_found():
    goals = [(CM, False)]
    r = find_model([(parse(f), v) for f, v in goals], SearchBounds(atoms=("d", "r", "g")))
    _self_checks(r, goals)
    # the witness has the shape of the hand-built example: a strict 3-chain
    assert len(r.model.states) == 3


def test_identity_support_is_never_refuted():
    for bounds in (SearchBounds(), SearchBounds(max_blocks=2, max_states_per_block=2)):
        assert not find_model([(parse("p ~> p"), False)], bounds).found


def test_contraposition_two_states():
    goals = [("(g ~> f) & !((!f) ~> (!g))", True)]
    r = find_model([(parse(goals[0][0]), True)], SearchBounds(max_states_per_block=2))
    _self_checks(r, goals)


@pytest.mark.parametrize("text", [SUPPORT_MP, CONTRA])
def test_countermodels(text):
    r = find_countermodel(parse(text), SearchBounds(max_states_per_block=2))
    _self_checks(r, [(text, False)])


def test_st_instance_exhausts():
    r = find_countermodel(parse("(p & q ~> bot) -> !(p & q)"))
    assert not r.found and r.verdict == "exhausted"


def test_belief_axioms_exhaust_and_five_fails():
    assert not find_countermodel(parse("B(p) -> B(B(p))"), SearchBounds(max_states_per_block=2)).found
    assert find_countermodel(parse("!B(p) -> B(!B(p))")).found


def test_determinism():
    a = find_countermodel(parse(CM))
    b = find_countermodel(parse(CM))
    assert a.model == b.model and a.state == b.state and a.candidates == b.candidates


@pytest.mark.parametrize("text", [CM, CONTRA, SUPPORT_MP, "(p ~> q) & (q ~> p) -> ((p ~> r) <-> (q ~> r))",
                                  "B(p ~> q) -> (p ~> q)", "B(q ~> p) -> B(p)"])
def test_reduction_keeps_first_witness(text):
    states = 2 if "B(" in text else 3
    reduced = find_countermodel(parse(text), SearchBounds(max_states_per_block=states))
    full = find_countermodel(parse(text), SearchBounds(max_states_per_block=states, reduce=False))
    assert reduced.found == full.found
    if full.found:
        assert reduced.model == full.model and reduced.state == full.state
        assert reduced.candidates <= full.candidates


def test_cap():
    with pytest.raises(CapExceeded):
        find_countermodel(parse("p ~> p"), SearchBounds(cap=10))


def test_bounds_validation():
    with pytest.raises(ValueError):
        SearchBounds(max_states_per_block=5)
    with pytest.raises(ValueError):
        SearchBounds(max_blocks=0)


def test_shape_order():
    assert list(shapes(SearchBounds(max_blocks=2, max_states_per_block=2))) == [
        (1,), (1, 1), (2,), (1, 2), (2, 2)]


def test_enumeration_tables():
    assert [len(limited_relations(k)) for k in (1, 2, 3)] == [2, 16, 496]
    assert [len(belief_relations(n)) for n in (1, 2, 3)] == [1, 6, 68]
    assert [len(preference_classes(k)) for k in (1, 2, 3)] == [1, 3, 25]
    assert list(limited_relations(3)) == sorted(limited_relations(3))
    # every class representative is the smallest of its class
    assert preference_classes(3)[0] == 0


def test_belief_relations_are_serial_and_transitive():
    for n in (1, 2, 3):
        for succ in belief_relations(n):
            assert all(succ)
            for s in range(n):
                for v in range(n):
                    if succ[s] >> v & 1:
                        assert succ[v] & ~succ[s] == 0


def test_multi_block_search():
    r = find_countermodel(parse("(p ~> q) -> B(p ~> q)"), SearchBounds(max_blocks=2, max_states_per_block=2))
    assert r.found and len(r.model.blocks) == 2
