import json
from pathlib import Path

import pytest

from sbtrust.aqvist import (
    Box, Diamond, NestedModalError, Obl, PrefModel, cutdown, eval_f, extend, is_flat, load_battery,
    parse_f, translate,
)
from sbtrust.checker import evaluate
from sbtrust.formula import Atom, ParseError, atoms, parse, render
from sbtrust.model import ModelError, validate

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "sbtrust" / "fixtures"


@pytest.fixture(scope="module")
def ex5():
    return validate(json.loads((FIXTURES / "example5.json").read_text()))


@pytest.fixture
def two_state():
    return PrefModel.build(["a", "b"], [("a", "b")], {"g": ["a", "b"], "f": ["a"]})


def test_translate_examples():
    assert translate(parse_f("O(g / d)")) == parse("d ~> g")
    assert translate(parse_f("<>p")) == parse("!(p ~> bot)")
    assert translate(parse_f("[](p -> p)")) == parse("!(p -> p) ~> bot")


def test_translate_is_homomorphic():
    f = parse_f("[]p & !O(q / p) -> (<>q <-> r)")
    assert translate(f) == parse("(!p ~> bot) & !(p ~> q) -> (!(q ~> bot) <-> r)")


def test_nested_modalities_rejected():
    for text in ["[][]p", "O(<>p / q)", "O(p / [](q))", "<>O(p / q)"]:
        with pytest.raises(NestedModalError):
            parse_f(text)
    with pytest.raises(NestedModalError):
        Box(Diamond(Atom("p")))


def test_f_syntax_excludes_support_and_belief():
    with pytest.raises(ParseError):
        parse_f("p ~> q")
    with pytest.raises(ParseError):
        parse_f("B(p)")


def test_render_round_trip():
    for _, f in load_battery():
        assert parse_f(render(f)) == f
    assert render(Box(parse("p | q"))) == "[](p | q)"
    assert render(Obl(parse("q"), parse("p & r"))) == "O(q / p & r)"


def test_o_is_still_an_atom_elsewhere():
    assert parse_f("O & p") == parse("O & p")


def test_eval_examples(ex5, two_state):
    pm = cutdown(ex5, 0)
    assert all(eval_f(pm, s, parse_f("O(!g / d)")) for s in pm.states)
    assert all(eval_f(pm, s, parse_f("[]top")) for s in pm.states)
    assert eval_f(two_state, "a", parse_f("O(f / g)"))
    assert not eval_f(two_state, "a", parse_f("O(!g / !f)"))


def test_unknown_state(two_state):
    with pytest.raises(ModelError):
        eval_f(two_state, "z", parse_f("p"))


def test_prefmodel_requires_limitedness():
    with pytest.raises(ModelError):
        PrefModel.build("abc", [("a", "b"), ("b", "c"), ("c", "a")])


def test_extend_examples(two_state):
    one = extend(PrefModel.build(["x"], []))
    assert one.belief == {("x", "x")}
    m = extend(two_state)
    assert len(m.blocks) == 1 and m.belief == {(s, v) for s in "ab" for v in "ab"}
    assert all(evaluate(m, s, translate(parse_f("O(f / g)"))) for s in "ab")


def test_cutdown_examples(ex5):
    pm = cutdown(ex5, 0)
    assert set(pm.states) == {"s", "w", "v"}
    assert pm.pref == {("s", "w"), ("w", "v")}
    single = validate({"states": ["a", "b"], "blocks": [["a"], ["b"]], "belief": [["a", "a"], ["b", "b"]],
                       "valuation": {"p": ["a", "b"]}})
    assert cutdown(single, 1) == PrefModel(("b",), frozenset(), {"p": frozenset({"b"})})


def test_round_trips(ex5):
    pm = cutdown(ex5, 0)
    assert cutdown(extend(pm), 0) == pm
    back = extend(pm)
    for _, f in load_battery():
        for s in pm.states:
            assert evaluate(back, s, translate(f)) == eval_f(pm, s, f)


def test_battery_is_flat_and_over_p_q():
    battery = load_battery()
    assert len(battery) == 62
    for tag, f in battery:
        assert is_flat(f)
        assert atoms(translate(f)) <= {"p", "q"}
    tags = {t for t, _ in battery}
    assert tags == {"K", "T", "COK", "Nec", "Ext", "ID", "SH", "Dstar", "base"}
