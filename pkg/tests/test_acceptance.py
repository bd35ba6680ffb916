"""Acceptance suite: one test (or parametrized group) per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
one PASS/FAIL line per criterion.
"""
import math
import random
import time
from itertools import product

import pytest

from sbtrust.aqvist import PrefModel, cutdown, eval_f, extend, load_battery, translate
from sbtrust.checker import LabelPlan, evaluate, label
from sbtrust.formula import Not, parse
from sbtrust.generate import chain_model, instantiate, random_formula, random_model
from sbtrust.model import TrustModel, check_limitedness, load, validate
from sbtrust.proofkit import (
    AXIOMS, EXTRA_SCHEMATA, ProofLine, bundled_scripts, check_proof, load_registry,
)
from sbtrust.search import SearchBounds, find_countermodel, find_model, limited_relations
from sbtrust.cli import fixture_path

pytestmark = pytest.mark.acceptance

C1 = pytest.mark.criterion(1, "example5 fixture reproduction")
C2 = pytest.mark.criterion(2, "soundness fuzz")
C3 = pytest.mark.criterion(3, "block uniformity")
C4 = pytest.mark.criterion(4, "proof fixtures accepted, corrupted copies rejected")
C5 = pytest.mark.criterion(5, "non-theorems witnessed")
C6 = pytest.mark.criterion(6, "limitedness oracle equivalence")
C7 = pytest.mark.criterion(7, "flat F transfer through extend and cutdown")
C8 = pytest.mark.criterion(8, "labelling oracle equivalence and quadratic stage-1 work")


# -- 1 ---------------------------------------------------------------------------------------

EXAMPLE5 = [
    ("s", "d ~> !g", True),
    ("s", "d ~> r", True),
    ("s", "(d & r) ~> !g", False),
    ("v", "B(d & r)", True),
    ("v", "T[d](!g)", True),
    ("v", "T[d](r)", True),
    ("v", "T[d & r](!g)", False),
]


@C1
def test_example5_reproduction():
    start = time.perf_counter()
    m = validate(load(fixture_path("example5.json")))
    got = [(s, text, evaluate(m, s, parse(text))) for s, text, _ in EXAMPLE5]
    elapsed = time.perf_counter() - start
    assert got == EXAMPLE5
    print(f"example5 checks in {elapsed * 1000:.1f} ms")
    assert elapsed < 1.0, elapsed


# -- 2 and 3 ---------------------------------------------------------------------------------

SOUNDNESS_SCHEMAS = ["ID", "ST", "SH", "LL+", "KB", "DB", "4B", "AND", "CUT", "OR"]
N_MODELS = 500
N_INSTANCES = 100


@pytest.fixture(scope="module")
def fuzz():
    """Checks every schema instance on every model; also records block-uniformity violations."""
    start = time.perf_counter()
    rng = random.Random(4)
    library = load_registry()
    schemas = {name: AXIOMS["LLP" if name == "LL+" else name] for name in SOUNDNESS_SCHEMAS[:7]}
    schemas.update({name: library[name].conclusion for name in SOUNDNESS_SCHEMAS[7:]})
    models = [random_model(rng, max_blocks=3, max_states=4) for _ in range(N_MODELS)]
    plans = [(name, LabelPlan(instantiate(rng, schemas[name]))) for name in SOUNDNESS_SCHEMAS
             for _ in range(N_INSTANCES)]
    failures = []
    checked = 0
    for m in models:
        full = (1 << len(m.states)) - 1
        for name, plan in plans:
            if plan.run(m)[plan.formula] != full:
                failures.append((name, plan.formula, m))
            checked += 1
    elapsed = time.perf_counter() - start

    # uniformity: the same models, the schema instances plus one random formula per model
    sampled = [plan for _, plan in plans]
    uniform_violations = []
    for m in models:
        extra = LabelPlan(random_formula(rng, depth=4))
        for plan in sampled + [extra]:
            masks = plan.run(m)
            for sup in plan.supports:
                for block, bm in zip(m.blocks, m.block_mask):
                    if masks[sup] & bm not in (0, bm):
                        uniform_violations.append((sup, block, m))
    return {"failures": failures, "checked": checked, "elapsed": elapsed, "uniform": uniform_violations,
            "models": models}


@C2
def test_soundness_fuzz(fuzz):
    assert fuzz["checked"] == N_MODELS * N_INSTANCES * len(SOUNDNESS_SCHEMAS)
    print(f"{fuzz['checked']} instance checks in {fuzz['elapsed']:.1f} s")
    assert fuzz["failures"] == []
    assert fuzz["elapsed"] < 60, fuzz["elapsed"]


@C2
def test_fuzz_models_are_varied(fuzz):
    models = fuzz["models"]
    assert all(len(m.blocks) <= 3 and all(len(b) <= 4 for b in m.blocks) for m in models)
    assert {len(m.blocks) for m in models} == {1, 2, 3}
    assert all(set(m.valuation) == {"p", "q", "r", "s"} for m in models)


@C3
def test_block_uniformity(fuzz):
    assert fuzz["uniform"] == []


# -- 4 ---------------------------------------------------------------------------------------

PROOFS = ["AND", "CUT", "OR", "Kbox", "COK", "Nec", "Dstar", "Necessitation", "Example4", "REC"]
SCRIPTS = {s.name: s for s in bundled_scripts()}


@pytest.fixture(scope="module")
def registry():
    return load_registry(EXTRA_SCHEMATA)


def _extra(name):
    return EXTRA_SCHEMATA if name == "REC" else None


@C4
@pytest.mark.parametrize("name", PROOFS)
def test_proof_fixture_accepted(registry, name):
    result = check_proof(SCRIPTS[name], registry, _extra(name))
    assert result.accepted, result.diagnostic


@C4
def test_rec_needs_cm(registry):
    result = check_proof(SCRIPTS["REC"], registry)
    assert not result.accepted


@C4
@pytest.mark.parametrize("name", PROOFS)
def test_corrupted_proof_rejected_at_that_line(registry, name):
    script = SCRIPTS[name]
    for i, line in enumerate(script.lines):
        broken = script.with_line(i, ProofLine(line.id, Not(line.formula), line.justification, line.lineno))
        result = check_proof(broken, registry, _extra(name))
        assert not result.accepted
        assert result.failed_line == line.id, (line.id, result.diagnostic)


# -- 5 ---------------------------------------------------------------------------------------

COUNTERMODEL_GOALS = {
    "CM": "(p ~> q) & (p ~> r) -> (p & q ~> r)",
    "contraposition": "(p ~> q) -> (!q ~> !p)",
    "support modus ponens": "p & (p ~> q) -> q",
}
EXHAUSTED_GOALS = {
    "ID": ["p ~> p", "p & q ~> p & q", "!p | q ~> !p | q"],
    "ST": ["(p ~> bot) -> !p", "(p & !q ~> bot) -> !(p & !q)"],
}


@C5
@pytest.mark.parametrize("name", sorted(COUNTERMODEL_GOALS))
def test_countermodel_found(name):
    f = parse(COUNTERMODEL_GOALS[name])
    result = find_countermodel(f)
    assert result.found
    assert len(result.model.blocks) == 1 and len(result.model.states) <= 3
    assert evaluate(result.model, result.state, f) is False


@C5
@pytest.mark.parametrize("name", sorted(EXHAUSTED_GOALS))
def test_no_countermodel_within_bounds(name):
    for text in EXHAUSTED_GOALS[name]:
        result = find_model([(parse(text), False)], SearchBounds())
        assert result.verdict == "exhausted", text
        assert result.candidates > 0


# -- 6 ---------------------------------------------------------------------------------------


def _brute_limited(k, mask):
    """Every nonempty subset has a maximal element; subsets and relations as bitmasks."""
    above = [0] * k  # above[b]: states a with a >= b
    below = [0] * k  # below[a]: states b with a >= b
    for a in range(k):
        for b in range(k):
            if mask >> (a * k + b) & 1:
                above[b] |= 1 << a
                below[a] |= 1 << b
    for sub in range(1, 1 << k):
        if not any(sub >> s & 1 and not (above[s] & sub & ~below[s]) for s in range(k)):
            return False
    return True


@C6
def test_limitedness_oracle_equivalence():
    start = time.perf_counter()
    checked = 0
    for k in range(1, 5):
        names = [str(i) for i in range(k)]
        pairs = [(names[a], names[b]) for a in range(k) for b in range(k)]
        for mask in range(1 << (k * k)):
            chosen = [p for j, p in enumerate(pairs) if mask >> j & 1]
            fast = check_limitedness(names, chosen)
            assert (fast is None) == _brute_limited(k, mask), (k, chosen)
            if fast is not None:
                # the witness itself has no maximal element
                sub = sum(1 << int(s) for s in fast)
                assert not any(sub >> s & 1 and _max_in(k, mask, sub, s) for s in range(k))
            checked += 1
    elapsed = time.perf_counter() - start
    print(f"{checked} relations in {elapsed:.1f} s")
    assert checked == 2 + 16 + 512 + 65536
    assert elapsed < 30, elapsed


def _max_in(k, mask, sub, s):
    return all(not (sub >> v & 1) or not (mask >> (v * k + s) & 1) or (mask >> (s * k + v) & 1)
               for v in range(k))


# -- 7 ---------------------------------------------------------------------------------------

ATOMS = ("p", "q")


@pytest.fixture(scope="module")
def battery():
    return [(tag, f, translate(f)) for tag, f in load_battery()]


def _valuations(states):
    n = len(states)
    for bits in range(1 << (n * len(ATOMS))):
        yield {a: [states[k] for k in range(n) if bits >> (j * n + k) & 1] for j, a in enumerate(ATOMS)}


def _local_pairs(states, k, mask, offset=0):
    return [(states[offset + a], states[offset + b]) for a in range(k) for b in range(k) if mask >> (a * k + b) & 1]


def _partitions(n):
    """Set partitions of range(n) as restricted growth strings."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))
    yield from grow([0], 0)


@C7
def test_transfer_through_extend(battery):
    models = mismatches = 0
    for n in range(1, 4):
        states = [f"w{k}" for k in range(n)]
        for mask in limited_relations(n):
            for val in _valuations(states):
                pm = PrefModel.build(states, _local_pairs(states, n, mask), val)
                tm = extend(pm)
                models += 1
                for tag, f, g in battery:
                    for s in states:
                        if eval_f(pm, s, f) != evaluate(tm, s, g):
                            mismatches += 1
    assert models == 2 * 4 + 16 * 16 + 496 * 64
    assert mismatches == 0


@C7
def test_transfer_through_cutdown(battery):
    models = mismatches = 0
    for n in range(1, 4):
        states = [f"w{k}" for k in range(n)]
        for labels in _partitions(n):
            blocks = [[s for s, b in zip(states, labels) if b == i] for i in range(max(labels) + 1)]
            for masks in product(*(limited_relations(len(b)) for b in blocks)):
                prefs = [_local_pairs(b, len(b), mk) for b, mk in zip(blocks, masks)]
                for val in _valuations(states):
                    tm = validate(TrustModel.build(states, blocks, prefs, [(s, s) for s in states], val))
                    models += 1
                    for i, block in enumerate(blocks):
                        pm = cutdown(tm, i)
                        for tag, f, g in battery:
                            for s in block:
                                if eval_f(pm, s, f) != evaluate(tm, s, g):
                                    mismatches += 1
    # partitions x limited relations per block x valuations, for 1, 2 and 3 states
    assert models == 2 * 4 + (16 + 2 * 2) * 16 + (496 + 3 * 16 * 2 + 2 * 2 * 2) * 64
    assert mismatches == 0


# -- 8 ---------------------------------------------------------------------------------------


@C8
def test_label_agrees_with_eval_on_random_pairs():
    rng = random.Random(8)
    disagreements = 0
    for _ in range(200):
        m = random_model(rng)
        f = random_formula(rng, depth=4)
        lab = label(m, f)
        disagreements += sum(lab.holds(f, s) != evaluate(m, s, f) for s in m.states)
    assert disagreements == 0


CHAIN_SIZES = (4, 8, 16, 32)


@C8
def test_stage1_work_is_quadratic_in_block_size():
    f = parse("(p ~> p) & (!p | p ~> p) & B(p ~> bot)")
    work = [label(chain_model(n), f).stats.comparisons for n in CHAIN_SIZES]
    xs = [math.log(n) for n in CHAIN_SIZES]
    ys = [math.log(w) for w in work]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    print(f"stage-1 comparisons {dict(zip(CHAIN_SIZES, work))}, exponent {slope:.3f}")
    assert slope <= 2.3
