import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanostab.chase import (
    ChaseContradiction,
    ScriptError,
    StoreSource,
    WeylSource,
    check_trace,
    load_bearing_inputs,
    parse_script,
    replay,
)
from fanostab.resources import Resources, facts_dir, load_store

SCRIPTS = ["g6_section", "g6_cover", "g8_section", "spinor_sections", "spinor_8fold"]


@pytest.fixture(scope="module")
def res():
    return Resources()


def _script(res, name):
    return parse_script(res.script_path(name).read_text(), name)


@pytest.mark.parametrize("name", SCRIPTS)
def test_shipped_scripts_prove_and_check(res, name):
    result, report = res.chase(name)
    assert result.proved, result.report()
    assert report.ok, report.summary()
    assert not result.missing and not result.failures


@pytest.mark.parametrize("name", SCRIPTS)
def test_deleting_a_load_bearing_fact_gets_stuck(res, name):
    script = _script(res, name)
    sources = res.sources()
    result = replay(script, sources)
    used = {str(st.fact) for st in result.trace.steps if st.rule == "input"}
    bearing = load_bearing_inputs(script, sources)
    assert bearing and set(bearing) == used & set(result.inputs)
    for ref in bearing:
        stuck = replay(script, sources, mask=[ref])
        assert not stuck.proved
        assert ref in stuck.missing


def test_spinor_script_needs_the_curated_fact():
    store = load_store(facts_dir() / "spinor10.facts")
    script = parse_script(Resources().script_path("spinor_8fold").read_text(), "spinor_8fold")
    assert replay(script, [WeylSource(), StoreSource(store)]).proved
    cut = store.without_cell("S10", 1, 6, 4)
    result = replay(script, [WeylSource(), StoreSource(cut)])
    assert not result.proved
    assert result.missing == ["H1(Omega(S10,6,4)) = 0"]
    assert "missing fact: H1(Omega(S10,6,4)) = 0" in result.report()


def test_spinor_levels_all_concluded(res):
    result, _ = res.chase("spinor_sections")
    goals = {str(g) for g in result.trace.goals}
    for k in range(5, 10):
        assert f"H0(Omega(X{k},3,2)) = 0" in goals
        assert f"H1(Omega(X{k},2,1)) = 0" in goals


# ---------------------------------------------------------------- checker


@pytest.fixture(scope="module")
def good_trace(res):
    result, _ = res.chase("g8_section")
    return result.trace


def _tamper(trace, i, **changes):
    steps = list(trace.steps)
    steps[i] = dataclasses.replace(steps[i], **changes)
    return dataclasses.replace(trace, steps=steps)


def _first(trace, rule):
    return next(i for i, st in enumerate(trace.steps) if st.rule == rule)


def test_checker_accepts_untouched_trace(good_trace):
    assert check_trace(good_trace).ok


def test_checker_rejects_renamed_rule(good_trace):
    i = next(i for i, st in enumerate(good_trace.steps) if st.premises)
    assert not check_trace(_tamper(good_trace, i, rule="lefschetz")).ok


def test_checker_rejects_forward_premise(good_trace):
    i = next(i for i, st in enumerate(good_trace.steps) if st.premises)
    bad = _tamper(good_trace, i, premises=(len(good_trace.steps) - 1,) + tuple(good_trace.steps[i].premises[1:]))
    assert not check_trace(bad).ok


def test_checker_rejects_dropped_premise(good_trace):
    i = next(i for i, st in enumerate(good_trace.steps) if len(st.premises) >= 2 and st.rule != "input")
    bad = _tamper(good_trace, i, premises=good_trace.steps[i].premises[1:])
    assert not check_trace(bad).ok


def test_checker_rejects_changed_value(good_trace):
    i = _first(good_trace, "input")
    fact = good_trace.steps[i].fact
    assert not check_trace(_tamper(good_trace, i, fact=dataclasses.replace(fact, value=fact.value + 3)), Resources().sources()).ok


def test_checker_rejects_missing_sequence(good_trace):
    bad = dataclasses.replace(good_trace, sequences=good_trace.sequences[1:])
    assert not check_trace(bad).ok


def test_checker_rejects_unproved_goal(good_trace):
    bad = dataclasses.replace(good_trace, steps=good_trace.steps[:-1])
    report = check_trace(bad)
    assert not report.ok
    assert "goal" in report.summary()


# ---------------------------------------------------------------- engine


def test_wrong_input_value_is_a_contradiction():
    script = parse_script("space G grassmannian 1 4\ngoal H0(Omega(G,0,1)) = 0\nuse fact H0(Omega(G,0,1)) = 0\n", "bad")
    with pytest.raises(ChaseContradiction):
        replay(script, [WeylSource()])


def test_stuck_without_facts():
    script = parse_script("space A abstract 4 picard-one\nsection X in A degree 1\ngoal H0(Omega(X,1,0)) = 0\n"
                          "use ses conormal Omega(X,0,-1) OmegaR(A|X,1,0) Omega(X,1,0)\n", "lonely")
    result = replay(script, [WeylSource()])
    assert not result.proved
    assert result.open_goals == ["H0(Omega(X,1,0)) = 0"]


@pytest.mark.parametrize(
    "text,line",
    [
        ("space G grassmannian 1 4\nfrobnicate\n", 2),
        ("space G spinor 10\n", 1),
        ("space G grassmannian 1 4\nuse fact H0(Omega(G,0,1)) = x\n", 2),
        ("space G grassmannian 1 4\n\nuse ses restrict A B\n", 3),
        ("section X in Y\n", 1),
        ("use restrict G Y q 2\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ScriptError) as err:
        parse_script(text, "broken")
    assert err.value.lineno == line
    assert str(err.value).startswith(f"broken:{line}:")


def test_replay_is_deterministic(res):
    script = _script(res, "g6_cover")
    a = replay(script, res.sources()).trace.to_text()
    b = replay(script, res.sources()).trace.to_text()
    assert a == b


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_masking_is_monotone(res, data):
    name = data.draw(st.sampled_from(["g6_section", "g6_cover", "spinor_8fold"]))
    script = _script(res, name)
    sources = res.sources()
    result = replay(script, sources)
    bearing = load_bearing_inputs(script, sources)
    extra = data.draw(st.lists(st.sampled_from(result.inputs), unique=True))
    must = data.draw(st.sampled_from(bearing))
    assert not replay(script, sources, mask=[must, *extra]).proved
