from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgen.f2linalg import BitVec, dot_form
from twistgen.proofscripts import (
    THEOREMS,
    ConjugatorError,
    Context,
    Script,
    ScriptRangeError,
    builtin_script,
    builtin_text,
    find_conjugator,
    parse_script,
    run_script,
)
from twistgen.proofscripts.builtin import fitting
from twistgen.proofscripts.steps import AssertGeneration, DefineConjugator, ScriptSyntaxError
from twistgen.surface import GenusModel, MappingClassSpec, build_catalog
from twistgen.words import Environment, evaluate_mod2, format_word, parse_word


def test_every_theorem_round_trips_at_its_bound():
    for sid, t in THEOREMS.items():
        g = t.bound
        while not t.applies(g):
            g += 1
        script = builtin_script(sid, g)
        text = script.to_text()
        assert text == builtin_text(sid, g)
        assert Script(sid, script.model, parse_script(text)).to_text() == text


def test_closing_step_is_the_generation_claim():
    script = builtin_script("t9odd", 9)
    assert isinstance(script.steps[-1], AssertGeneration)
    assert script.steps[-1].reference == "omori"
    assert not any(isinstance(s, AssertGeneration) for s in builtin_script("t9odd", 9, closing=False).steps)


def test_range_errors():
    with pytest.raises(ScriptRangeError, match="t29 needs odd g >= 27; got g=25"):
        builtin_script("t29", 25)
    with pytest.raises(ScriptRangeError):
        builtin_script("t29", 28)
    with pytest.raises(ScriptRangeError):
        builtin_script("t4k2", 30, model=GenusModel(30, "rotation"))
    with pytest.raises(KeyError):
        builtin_script("t100", 30)


def test_fitting_scripts():
    assert fitting(GenusModel(9), commutators=False) == ["t9odd", "prop41"]
    assert "com4k2_10" in fitting(GenusModel(10, "reflection"))
    assert fitting(GenusModel(10, "rotation")) == ["t8even"]


@pytest.mark.parametrize("sid, g", [("t9odd", 9), ("t8even", 8), ("t4k3_7", 7), ("com4k3_7", 7)])
def test_small_scripts_pass_with_generation(sid, g):
    rep = run_script(builtin_script(sid, g))
    assert rep.passed, rep.to_text()
    assert not rep.skipped
    assert rep.steps[-1].kind == "AssertGeneration"


def test_generation_step_skipped_above_cap():
    rep = run_script(builtin_script("t9odd", 11), cap=9)
    assert rep.passed and rep.verdict == "pass"
    assert [s.kind for s in rep.skipped] == ["AssertGeneration"]
    assert "1 skipped" in rep.to_text()


def test_variant_notes():
    assert builtin_script("t29", 27).variants == ["g=27: G8, G9 end in D1"]
    assert builtin_script("t29", 29).variants == []


def test_signed_level_checks_reflection_steps():
    rep = run_script(builtin_script("prop41", 12), level="signed")
    assert rep.passed
    assert all(s.detail == "mod2+signed" for s in rep.steps)


def test_failed_step_reports_detail_and_later_steps_still_run():
    text = "assert_eq T == T^2\nassert_eq T^9 == 1\n"
    rep = run_script(Script("adhoc", GenusModel(9), parse_script(text)))
    assert [s.status for s in rep.steps] == ["fail", "pass"]
    assert "mod-2 images differ" in rep.failures[0].detail
    assert rep.verdict == "fail"


def test_evaluation_errors_become_failures():
    text = "assert_eq U3 == A1\nassert_eq $Q == 1\n"
    rep = run_script(Script("adhoc", GenusModel(9), parse_script(text)))
    assert [s.status for s in rep.steps] == ["fail", "fail"]


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("assert_eq T ==\n", 1),
        ("def M = T\ndef M = T^2\n", 2),
        ("\n# comment\nassert_img T : a1=>b1\n", 3),
        ("assert_gen [T] == nobody\n", 1),
        ("prove it\n", 1),
    ],
)
def test_syntax_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ScriptSyntaxError) as info:
        parse_script(text)
    assert info.value.lineno == lineno


def test_find_step_defines_a_conjugator():
    text = "find P : a1->b2\nassert_img $P : a1->b2\n"
    steps = parse_script(text)
    assert isinstance(steps[0], DefineConjugator)
    rep = run_script(Script("adhoc", GenusModel(9), steps))
    assert rep.passed
    assert rep.steps[0].detail.startswith("P = ")


def test_context_must_match_script():
    with pytest.raises(ValueError):
        run_script(builtin_script("t9odd", 9), Context.standard(GenusModel(11)))


# ---------------------------------------------------------------------------
# conjugator

MODEL = GenusModel(11, "reflection")
CAT = build_catalog(MODEL)
SPEC = MappingClassSpec.standard(MODEL)
CLASSES = sorted(set(CAT.classes.values()), key=lambda v: v.indices)
TWIST_NAMES = ["T", "T^-1", "A1", "A2", "B3", "C2", "D5", "E", "F4", "G7", "U3"]


def image(word, env=None):
    return evaluate_mod2(word, env or Environment(MODEL), CAT, SPEC)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CLASSES), st.sampled_from(CLASSES))
def test_conjugator_maps_single_pair(u, v):
    w = find_conjugator([(u, v)], CAT)
    assert image(w) @ u == v


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from(TWIST_NAMES), min_size=1, max_size=6),
    st.lists(st.sampled_from(CLASSES), min_size=1, max_size=3, unique=True),
)
def test_conjugator_realises_any_mapping_class_image(names, sources):
    # targets are images under a real product of twists, so a conjugator exists
    m = image(parse_word(" * ".join(names)))
    pairs = [(u, m @ u) for u in sources]
    w = find_conjugator(pairs, CAT)
    assert all(image(w) @ u == v for u, v in pairs)


def test_conjugator_word_at_g44():
    cat = build_catalog(GenusModel(44))
    w = find_conjugator([(cat["gm10"], cat["d33"]), (cat["f18"], cat["c2"])], cat)
    assert format_word(w) == "V[5,20] * V[6,19] * V[10,33] * V[11,12,13,44]"


def test_conjugator_uses_catalog_names():
    cat = build_catalog(GenusModel(9))
    w = find_conjugator([(cat["a1"], cat["b1"])], cat)
    # a1 and b1 meet once, so one twist about a1 + b1 = x1 + x3 = e suffices
    assert format_word(w) == "E"


def test_conjugator_rejects_inequivalent_pairs():
    g = 9
    with pytest.raises(ConjugatorError):
        find_conjugator([(BitVec.from_indices(g, [1]), BitVec.from_indices(g, [1, 2]))])
    a, b, c = (BitVec.from_indices(g, ix) for ix in ([1, 2], [2, 3], [5, 6]))
    assert dot_form(a, b) == 1 and dot_form(a, c) == 0
    with pytest.raises(ConjugatorError):
        find_conjugator([(a, a), (b, c)])
    assert len(find_conjugator([])) == 0
