import json
import random
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import all_words, brute_language, free_reduce, random_automaton, random_regex_tree, reductions_upto, render, to_python_re
from ratsec import automata as fa
from ratsec import catalog
from ratsec.errors import CapacityError, DomainError, PreconditionError, RegexSyntaxError, SchemaError
from ratsec.regex import parse

GOLDEN = Path(__file__).parent / "golden"
AB = ("a", "b")


@st.composite
def automata_st(draw, alphabet=AB, max_states=5):
    n = draw(st.integers(1, max_states))
    states = list(range(n))
    triples = [(p, a, q) for p in states for a in alphabet for q in states]
    edges = draw(st.lists(st.sampled_from(triples), max_size=3 * n, unique=True))
    terminals = draw(st.lists(st.sampled_from(states), max_size=n, unique=True))
    return fa.automaton(states, alphabet, edges, 0, terminals)


def lang(m, n):
    return set(fa.enumerate_words(m, n))


# --- construction and recognition -------------------------------------------


def test_z_geodesics_words():
    m = catalog.get("z-geodesics")
    assert [fa.show_word(w) for w in fa.enumerate_words(m, 2)] == ["ε", "t", "T", "tt", "TT"]


def test_recognize_foreign_letter():
    with pytest.raises(DomainError):
        fa.recognize(catalog.get("z-geodesics"), ("a",))


def test_edge_to_unknown_state():
    with pytest.raises(DomainError):
        fa.automaton((0,), AB, [(0, "a", 1)], 0, [0])


def test_run_returns_states():
    m = catalog.get("z-geodesics")
    assert fa.run(m, "tt") == ["*", "v+", "v+"]
    assert fa.run(m, "tT") is None


def test_regex_syntax_error_position():
    with pytest.raises(RegexSyntaxError) as exc:
        fa.build_from_regex("(ab", AB)
    assert exc.value.position >= 0


def test_regex_multichar_letters():
    m = fa.build_from_regex("(ta)*T", ("t", "ta", "T", "a"))
    assert fa.recognize(m, ("ta", "ta", "T"))
    assert not fa.recognize(m, ("t", "a", "T"))


@pytest.mark.parametrize(
    "expr, words",
    [
        ("ε", [""]),
        ("∅", []),
        ("a|b", ["a", "b"]),
        ("(ab)*", ["", "ab"]),
        ("a+b?", ["a", "aa", "ab"]),
    ],
)
def test_regex_small(expr, words):
    m = fa.build_from_regex(expr, AB)
    got = ["".join(w) for w in fa.enumerate_words(m, 2)]
    assert sorted(got) == sorted(words)


def test_regex_against_python_re():
    rng = random.Random(7)
    for _ in range(40):
        tree = random_regex_tree(rng, AB, 3)
        m = fa.build_from_regex(render(tree), AB)
        pat = re.compile(to_python_re(tree))
        for w in all_words(AB, 6):
            assert fa.recognize(m, w) == bool(pat.fullmatch("".join(w))), render(tree)


def test_parse_tree_shape():
    assert parse("ab|c") == ("alt", ("cat", ("lit", "a"), ("lit", "b")), ("lit", "c"))


# --- trim / determinize ------------------------------------------------------


def test_trim_mod3():
    t = fa.trim(catalog.get("mod3"))
    assert set(t.states) == {"*", "v1", "v2"}
    assert t.initial == "*"


def test_trim_empty_language_keeps_initial():
    m = fa.automaton((0, 1), AB, [(0, "a", 1)], 0, [])
    t = fa.trim(m)
    assert t.states == (0,) and not t.terminals


def test_lamplighter_determinized():
    d = fa.determinize(catalog.get("lamplighter"))
    assert d.is_deterministic()
    assert len(d.states) == 6
    assert lang(d, 7) == lang(catalog.get("lamplighter"), 7)


@settings(max_examples=80, deadline=None)
@given(automata_st())
def test_determinize_preserves_language(m):
    d = fa.determinize(m)
    assert d.is_deterministic()
    assert lang(d, 6) == brute_language(m, 6)


@settings(max_examples=80, deadline=None)
@given(automata_st())
def test_trim_invariants(m):
    t = fa.trim(m)
    assert lang(t, 6) == lang(m, 6)
    assert t.initial == m.initial
    if fa.is_empty(m):
        assert t.states == (m.initial,)
    else:
        # every state of a trimmed automaton lies on an accepting path
        for s in t.states:
            assert s in fa._accessible(t) and s in fa._coaccessible(t)


@settings(max_examples=60, deadline=None)
@given(automata_st())
def test_minimize_is_idempotent_and_equivalent(m):
    mm = fa.minimize(fa.determinize(m))
    assert fa.languages_equal(mm, m)
    assert len(fa.minimize(mm).states) == len(mm.states)


# --- boolean operations ------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(automata_st(), automata_st())
def test_boolean_operations(a, b):
    la, lb = brute_language(a, 5), brute_language(b, 5)
    assert lang(fa.union(a, b), 5) == la | lb
    assert lang(fa.intersection(a, b), 5) == la & lb
    assert lang(fa.difference(a, b), 5) == la - lb
    assert lang(fa.complement(a), 5) == set(all_words(AB, 5)) - la


@settings(max_examples=40, deadline=None)
@given(automata_st(max_states=3), automata_st(max_states=3))
def test_concat_and_star(a, b):
    la, lb = brute_language(a, 4), brute_language(b, 4)
    cat = {u + v for u in la for v in lb if len(u + v) <= 4}
    assert lang(fa.concat(a, b), 4) == cat
    star = {()}
    frontier = {()}
    while frontier:
        frontier = {u + v for u in frontier for v in la if v and len(u + v) <= 4} - star
        star |= frontier
    assert lang(fa.star(a), 4) == star


def test_alphabet_mismatch():
    with pytest.raises(DomainError):
        fa.union(catalog.get("z-geodesics"), fa.universal(AB))


def test_reverse():
    m = fa.build_from_regex("ab*", AB)
    assert lang(fa.reverse(m), 3) == {tuple(reversed(w)) for w in lang(m, 3)}


# --- growth ------------------------------------------------------------------


def test_growth_z_geodesics():
    rep = fa.growth_classify(catalog.get("z-geodesics"))
    assert rep.kind is fa.Growth.POLYNOMIAL_BOUNDED
    assert rep.witness == [("t",), ("T",)]


def test_growth_free_monoid():
    rep = fa.growth_classify(fa.build_from_regex("(a|b)*", AB))
    assert rep.kind is fa.Growth.EXPONENTIAL
    assert rep.witness == ((), ("a",), ("b",), ())


def test_growth_finite():
    rep = fa.growth_classify(fa.from_words(["a", "ab"], AB))
    assert rep.kind is fa.Growth.FINITE
    assert sorted(rep.witness) == [("a",), ("a", "b")]


def test_bounded_decomposition():
    ws = fa.bounded_decomposition(fa.build_from_regex("(ab)*", AB))
    assert ws == [("a", "b")]
    assert fa.pumping_triple(fa.build_from_regex("(ab)*", AB)) == ((), ("a", "b"), ())


def test_bounded_decomposition_rejects_exponential():
    with pytest.raises(PreconditionError):
        fa.bounded_decomposition(catalog.get("lamplighter"))


def test_bounded_decomposition_cap():
    m = fa.build_from_regex("a*b*a*b*a*b*", AB)
    with pytest.raises(CapacityError):
        fa.bounded_decomposition(m, cap=2)


def test_pumping_z_geodesics():
    assert fa.pumping_triple(catalog.get("z-geodesics")) == (("t",), ("t",), ())


@settings(max_examples=60, deadline=None)
@given(automata_st())
def test_growth_witnesses_are_valid(m):
    rep = fa.growth_classify(m)
    words = lang(m, 8)
    if rep.kind is fa.Growth.FINITE:
        assert set(rep.witness) == lang(m, len(fa.determinize(m).states) + 2)
    elif rep.kind is fa.Growth.POLYNOMIAL_BOUNDED:
        assert all(fa.in_bounded_product(w, rep.witness) for w in words)
    else:
        v1, w1, w2, v2 = rep.witness
        assert w1 + w2 != w2 + w1
        for mid in ((), w1, w2, w1 + w2, w2 + w1 + w1):
            assert fa.recognize(m, v1 + mid + v2)


# --- free reduction ----------------------------------------------------------

F2 = catalog.FREE2_INVERSES


def test_benois_single():
    m = fa.from_words(["aAb"], ("a", "A", "b", "B"))
    assert fa.enumerate_words(fa.benois_reduce(m, F2), 4) == [("b",)]


def test_benois_star():
    # (aA)* b reduces to b only
    m = fa.build_from_regex("(aA)*b", ("a", "A", "b", "B"))
    assert fa.enumerate_words(fa.benois_reduce(m, F2), 5) == [("b",)]


def test_reduced_words_count():
    m = catalog.get("free2")
    assert [fa.count_words(m, n) for n in range(4)] == [1, 4, 12, 36]


def test_involution_required():
    with pytest.raises(DomainError):
        fa.reduced_words(AB, {"a": "b", "b": "b"})


@settings(max_examples=40, deadline=None)
@given(automata_st(alphabet=("a", "A", "b", "B"), max_states=4))
def test_benois_matches_brute_force(m):
    out = fa.benois_reduce(m, F2)
    assert lang(out, 4) == reductions_upto(m, F2, 4)
    short = {free_reduce(w, F2) for w in brute_language(m, 6)}
    assert {w for w in short if len(w) <= 4} <= lang(out, 4)


# --- loop erasure ------------------------------------------------------------


def test_loop_erasure_z_geodesics():
    d = fa.determinize(catalog.get("z-geodesics"))
    dec = fa.loop_erase_path(d, "ttt")
    assert dec.spine == (("t",),)
    assert [w for _, w in dec.loops] == [("t",), ("t",)]
    assert dec.reassemble() == ("t", "t", "t")


def test_loop_erasure_needs_dfa():
    with pytest.raises(PreconditionError):
        fa.loop_erase_path(catalog.get("lamplighter"), "a")


@settings(max_examples=60, deadline=None)
@given(automata_st(), st.integers(0, 10**6))
def test_loop_erasure_reassembles(m, seed):
    d = fa.determinize(m)
    words = fa.enumerate_words(d, 7)
    if not words:
        return
    w = random.Random(seed).choice(words)
    dec = fa.loop_erase_path(d, w)
    assert dec.reassemble() == w
    assert len(set(dec.spine_states)) == len(dec.spine_states)
    assert len(dec.spine) <= len(d.states)


# --- serialization -----------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(automata_st())
def test_json_round_trip(m):
    back = fa.loads(fa.dumps(m))
    assert fa.to_json(back) == fa.to_json(m)


def test_missing_initial_names_field():
    doc = fa.to_json(catalog.get("z-geodesics"))
    del doc["initial"]
    with pytest.raises(SchemaError) as exc:
        fa.loads(json.dumps(doc))
    assert exc.value.field == "initial"


def test_unknown_state_in_edge():
    doc = fa.to_json(catalog.get("z-geodesics"))
    doc["edges"].append(["*", "t", "nowhere"])
    with pytest.raises(SchemaError) as exc:
        fa.from_json(doc)
    assert exc.value.field == "edges"


def test_bad_json_reports_line():
    with pytest.raises(SchemaError) as exc:
        fa.loads('{\n"alphabet": [,\n}')
    assert exc.value.line == 2


def test_save_load(tmp_path):
    p = tmp_path / "m.json"
    fa.save(catalog.get("lamplighter"), p)
    assert fa.languages_equal(fa.load(p), catalog.get("lamplighter"))


@pytest.mark.parametrize(
    "name, build",
    [
        ("z_geodesics.dot", lambda: catalog.get("z-geodesics")),
        ("lamplighter_det.dot", lambda: fa.determinize(catalog.get("lamplighter"))),
        ("empty.dot", lambda: fa.empty_language(AB)),
    ],
)
def test_dot_golden(name, build):
    assert fa.to_dot(build()) == (GOLDEN / name).read_text(encoding="utf-8")


def test_dot_conventions():
    text = fa.to_dot(catalog.get("z-geodesics"))
    assert '"*" [peripheries=2, style=filled, fillcolor=green];' in text
    assert text == fa.to_dot(catalog.get("z-geodesics"))


def test_random_automaton_helper_is_sane():
    m = random_automaton(random.Random(1), 4, AB)
    assert lang(m, 5) == brute_language(m, 5)
