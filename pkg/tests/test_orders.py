import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsec import automata as fa
from ratsec import catalog
from ratsec import groups as G
from ratsec import orders as O
from ratsec import verify as V
from ratsec.errors import CapacityError, DomainError
from ratsec.groups import IntVector


LEX3 = O.zd_lex(3)
EXT = O.build_cone("ext(lex:1,lex:1)")
WR = O.build_cone("wr(z+,z+)")


def vec(*xs):
    return IntVector(tuple(xs))


# --- predicates against independent definitions ----------------------------


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_lex_matches_tuple_order(xs):
    assert LEX3.contains(IntVector(tuple(xs))) == (tuple(xs) > (0, 0, 0))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_extension_matches_lex(xs):
    assert EXT.contains(IntVector(tuple(xs))) == (tuple(xs) > (0, 0))


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="aAtT", max_size=12))
def test_wreath_cone_matches_model(w):
    cone = WR
    # model: lamps as ints, cursor as int; positive iff least lit lamp > 0 or no lamps and cursor > 0
    lamps, pos = {}, 0
    for ch in w:
        if ch in "aA":
            lamps[pos] = lamps.get(pos, 0) + (1 if ch == "a" else -1)
        else:
            pos += 1 if ch == "t" else -1
    lit = sorted(p for p, v in lamps.items() if v)
    want = lamps[lit[0]] > 0 if lit else pos > 0
    assert cone.contains(cone.group.evaluate(w)) == want


def test_wreath_cone_needs_total_base():
    with pytest.raises(DomainError):
        O.wreath_cone(O.z_positive(), O.dominance_cone(2))


def test_unknown_recipe():
    with pytest.raises(DomainError):
        O.build_cone("lex")


# --- axioms over balls -------------------------------------------------------


@pytest.mark.parametrize("recipe", ["z+", "lex:2", "ext(lex:1,lex:1)", "wr(z+,z+)", "bs1:2", "dom:2"])
def test_cone_axioms(recipe):
    rep = V.cone_axioms_check(O.build_cone(recipe), 4, samples=3000)
    assert rep.ok, rep.violations[:3]


def test_empty_cone_is_a_partial_order():
    rep = V.cone_axioms_check(O.empty_cone(G.lattice(2)), 2)
    assert rep.ok and rep.positives == 0


# --- languages ---------------------------------------------------------------


def test_mirror_completion_of_z():
    assert fa.languages_equal(O.mirror_completion(O.z_positive()), catalog.get("z-geodesics"))


def test_mirror_rejects_epsilon():
    with pytest.raises(DomainError):
        O.mirror_language(fa.build_from_regex("t*", ("t", "T")), {"t": "T", "T": "t"})


def test_mirror_needs_language():
    with pytest.raises(DomainError):
        O.mirror_completion(O.dominance_cone(2))


def test_lex2_language_words():
    cone = O.zd_lex(2)
    words = ["".join(w) for w in fa.enumerate_words(cone.language, 2)]
    assert sorted(words) == sorted(["s", "t", "ss", "st", "sT", "tt"])


def test_extension_language_equals_lex():
    assert fa.languages_equal(O.build_cone("ext(lex:1,lex:1)").language, O.zd_lex(2).language)


@pytest.mark.parametrize("recipe, cap, radius", [("lex:2", 8, 4), ("wr(z+,z+)", 7, 3), ("bs1:2", 10, 4)])
def test_language_is_cross_section_of_cone(recipe, cap, radius):
    rep = V.cone_language_check(O.build_cone(recipe), cap, radius, hit_cap=cap + 4)
    assert rep.sound and rep.injective
    assert not rep.missed


def test_bs1_3_language_is_sound_but_partial():
    cone = O.bs1n(3)
    assert not cone.exact_language
    rep = V.cone_language_check(cone, 7, 2)
    assert rep.sound and rep.injective


def test_lamplighter_cross_section_equals_lamplighter():
    built = O.lamplighter_cross_section()
    assert fa.languages_equal(built, catalog.get("lamplighter"))
    assert fa.enumerate_words(built, 12) == fa.enumerate_words(catalog.get("lamplighter"), 12)


def test_wreath_cross_section_lamp_z():
    z = G.lattice(1)
    lang_l = O.mirror_completion(O.z_positive())
    lang_q = O.mirror_completion(O.z_positive())
    m = O.wreath_cross_section(lang_l, lang_q, O.plus("t", z.letters), z, z)
    grp = G.wreath(z, z)
    ball = G.ball_enumerate(grp, 3)
    rep = V.check_cross_section(m, grp, 11, targets=ball.elements)
    assert rep.injective and not rep.uncovered


def test_wreath_cross_section_needs_unique_identity():
    lamp = G.cyclic(2)
    z = G.lattice(1)
    lang_l = fa.from_words(["", "aa", "a"], ("a",))
    with pytest.raises(DomainError):
        O.wreath_cross_section(lang_l, catalog.get("z-geodesics"), O.plus("t", z.letters), lamp, z)


# --- comparisons and chains --------------------------------------------------


def test_compare():
    lex = O.zd_lex(2)
    assert O.compare(lex, vec(0, 0), vec(0, 1)) == "less"
    assert O.compare(lex, vec(1, 0), vec(0, 5)) == "greater"
    assert O.compare(lex, vec(1, 1), vec(1, 1)) == "equal"
    assert O.compare(O.dominance_cone(2), vec(1, 0), vec(0, 1)) == "incomparable"


def box(d, r):
    return [IntVector(v) for v in itertools.product(range(-r, r + 1), repeat=d)]


def test_chain_density_dominance():
    S = [vec(x, y) for x in range(2) for y in range(2)]
    rep = O.chain_density(O.dominance_cone(2), S)
    assert rep.density == Fraction(3, 4)


def test_chain_density_total_order():
    rep = O.chain_density(O.zd_lex(2), box(2, 1))
    assert rep.density == 1 and rep.max_chain == 9


def test_chain_density_empty_cone():
    rep = O.chain_density(O.empty_cone(G.lattice(2)), box(2, 1))
    assert rep.density == Fraction(1, 9)


def test_chain_density_cap():
    with pytest.raises(CapacityError):
        O.chain_density(O.zd_lex(2), box(2, 2), cap=10)


def test_chain_density_empty_set():
    with pytest.raises(DomainError):
        O.chain_density(O.zd_lex(2), [])


def test_antichain():
    dom = O.dominance_cone(2)
    ok, pair = O.antichain_check([dom], [vec(1, 0), vec(0, 1), vec(2, -1)])
    assert ok and pair is None
    ok, pair = O.antichain_check([dom, O.zd_lex(2)], [vec(1, 0), vec(0, 1)])
    assert not ok and pair == (vec(1, 0), vec(0, 1))
