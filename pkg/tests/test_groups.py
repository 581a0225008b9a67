import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsec import groups as G
from ratsec.errors import DomainError
from ratsec.groups import Cyclic, HoughtonPerm, IntVector, WreathPair

H2 = G.houghton2()
LL = G.lamplighter()


def brute_crossing(g, span=60):
    """Cut count over a wide window of half-integers, straight from the definition."""
    h = g * HoughtonPerm(-g.shift)
    best = 0
    for m in range(-span, span):
        p = m + Fraction(1, 2)
        best = max(best, sum(1 for x in range(-span, span + 1) if x < p < h(x)))
    return best


def random_word(rng, letters, n):
    return "".join(rng.choice(letters) for _ in range(n))


words_h2 = st.text(alphabet="atT", max_size=12)


# --- balls -------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, size",
    [("Z", 5), ("Z^2", 13), ("F2", 17), ("wr(C2,Z)", 10), ("wr(Z,Z)", 17), ("BS(1,2)", 17), ("H2", 10), ("C_3", 3)],
)
def test_ball_sizes_radius_two(spec, size):
    assert len(G.ball_enumerate(G.parse_group(spec), 2)) == size


@pytest.mark.parametrize("r", range(5))
def test_free_ball_formula(r):
    assert len(G.ball_enumerate(G.free_group(2), r)) == 1 + 2 * (3**r - 1)


@pytest.mark.parametrize("d, r", [(1, 4), (2, 3), (3, 2)])
def test_lattice_ball_counts(d, r):
    want = sum(1 for v in itertools.product(range(-r, r + 1), repeat=d) if sum(map(abs, v)) <= r)
    assert len(G.ball_enumerate(G.lattice(d), r)) == want


def test_ball_words_are_geodesic():
    ball = G.ball_enumerate(LL, 3)
    for g, w in ball.elements.items():
        assert LL.evaluate(w) == g
    assert sorted(len(ball.sphere(r)) for r in range(4)) == sorted(
        sum(1 for w in ball.elements.values() if len(w) == r) for r in range(4)
    )


# --- relations ---------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 5])
def test_bs_relation(n):
    bs = G.baumslag_solitar(n)
    assert bs.evaluate("Tat") == bs.evaluate("a" * n)


@pytest.mark.parametrize("n", range(1, 6))
def test_lamplighter_relations(n):
    a = LL.evaluate("a")
    conj = LL.evaluate("t" * n + "a" + "T" * n)
    assert (a * a).is_identity
    assert G.commutator(a, conj).is_identity


def test_houghton_generator_action():
    assert H2.evaluate("taT") == G.parse_cycles("(2 3)")
    assert G.format_cycles(G.houghton_witness(2)) == "(1 -1)(2 -2); shift=0"


def test_cycle_round_trip():
    g = H2.evaluate("tatTaTTa")
    assert G.parse_cycles(G.format_cycles(g)) == g


def test_bad_houghton_map():
    with pytest.raises(DomainError):
        HoughtonPerm(0, ((1, 2),))


def test_mixed_families():
    with pytest.raises(DomainError):
        IntVector((1,)) * Cyclic(2, 1)


def test_parse_group_errors():
    with pytest.raises(DomainError):
        G.parse_group("Q8")


# --- independent lamplighter model ------------------------------------------


def ll_model(word):
    """(set of lit lamps, cursor) by direct simulation."""
    lamps, pos = set(), 0
    for ch in word:
        if ch == "a":
            lamps ^= {pos}
        else:
            pos += 1 if ch == "t" else -1
    return frozenset(lamps), pos


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="atT", max_size=14))
def test_lamplighter_matches_model(w):
    g = LL.evaluate(w)
    lamps, pos = ll_model(w)
    assert {s.coords[0] for s in g.support()} == set(lamps)
    assert g.cursor.coords[0] == pos


# --- group axioms ------------------------------------------------------------


@pytest.mark.parametrize("spec", ["Z^2", "F2", "wr(C2,Z)", "wr(Z,Z)", "BS(1,3)", "H2", "Sym_4", "x(Z,C_3)"])
def test_group_axioms(spec):
    grp = G.parse_group(spec)
    rng = random.Random(spec)
    for _ in range(300):
        x, y, z = (grp.evaluate(random_word(rng, grp.letters, 8)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert (x * x.inverse()).is_identity
        assert x * grp.identity == x
        assert hash(x * y * z) == hash(x * (y * z))


def test_wreath_associativity_many():
    grp = G.parse_group("wr(Z,Z)")
    rng = random.Random(3)
    for _ in range(10_000):
        x, y, z = (grp.evaluate(random_word(rng, grp.letters, 6)) for _ in range(3))
        assert (x * y) * z == x * (y * z)


@settings(max_examples=200, deadline=None)
@given(words_h2)
def test_word_for_houghton(w):
    g = H2.evaluate(w)
    assert H2.evaluate(H2.word_for(g)) == g


# --- crossing numbers --------------------------------------------------------


@pytest.mark.parametrize("K", range(1, 11))
def test_witness_crossing(K):
    h = G.houghton_witness(K)
    assert G.crossing_number(h) == K
    assert len(h.moves) == 2 * K


@settings(max_examples=300, deadline=None)
@given(words_h2)
def test_crossing_matches_definition(w):
    g = H2.evaluate(w)
    assert G.crossing_number(g) == brute_crossing(g)


def test_translation_part():
    g = H2.evaluate("tta")
    h, pi = G.translation_part(g)
    assert pi == 2 and h.shift == 0 and h * HoughtonPerm(pi) == g


@settings(max_examples=300, deadline=None)
@given(words_h2, st.integers(-3, 3), st.integers(-3, 3))
def test_crossing_translation_invariance(w, m, n):
    g = H2.evaluate(w)
    assert G.crossing_number(HoughtonPerm(m) * g * HoughtonPerm(n)) == G.crossing_number(g)


@settings(max_examples=300, deadline=None)
@given(words_h2)
def test_crossing_inverse(w):
    g = H2.evaluate(w)
    assert G.crossing_number(g.inverse()) == G.crossing_number(g)


@settings(max_examples=300, deadline=None)
@given(words_h2, words_h2)
def test_crossing_subadditive(u, v):
    g, h = H2.evaluate(u), H2.evaluate(v)
    assert G.crossing_number(g * h) <= G.crossing_number(g) + G.crossing_number(h)


@settings(max_examples=300, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 4), st.lists(st.integers(0, 10**6), max_size=10))
def test_crossing_interval_bound(a, width, picks):
    b = a + width
    pts = list(range(a, b + 1))
    perms = list(itertools.permutations(pts))
    t = HoughtonPerm(1)
    g = HoughtonPerm()
    for k in picks:
        s = HoughtonPerm(0, tuple(zip(pts, perms[k % len(perms)])))
        g = g * s * t
    assert G.crossing_number(g) <= b - a
