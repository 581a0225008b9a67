"""Positive cones, rational orders and the wreath-product normal forms built from them.

A :class:`Cone` always carries a decidable membership predicate; a regular
language whose evaluation is the cone is attached when one is known. The
order is ``g ≺ h  ⟺  g⁻¹h ∈ P``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import networkx as nx

from . import automata as fa
from .automata import Automaton
from .errors import CapacityError, DomainError
from .groups import Group, baumslag_solitar, lattice, parse_group, wreath

DEFAULT_CHAIN_CAP = 2000
IDENTITY_SEARCH_LEN = 16


@dataclass(frozen=True)
class Cone:
    group: Group = field(repr=False)
    contains: Callable = field(repr=False)
    language: Automaton | None = field(default=None, repr=False)
    total: bool = False
    name: str = ""
    # False when the language only evaluates into the cone without covering it
    exact_language: bool = True

    def __call__(self, g) -> bool:
        return self.contains(g)


# ---------------------------------------------------------------------------
# language helpers


def plus(letter: str, alphabet) -> Automaton:
    """``letter⁺`` over ``alphabet``."""
    return fa.automaton((0, 1), alphabet, [(0, letter, 1), (1, letter, 1)], 0, (1,))


def epsilon_only(alphabet) -> Automaton:
    return fa.Automaton((0,), alphabet, (), 0, (0,), True)


def inverse_image(m: Automaton, inverse_letter: dict, alphabet=None) -> Automaton:
    """Words ``sₙ⁻¹…s₁⁻¹`` for ``s₁…sₙ`` in the language (mirror then invert)."""
    alphabet = tuple(alphabet) if alphabet is not None else m.alphabet
    rev = fa.reverse(fa.with_alphabet(m, alphabet) if set(alphabet) != set(m.alphabet) else m)
    return fa.determinize(fa.relabel(rev, inverse_letter, alphabet))


def symmetric_alphabet(letters, inverse_letter: dict) -> tuple:
    out = list(letters)
    for a in letters:
        if inverse_letter[a] not in out:
            out.append(inverse_letter[a])
    return tuple(out)


def mirror_language(m: Automaton, inverse_letter: dict, alphabet=None) -> Automaton:
    """``P ⊔ P⁻¹ ⊔ {ε}`` from a cone language ``P`` that avoids ε."""
    if fa.recognize(m, ()):
        raise DomainError("cone language must not contain the empty word")
    alphabet = tuple(alphabet) if alphabet is not None else symmetric_alphabet(m.alphabet, inverse_letter)
    pos = fa.with_alphabet(m, alphabet)
    neg = inverse_image(pos, inverse_letter, alphabet)
    return fa.union(fa.union(pos, neg), epsilon_only(alphabet))


def mirror_completion(cone: Cone) -> Automaton:
    """Cross-section candidate for the whole group built from the cone language."""
    if cone.language is None:
        raise DomainError(f"cone {cone.name!r} has no language witness")
    return mirror_language(cone.language, cone.group.inverse_letter, cone.group.letters)


def _embed(m: Automaton, mapping: dict, alphabet) -> Automaton:
    return fa.relabel(m, mapping, alphabet)


def _cat(*parts: Automaton) -> Automaton:
    out = parts[0]
    for p in parts[1:]:
        out = fa.concat(out, p)
    return out


# ---------------------------------------------------------------------------
# concrete cones


def z_positive() -> Cone:
    g = lattice(1)
    return Cone(g, lambda x: x.coords[0] > 0, plus("t", g.letters), True, "z+")


def _lex_key(coords):
    for x in coords:
        if x:
            return x > 0
    return False


def empty_cone(group: Group) -> Cone:
    return Cone(group, lambda x: False, fa.empty_language(group.letters), False, "empty")


def dominance_cone(d: int = 2) -> Cone:
    """Coordinatewise ``≥ 0`` minus the origin; a partial order for ``d ≥ 2``."""
    g = lattice(d)
    return Cone(
        g,
        lambda x: all(c >= 0 for c in x.coords) and any(x.coords),
        None,
        d == 1,
        f"dom:{d}",
    )


def _lattice_dim(cone: Cone) -> int:
    if cone.group.kind != "lattice":
        raise DomainError(f"cone {cone.name!r} does not live on a free abelian group")
    return cone.group.params["d"]


def extension(cone_a: Cone, cone_c: Cone) -> Cone:
    """Cone on ``C × A`` (C's coordinates first): ``π⁻¹(C₊) ∪ ι(A₊)``.

    Language ``𝒞₊𝒜 ∪ 𝒜₊`` with ``𝒜`` the mirror completion of ``𝒜₊``.
    """
    a, c = _lattice_dim(cone_a), _lattice_dim(cone_c)
    group = lattice(a + c)
    letters = group.letters
    map_c = {x: letters[i] for i, x in enumerate(cone_c.group.letters)}
    map_a = {x: letters[2 * c + i] for i, x in enumerate(cone_a.group.letters)}

    def contains(x):
        top = x.coords[:c]
        if any(top):
            return cone_c.contains(type(x)(top))
        return cone_a.contains(type(x)(x.coords[c:]))

    language = None
    if cone_a.language is not None and cone_c.language is not None:
        a_plus = _embed(cone_a.language, map_a, letters)
        a_all = _embed(mirror_completion(cone_a), map_a, letters)
        c_plus = _embed(cone_c.language, map_c, letters)
        language = fa.union(fa.concat(c_plus, a_all), a_plus)
    return Cone(
        group,
        contains,
        language,
        cone_a.total and cone_c.total,
        f"ext({cone_a.name},{cone_c.name})",
        cone_a.exact_language and cone_c.exact_language,
    )


def zd_lex(d: int) -> Cone:
    """Lexicographic cone on Zᵈ: the first non-zero coordinate is positive."""
    if d < 1:
        raise DomainError("dimension must be positive")
    cone = z_positive()
    for _ in range(d - 1):
        cone = extension(cone, z_positive())
    return Cone(
        lattice(d),
        lambda x: _lex_key(x.coords),
        cone.language,
        True,
        f"lex:{d}",
    )


def wreath_cone(cone_l: Cone, cone_q: Cone) -> Cone:
    """Cone on ``L wr Q``: either no lamps and ``q ∈ Q₊``, or the lamp at the
    ``≺_Q``-least support point is in ``L₊``."""
    if not cone_q.total:
        raise DomainError("the base cone must be total to take minima over supports")
    group = wreath(cone_l.group, cone_q.group)

    def contains(x):
        if not x.lamps:
            return cone_q.contains(x.cursor)
        least = None
        for s, _ in x.lamps:
            if least is None or cone_q.contains(s.inverse() * least):
                least = s
        return cone_l.contains(dict(x.lamps)[least])

    language = None
    if cone_l.language is not None and cone_q.language is not None:
        language = wreath_cone_language(cone_l, cone_q, group)
    return Cone(
        group,
        contains,
        language,
        cone_l.total and cone_q.total,
        f"wr({cone_l.name},{cone_q.name})",
        cone_l.exact_language and cone_q.exact_language,
    )


def wreath_cone_language(cone_l: Cone, cone_q: Cone, group: Group | None = None) -> Automaton:
    """``𝒬₊ ∪ 𝒬𝓛₊(𝒬₊𝓛₀)*𝒬`` over the wreath alphabet."""
    if cone_l.language is None or cone_q.language is None:
        raise DomainError("both cones need language witnesses")
    if group is None:
        group = wreath(cone_l.group, cone_q.group)
    letters = group.letters
    rename = group.params["rename"]
    l_plus = _embed(cone_l.language, rename, letters)
    l_zero = fa.union(l_plus, inverse_image(l_plus, group.inverse_letter, letters))
    q_plus = fa.with_alphabet(cone_q.language, letters)
    q_all = mirror_language(q_plus, group.inverse_letter, letters)
    body = _cat(q_all, l_plus, fa.star(fa.concat(q_plus, l_zero)), q_all)
    return fa.union(q_plus, body)


def bs1n(n: int) -> Cone:
    """Cone of BS(1,n): ``r > 0``, or ``r = 0`` and ``k > 0``.

    Language ``t⁺ ⊔ 𝒯a(t⁺a)*𝒯``. Its words only produce base-n digits 0 and 1,
    so it is a cross-section of the cone for n = 2 and a proper subset otherwise.
    """
    group = baumslag_solitar(n)
    letters = group.letters
    big_t = fa.build_from_regex("t t* | T T* | ε", letters)
    middle = fa.build_from_regex("a (t t* a)*", letters)
    language = fa.union(plus("t", letters), _cat(big_t, middle, big_t))
    return Cone(
        group,
        lambda x: x.r > 0 or (x.r == 0 and x.k > 0),
        language,
        True,
        f"bs1:{n}",
        n == 2,
    )


def _split_args(body: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return parts


def build_cone(recipe: str) -> Cone:
    """Cone from ``z+``, ``lex:d``, ``ext(A,C)``, ``wr(L,Q)``, ``bs1:n`` or ``dom:d``."""
    text = recipe.replace(" ", "")
    if text in ("z+", "lex:1"):
        return z_positive()
    m = re.fullmatch(r"lex:(\d+)", text)
    if m:
        return zd_lex(int(m.group(1)))
    m = re.fullmatch(r"bs1:(\d+)", text)
    if m:
        return bs1n(int(m.group(1)))
    m = re.fullmatch(r"dom:(\d+)", text)
    if m:
        return dominance_cone(int(m.group(1)))
    m = re.fullmatch(r"empty:(.+)", text)
    if m:
        return empty_cone(parse_group(m.group(1)))
    for prefix, make in (("ext(", extension), ("wr(", wreath_cone)):
        if text.startswith(prefix) and text.endswith(")"):
            args = _split_args(text[len(prefix) : -1])
            if len(args) != 2:
                raise DomainError(f"{prefix[:-1]} takes two cones: {recipe!r}")
            return make(build_cone(args[0]), build_cone(args[1]))
    raise DomainError(f"unknown cone recipe {recipe!r}")


# ---------------------------------------------------------------------------
# comparisons


def compare(cone: Cone, g, h) -> str:
    """``less``, ``greater``, ``equal`` or ``incomparable``."""
    if type(g) is not type(h):
        raise DomainError("cannot compare elements of different groups")
    if g == h:
        return "equal"
    if cone.contains(g.inverse() * h):
        return "less"
    if cone.contains(h.inverse() * g):
        return "greater"
    return "incomparable"


@dataclass(frozen=True)
class ChainReport:
    subset: tuple
    max_chain: int
    density: Fraction
    chain: tuple


def chain_density(cone: Cone, S, cap: int = DEFAULT_CHAIN_CAP) -> ChainReport:
    """Longest ≺-chain in ``S`` divided by ``|S|``."""
    items = list(dict.fromkeys(S))
    if not items:
        raise DomainError("chain density of an empty set is undefined")
    if len(items) > cap:
        raise CapacityError(f"|S| = {len(items)} exceeds the cap {cap}")
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(items)))
    for i, g in enumerate(items):
        for j, h in enumerate(items):
            if i != j and cone.contains(g.inverse() * h):
                dag.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(dag):
        raise DomainError(f"cone {cone.name!r} is not a strict partial order on S")
    path = nx.dag_longest_path(dag, topo_order=list(nx.topological_sort(dag))) or [0]
    chain = tuple(items[i] for i in path)
    return ChainReport(tuple(items), len(chain), Fraction(len(chain), len(items)), chain)


def antichain_check(cones, S):
    """``(True, None)`` if no cone compares two elements of ``S``, else ``(False, pair)``."""
    cones = list(cones)
    if cones:
        name = cones[0].group.name
        for c in cones[1:]:
            if c.group.name != name:
                raise DomainError("all cones must live on the same group")
    items = list(dict.fromkeys(S))
    for i, g in enumerate(items):
        for h in items[i + 1 :]:
            for c in cones:
                if compare(c, g, h) != "incomparable":
                    return False, (g, h)
    return True, None


# ---------------------------------------------------------------------------
# wreath-product cross-sections


def identity_words(language: Automaton, group: Group, max_len: int = IDENTITY_SEARCH_LEN) -> list:
    return [w for w in fa.enumerate_words(language, max_len) if group.evaluate(w).is_identity]


def wreath_cross_section(
    lang_l: Automaton,
    lang_q: Automaton,
    lang_q_plus: Automaton,
    lamp: Group,
    base: Group,
    search_len: int = IDENTITY_SEARCH_LEN,
) -> Automaton:
    """``𝒬 ⊔ 𝒬𝓛₀(𝒬₊𝓛₀)*𝒬`` with ``𝓛₀`` the lamp language minus the identity's word."""
    group = wreath(lamp, base)
    letters = group.letters
    ids = identity_words(lang_l, lamp, search_len)
    if not ids:
        raise DomainError("no word of the lamp language evaluates to the identity")
    if len(ids) > 1:
        raise DomainError("lamp language has several words for the identity")
    l_zero = fa.difference(lang_l, fa.from_words(ids, lang_l.alphabet))
    q_all = fa.with_alphabet(lang_q, letters)
    if fa.is_empty(l_zero):
        return fa.determinize(q_all)
    l_zero = _embed(l_zero, group.params["rename"], letters)
    q_plus = fa.with_alphabet(lang_q_plus, letters)
    body = _cat(q_all, l_zero, fa.star(fa.concat(q_plus, l_zero)), q_all)
    return fa.union(q_all, body)


def lamplighter_cross_section() -> Automaton:
    """The construction specialised to C2 wr Z with ``𝓛 = {ε, a}``."""
    from .groups import cyclic

    lamp = cyclic(2)
    lang_l = fa.from_words(["", "a"], ("a",))
    z = lattice(1)
    lang_q = mirror_language(plus("t", z.letters), z.inverse_letter, z.letters)
    return wreath_cross_section(lang_l, lang_q, plus("t", z.letters), lamp, z)
