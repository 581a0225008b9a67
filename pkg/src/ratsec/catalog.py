"""Small reference automata used by tests, the CLI and the examples.

Each entry is a function returning a fresh :class:`Automaton`; ``get`` looks
one up by name (the CLI exposes them as ``builtin:<name>``).
"""

from __future__ import annotations

from .automata import Automaton, automaton, reduced_words


def z_geodesics() -> Automaton:
    """Geodesic normal forms of Z: {ε} ∪ {tⁿ} ∪ {Tⁿ}."""
    edges = [("*", "t", "v+"), ("*", "T", "v-"), ("v+", "t", "v+"), ("v-", "T", "v-")]
    return automaton(("*", "v+", "v-"), ("t", "T"), edges, "*", ("*", "v+", "v-"))


def mod3_untrimmed() -> Automaton:
    """Words tⁿ with n ≢ 0 mod 3, with one dead and one unreachable state."""
    edges = [
        ("*", "t", "v1"),
        ("v1", "t", "v2"),
        ("v2", "t", "*"),
        ("v2", "T", "v3"),
        ("v4", "t", "v1"),
    ]
    return automaton(("*", "v1", "v2", "v3", "v4"), ("t", "T"), edges, "*", ("v1", "v2"))


def lamplighter_normal_forms() -> Automaton:
    """Nondeterministic automaton of a rational cross-section of C2 wr Z.

    ``a`` toggles the lamp at the cursor, ``t``/``T`` move the cursor.
    """
    edges = [
        ("*", "t", "p1"),
        ("*", "T", "m1"),
        ("*", "a", "a1"),
        ("p1", "t", "p1"),
        ("m1", "T", "m1"),
        ("p1", "a", "a1"),
        ("m1", "a", "a1"),
        ("a1", "t", "p2"),
        ("p2", "t", "p2"),
        ("p2", "a", "a1"),
        ("a1", "T", "die-"),
        ("a1", "t", "die+"),
        ("die+", "t", "die+"),
        ("die-", "T", "die-"),
    ]
    states = ("*", "p1", "m1", "a1", "p2", "die+", "die-")
    terminals = ("*", "p1", "m1", "a1", "die+", "die-")
    return automaton(states, ("a", "t", "T"), edges, "*", terminals)


def free_reduced() -> Automaton:
    """Freely reduced words of the free group on a, b (A, B are the inverses)."""
    return reduced_words(("a", "A", "b", "B"), FREE2_INVERSES)


def c3_times_z() -> Automaton:
    """A rational cross-section of C3 × Z with no bounded-length separation."""
    edges = [("*", "a", "a1"), ("a1", "a", "a2")]
    for s in ("*", "a1", "a2"):
        edges += [(s, "T", "c"), (s, "t", "d")]
    edges += [("c", "a", "c2"), ("c2", "T", "c"), ("d", "a", "d2"), ("d2", "t", "d")]
    states = ("*", "a1", "a2", "c", "d", "c2", "d2")
    return automaton(states, ("a", "t", "T"), edges, "*", ("*", "a1", "a2", "c", "d"))


FREE2_INVERSES = {"a": "A", "A": "a", "b": "B", "B": "b"}
Z_INVERSES = {"t": "T", "T": "t"}

CATALOG = {
    "z-geodesics": z_geodesics,
    "mod3": mod3_untrimmed,
    "lamplighter": lamplighter_normal_forms,
    "free2": free_reduced,
    "c3xz": c3_times_z,
}


def get(name: str) -> Automaton:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"no builtin automaton {name!r}; known: {sorted(CATALOG)}") from None
