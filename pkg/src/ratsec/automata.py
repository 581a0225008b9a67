"""Finite automata over arbitrary finite alphabets.

Letters are opaque non-empty strings and words are tuples of letters. Every
public automaton is epsilon-free; epsilon moves only exist inside the
constructions below. Operations never mutate their inputs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import networkx as nx

from . import regex as _regex
from .errors import CapacityError, DomainError, PreconditionError, SchemaError

Word = tuple
EPSILON: Word = ()

DEFAULT_PATH_CAP = 10_000


# ---------------------------------------------------------------------------
# words


def as_word(w, alphabet: Sequence[str] | None = None) -> Word:
    """Coerce ``w`` into a tuple of letters.

    Strings are split on whitespace when they contain any, otherwise
    tokenized by longest match against ``alphabet`` (or per character).
    ``""`` and ``"ε"`` are the empty word.
    """
    if isinstance(w, tuple):
        return w
    if not isinstance(w, str):
        return tuple(w)
    w = w.strip()
    if w in ("", "ε"):
        return EPSILON
    if any(ch.isspace() for ch in w):
        return tuple(w.split())
    if alphabet is None or all(len(a) == 1 for a in alphabet):
        return tuple(w)
    letters = sorted(alphabet, key=len, reverse=True)
    out, i = [], 0
    while i < len(w):
        for a in letters:
            if w.startswith(a, i):
                out.append(a)
                i += len(a)
                break
        else:
            raise DomainError(f"cannot split {w!r} into letters at position {i}")
    return tuple(out)


def show_word(w: Word, empty: str = "ε") -> str:
    if not w:
        return empty
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return " ".join(w)


# ---------------------------------------------------------------------------
# the automaton type


@dataclass(frozen=True, eq=False)
class Automaton:
    states: tuple
    alphabet: tuple
    edges: frozenset
    initial: Hashable
    terminals: frozenset
    deterministic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        if len(set(self.states)) != len(self.states):
            raise DomainError("duplicate state ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DomainError("duplicate letters in alphabet")
        for a in self.alphabet:
            if not isinstance(a, str) or not a or any(ch.isspace() for ch in a):
                raise DomainError(f"invalid letter {a!r}")
        known = set(self.states)
        if self.initial not in known:
            raise DomainError(f"initial state {self.initial!r} is not a state")
        if not self.terminals <= known:
            raise DomainError("terminal states must be states")
        letters = set(self.alphabet)
        for p, a, q in self.edges:
            if p not in known or q not in known:
                raise DomainError(f"edge {(p, a, q)!r} has an unknown endpoint")
            if a not in letters:
                raise DomainError(f"edge {(p, a, q)!r} has a foreign label")
        if self.deterministic and not self.is_deterministic():
            raise DomainError("automaton flagged deterministic has a branching (state, letter)")

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return (
            self.states == other.states
            and self.alphabet == other.alphabet
            and self.edges == other.edges
            and self.initial == other.initial
            and self.terminals == other.terminals
        )

    def __hash__(self):
        return hash((self.states, self.alphabet, self.edges, self.initial, self.terminals))

    def __repr__(self):
        return (
            f"Automaton({len(self.states)} states, alphabet={list(self.alphabet)}, "
            f"{len(self.edges)} edges, deterministic={self.is_deterministic()})"
        )

    @cached_property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def succ(self) -> dict:
        """``(state, letter) -> tuple of targets`` in state order."""
        table: dict = {}
        for p, a, q in self.edges:
            table.setdefault((p, a), []).append(q)
        idx = self.state_index
        return {k: tuple(sorted(v, key=idx.__getitem__)) for k, v in table.items()}

    @cached_property
    def out_edges(self) -> dict:
        """``state -> [(letter, target)]`` sorted by letter then target order."""
        out: dict = {s: [] for s in self.states}
        for p, a, q in self.edges:
            out[p].append((a, q))
        li, si = self.letter_index, self.state_index
        for s in out:
            out[s].sort(key=lambda e: (li[e[0]], si[e[1]]))
        return out

    def is_deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.succ.values())

    def step(self, subset: Iterable, letter: str) -> frozenset:
        succ = self.succ
        out: set = set()
        for s in subset:
            out.update(succ.get((s, letter), ()))
        return frozenset(out)

    def language_contains(self, w) -> bool:
        return recognize(self, w)


def automaton(states, alphabet, edges, initial, terminals) -> Automaton:
    """Build an automaton, certifying determinism when it holds."""
    m = Automaton(states, alphabet, edges, initial, terminals)
    if m.is_deterministic():
        m = Automaton(m.states, m.alphabet, m.edges, m.initial, m.terminals, True)
    return m


def empty_language(alphabet) -> Automaton:
    return Automaton((0,), alphabet, (), 0, (), True)


def universal(alphabet) -> Automaton:
    return Automaton((0,), alphabet, ((0, a, 0) for a in alphabet), 0, (0,), True)


def from_words(words, alphabet) -> Automaton:
    """Trie automaton of a finite set of words."""
    alphabet = tuple(alphabet)
    nodes = {(): 0}
    edges = []
    terminals = set()
    for w in words:
        w = as_word(w, alphabet)
        for i in range(len(w)):
            if w[: i + 1] not in nodes:
                nodes[w[: i + 1]] = len(nodes)
                edges.append((nodes[w[:i]], w[i], nodes[w[: i + 1]]))
        terminals.add(nodes[w])
    return canonical(trim(Automaton(range(len(nodes)), alphabet, edges, 0, terminals, True)))


# ---------------------------------------------------------------------------
# epsilon-NFA plumbing


def _eps_closures(n: int, eps: Iterable[tuple]) -> list:
    adj: list = [[] for _ in range(n)]
    for p, q in eps:
        adj[p].append(q)
    closures = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            p = stack.pop()
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        closures.append(seen)
    return closures


def _from_eps(n: int, alphabet, edges, eps, initial: int, terminals) -> Automaton:
    """Eliminate epsilon moves from an integer-state epsilon-NFA and trim."""
    closures = _eps_closures(n, eps)
    out: list = [[] for _ in range(n)]
    for p, a, q in edges:
        out[p].append((a, q))
    new_edges = set()
    for p in range(n):
        for r in closures[p]:
            for a, q in out[r]:
                new_edges.add((p, a, q))
    terms = {p for p in range(n) if closures[p] & set(terminals)}
    return trim(Automaton(range(n), alphabet, new_edges, initial, terms))


def _thompson(node, counter: list, edges: list, eps: list):
    def new():
        counter[0] += 1
        return counter[0] - 1

    kind = node[0]
    if kind in ("empty", "eps", "lit"):
        s, f = new(), new()
        if kind == "eps":
            eps.append((s, f))
        elif kind == "lit":
            edges.append((s, node[1], f))
        return s, f
    if kind == "cat":
        s1, f1 = _thompson(node[1], counter, edges, eps)
        s2, f2 = _thompson(node[2], counter, edges, eps)
        eps.append((f1, s2))
        return s1, f2
    if kind == "alt":
        s, f = new(), new()
        for child in node[1:]:
            cs, cf = _thompson(child, counter, edges, eps)
            eps.extend([(s, cs), (cf, f)])
        return s, f
    if kind == "star":
        s, f = new(), new()
        cs, cf = _thompson(node[1], counter, edges, eps)
        eps.extend([(s, cs), (s, f), (cf, cs), (cf, f)])
        return s, f
    raise ValueError(f"unknown regex node {kind!r}")


def build_from_regex(expr: str, alphabet: Sequence[str] | None = None) -> Automaton:
    """Automaton (epsilon-free, trimmed) for a regular expression.

    Without an explicit ``alphabet`` the letters are the characters of
    ``expr`` in order of first appearance.
    """
    tree = _regex.parse(expr, alphabet)
    if alphabet is None:
        alphabet = tuple(_regex.letters_of(tree))
    counter = [0]
    edges: list = []
    eps: list = []
    s, f = _thompson(tree, counter, edges, eps)
    return minimize(_from_eps(counter[0], tuple(alphabet), edges, eps, s, {f}))


# ---------------------------------------------------------------------------
# recognition and enumeration


def _check_letters(m: Automaton, w: Word):
    letters = m.letter_index
    for a in w:
        if a not in letters:
            raise DomainError(f"letter {a!r} is not in the alphabet {list(m.alphabet)}")


def recognize(m: Automaton, w) -> bool:
    w = as_word(w, m.alphabet)
    _check_letters(m, w)
    current = frozenset({m.initial})
    for a in w:
        current = m.step(current, a)
        if not current:
            return False
    return bool(current & m.terminals)


def run(m: Automaton, w) -> list:
    """State sequence of a deterministic automaton on ``w`` (None when stuck)."""
    w = as_word(w, m.alphabet)
    _check_letters(m, w)
    seq = [m.initial]
    for a in w:
        nxt = m.succ.get((seq[-1], a))
        if not nxt:
            return None
        if len(nxt) > 1:
            raise PreconditionError("run() needs a deterministic automaton")
        seq.append(nxt[0])
    return seq


def _coaccessible(m: Automaton) -> set:
    pred: dict = {}
    for p, _, q in m.edges:
        pred.setdefault(q, []).append(p)
    seen = set(m.terminals)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in pred.get(q, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def _accessible(m: Automaton) -> set:
    seen = {m.initial}
    stack = [m.initial]
    while stack:
        p = stack.pop()
        for _, q in m.out_edges[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def enumerate_words(m: Automaton, max_len: int) -> list:
    """Accepted words of length at most ``max_len`` in length-lex order.

    Letters are ordered as in ``m.alphabet``.
    """
    if max_len < 0:
        raise DomainError("max_len must be non-negative")
    live = _coaccessible(m)
    start = frozenset({m.initial}) & live
    out = []
    level = [(EPSILON, start)] if start else []
    for length in range(max_len + 1):
        nxt = []
        for w, subset in level:
            if subset & m.terminals:
                out.append(w)
            if length == max_len:
                continue
            for a in m.alphabet:
                t = m.step(subset, a) & live
                if t:
                    nxt.append((w + (a,), t))
        level = nxt
    return out


def count_words(m: Automaton, n: int) -> int:
    """Number of accepted words of length exactly ``n``."""
    d = determinize(m)
    counts = {d.initial: 1}
    for _ in range(n):
        nxt: dict = {}
        for p, c in counts.items():
            for _, q in d.out_edges[p]:
                nxt[q] = nxt.get(q, 0) + c
        counts = nxt
    return sum(c for p, c in counts.items() if p in d.terminals)


# ---------------------------------------------------------------------------
# trim / determinize


def trim(m: Automaton) -> Automaton:
    """Keep the states lying on an initial-to-terminal path (plus the initial state)."""
    live = _accessible(m) & _coaccessible(m)
    keep = live | {m.initial}
    states = tuple(s for s in m.states if s in keep)
    # an initial state kept only as a placeholder carries no edges
    edges = [(p, a, q) for p, a, q in m.edges if p in live and q in live]
    terminals = m.terminals & keep
    res = Automaton(states, m.alphabet, edges, m.initial, terminals)
    if res.is_deterministic():
        res = Automaton(states, m.alphabet, edges, m.initial, terminals, True)
    return res


def canonical(m: Automaton) -> Automaton:
    """Rename states to 0, 1, ... in breadth-first discovery order."""
    order = {m.initial: 0}
    queue = deque([m.initial])
    while queue:
        p = queue.popleft()
        for _, q in m.out_edges[p]:
            if q not in order:
                order[q] = len(order)
                queue.append(q)
    for s in m.states:
        if s not in order:
            order[s] = len(order)
    edges = [(order[p], a, order[q]) for p, a, q in m.edges]
    return Automaton(
        range(len(order)),
        m.alphabet,
        edges,
        0,
        (order[t] for t in m.terminals),
        m.is_deterministic(),
    )


def determinize(m: Automaton) -> Automaton:
    """Subset construction, trimmed and canonically numbered."""
    start = frozenset({m.initial})
    index = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        subset = queue.popleft()
        for a in m.alphabet:
            t = m.step(subset, a)
            if not t:
                continue
            if t not in index:
                index[t] = len(index)
                queue.append(t)
            edges.append((index[subset], a, index[t]))
    terminals = [i for s, i in index.items() if s & m.terminals]
    d = Automaton(range(len(index)), m.alphabet, edges, 0, terminals, True)
    return canonical(trim(d))


def minimize(m: Automaton) -> Automaton:
    """Minimal trimmed DFA by partition refinement, canonically numbered."""
    start, table = _dfa_table(m)
    states = list(table)
    block = {s: int(bool(s & m.terminals)) for s in states}
    while True:
        sig = {s: (block[s],) + tuple(block[table[s][a]] for a in m.alphabet) for s in states}
        ids: dict = {}
        for s in states:
            ids.setdefault(sig[s], len(ids))
        refined = {s: ids[sig[s]] for s in states}
        stable = len(ids) == len(set(block.values()))
        block = refined
        if stable:
            break
    edges = {(block[s], a, block[table[s][a]]) for s in states for a in m.alphabet}
    terminals = {block[s] for s in states if s & m.terminals}
    d = Automaton(range(len(ids)), m.alphabet, edges, block[start], terminals, True)
    return canonical(trim(d))


def _dfa_table(m: Automaton):
    """Complete subset automaton including the empty (sink) subset."""
    start = frozenset({m.initial})
    table: dict = {}
    queue = deque([start])
    seen = {start}
    while queue:
        subset = queue.popleft()
        row = {}
        for a in m.alphabet:
            t = m.step(subset, a)
            row[a] = t
            if t not in seen:
                seen.add(t)
                queue.append(t)
        table[subset] = row
    return start, table


def _product(a: Automaton, b: Automaton, accept) -> Automaton:
    s1, t1 = _dfa_table(a)
    s2, t2 = _dfa_table(b)
    start = (s1, s2)
    index = {start: 0}
    queue = deque([start])
    edges = []
    terminals = []
    while queue:
        pair = queue.popleft()
        x, y = pair
        if accept(bool(x & a.terminals), bool(y & b.terminals)):
            terminals.append(index[pair])
        for letter in a.alphabet:
            nxt = (t1[x][letter], t2[y][letter])
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            edges.append((index[pair], letter, index[nxt]))
    return Automaton(range(len(index)), a.alphabet, edges, 0, terminals, True)


def _same_alphabet(a: Automaton, b: Automaton):
    if set(a.alphabet) != set(b.alphabet):
        raise DomainError(
            f"alphabet mismatch: {sorted(a.alphabet)} vs {sorted(b.alphabet)}"
        )


def _complement(m: Automaton) -> Automaton:
    start, table = _dfa_table(m)
    index = {s: i for i, s in enumerate(table)}
    edges = [(index[s], a, index[t]) for s, row in table.items() for a, t in row.items()]
    terminals = [index[s] for s in table if not (s & m.terminals)]
    return Automaton(range(len(index)), m.alphabet, edges, index[start], terminals, True)


def _concat(a: Automaton, b: Automaton) -> Automaton:
    ia = {s: i for i, s in enumerate(a.states)}
    off = len(ia)
    ib = {s: off + i for i, s in enumerate(b.states)}
    edges = [(ia[p], x, ia[q]) for p, x, q in a.edges]
    edges += [(ib[p], x, ib[q]) for p, x, q in b.edges]
    eps = [(ia[t], ib[b.initial]) for t in a.terminals]
    terms = [ib[t] for t in b.terminals]
    return _from_eps(off + len(ib), a.alphabet, edges, eps, ia[a.initial], terms)


def _star(a: Automaton) -> Automaton:
    ia = {s: i + 1 for i, s in enumerate(a.states)}
    edges = [(ia[p], x, ia[q]) for p, x, q in a.edges]
    eps = [(0, ia[a.initial])] + [(ia[t], 0) for t in a.terminals]
    return _from_eps(len(ia) + 1, a.alphabet, edges, eps, 0, [0])


class Combine(str, Enum):
    UNION = "union"
    INTERSECTION = "intersection"
    DIFFERENCE = "difference"
    CONCAT = "concat"
    STAR = "star"
    COMPLEMENT = "complement"


def boolean_combine(a: Automaton, b: Automaton | None, mode) -> Automaton:
    """Union, intersection, difference, concatenation, star or complement.

    ``star`` and ``complement`` ignore ``b``. The result is a canonical
    trimmed DFA over ``a``'s alphabet order.
    """
    try:
        mode = Combine(mode)
    except ValueError:
        raise DomainError(f"unknown combine mode {mode!r}") from None
    if mode is Combine.STAR:
        return determinize(_star(a))
    if mode is Combine.COMPLEMENT:
        return determinize(_complement(a))
    if b is None:
        raise DomainError(f"mode {mode.value} needs two automata")
    _same_alphabet(a, b)
    if b.alphabet != a.alphabet:
        b = Automaton(b.states, a.alphabet, b.edges, b.initial, b.terminals)
    if mode is Combine.CONCAT:
        return determinize(_concat(a, b))
    accept = {
        Combine.UNION: lambda x, y: x or y,
        Combine.INTERSECTION: lambda x, y: x and y,
        Combine.DIFFERENCE: lambda x, y: x and not y,
    }[mode]
    return determinize(_product(a, b, accept))


def union(a, b):
    return boolean_combine(a, b, "union")


def intersection(a, b):
    return boolean_combine(a, b, "intersection")


def difference(a, b):
    return boolean_combine(a, b, "difference")


def concat(a, b):
    return boolean_combine(a, b, "concat")


def star(a):
    return boolean_combine(a, None, "star")


def complement(a):
    return boolean_combine(a, None, "complement")


def is_empty(m: Automaton) -> bool:
    return not (_accessible(m) & m.terminals)


def languages_equal(a: Automaton, b: Automaton) -> bool:
    _same_alphabet(a, b)
    if b.alphabet != a.alphabet:
        b = Automaton(b.states, a.alphabet, b.edges, b.initial, b.terminals)
    return is_empty(_product(a, b, lambda x, y: x != y))


def with_alphabet(m: Automaton, alphabet) -> Automaton:
    """Same language viewed over a larger alphabet."""
    alphabet = tuple(alphabet)
    if not set(m.alphabet) <= set(alphabet):
        raise DomainError("new alphabet must contain the old one")
    return Automaton(m.states, alphabet, m.edges, m.initial, m.terminals, m.is_deterministic())


def relabel(m: Automaton, mapping: dict, alphabet=None) -> Automaton:
    """Apply a letter-to-letter map to every edge label."""
    alphabet = tuple(alphabet) if alphabet is not None else tuple(
        dict.fromkeys(mapping.get(a, a) for a in m.alphabet)
    )
    edges = [(p, mapping.get(a, a), q) for p, a, q in m.edges]
    return automaton(m.states, alphabet, edges, m.initial, m.terminals)


def reverse(m: Automaton) -> Automaton:
    """Automaton of the mirrored language (nondeterministic in general)."""
    idx = {s: i + 1 for i, s in enumerate(m.states)}
    edges = [(idx[q], a, idx[p]) for p, a, q in m.edges]
    eps = [(0, idx[t]) for t in m.terminals]
    return _from_eps(len(idx) + 1, m.alphabet, edges, eps, 0, [idx[m.initial]])


# ---------------------------------------------------------------------------
# structure: SCCs, growth, decompositions


def _graph(m: Automaton) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(m.states)
    g.add_edges_from((p, q) for p, _, q in m.edges)
    return g


def strongly_connected(m: Automaton) -> list:
    """SCCs as state tuples, each sorted and listed by first state."""
    idx = m.state_index
    comps = [tuple(sorted(c, key=idx.__getitem__)) for c in nx.strongly_connected_components(_graph(m))]
    comps.sort(key=lambda c: idx[c[0]])
    return comps


def _is_cyclic(m: Automaton, comp) -> bool:
    if len(comp) > 1:
        return True
    s = comp[0]
    return any(q == s for _, q in m.out_edges[s])


def _inner_edges(m: Automaton, comp) -> dict:
    members = set(comp)
    return {s: [(a, q) for a, q in m.out_edges[s] if q in members] for s in comp}


def _bfs_words(m: Automaton, source, allowed=None) -> dict:
    """Shortest (then first in letter order) word from ``source`` to each state."""
    words = {source: EPSILON}
    queue = deque([source])
    while queue:
        p = queue.popleft()
        for a, q in m.out_edges[p]:
            if allowed is not None and q not in allowed:
                continue
            if q not in words:
                words[q] = words[p] + (a,)
                queue.append(q)
    return words


class Growth(str, Enum):
    FINITE = "Finite"
    POLYNOMIAL_BOUNDED = "PolynomialBounded"
    EXPONENTIAL = "Exponential"


@dataclass(frozen=True)
class GrowthReport:
    kind: Growth
    witness: object

    @property
    def cls(self) -> Growth:
        return self.kind


def growth_classify(m: Automaton) -> GrowthReport:
    """Finite / polynomially bounded / exponential, with a checkable witness.

    Finite carries the list of accepted words, PolynomialBounded a list of
    words ``w1..wm`` with ``L`` inside ``w1*...wm*``, Exponential a tuple
    ``(v1, w1, w2, v2)`` with ``v1{w1,w2}*v2`` inside ``L`` and ``w1w2 != w2w1``.
    """
    d = determinize(m)
    comps = [c for c in strongly_connected(d) if _is_cyclic(d, c)]
    if not comps:
        return GrowthReport(Growth.FINITE, enumerate_words(d, len(d.states)))
    for comp in comps:
        inner = _inner_edges(d, comp)
        for p in comp:
            if len(inner[p]) >= 2:
                (x, q1), (y, q2) = inner[p][:2]
                members = set(comp)
                w1 = (x,) + _bfs_words(d, q1, members)[p]
                w2 = (y,) + _bfs_words(d, q2, members)[p]
                v1 = _bfs_words(d, d.initial)[p]
                reach = _bfs_words(d, p)
                v2 = min(
                    (reach[t] for t in d.terminals if t in reach),
                    key=lambda w: (len(w), [d.letter_index[a] for a in w]),
                )
                return GrowthReport(Growth.EXPONENTIAL, (v1, w1, w2, v2))
    return GrowthReport(Growth.POLYNOMIAL_BOUNDED, _bounded_words(d, DEFAULT_PATH_CAP))


def _cycle_from(inner: dict, start) -> list:
    """The unique in-component cycle read from ``start`` as (letter, state) steps."""
    steps = []
    p = start
    while True:
        a, q = inner[p][0]
        steps.append((a, q))
        p = q
        if p == start:
            return steps


def _bounded_words(d: Automaton, cap: int) -> list:
    comps = strongly_connected(d)
    comp_of = {s: i for i, c in enumerate(comps) for s in c}
    cyclic = [_is_cyclic(d, c) for c in comps]
    inner = [_inner_edges(d, c) for c in comps]
    cross: dict = {}
    for p, a, q in d.edges:
        i, j = comp_of[p], comp_of[q]
        if i != j:
            cross.setdefault((i, j), []).append((p, a, q))
    succ: dict = {}
    for i, j in cross:
        succ.setdefault(i, set()).add(j)
    has_terminal = [bool(set(c) & d.terminals) for c in comps]
    li = d.letter_index

    def chain(path: list) -> list:
        words = []
        for pos, ci in enumerate(path):
            if pos == 0:
                entries = [d.initial]
            else:
                entries = sorted({q for _, _, q in cross[(path[pos - 1], ci)]}, key=d.state_index.__getitem__)
            if pos == len(path) - 1:
                exits = [s for s in comps[ci] if s in d.terminals]
            else:
                exits = sorted({p for p, _, _ in cross[(ci, path[pos + 1])]}, key=d.state_index.__getitem__)
            if cyclic[ci]:
                cycles = {e: _cycle_from(inner[ci], e) for e in entries}
                for e in entries:
                    words.append(tuple(a for a, _ in cycles[e]))
                for e in entries:
                    states_on = [e] + [q for _, q in cycles[e]]
                    for x in exits:
                        k = states_on.index(x)
                        if k:
                            words.append(tuple(a for a, _ in cycles[e][:k]))
            if pos < len(path) - 1:
                letters = sorted({a for _, a, _ in cross[(ci, path[pos + 1])]}, key=li.__getitem__)
                words.extend((a,) for a in letters)
        return words

    result: list = []
    count = 0
    stack = [[comp_of[d.initial]]]
    while stack:
        path = stack.pop()
        if has_terminal[path[-1]]:
            count += 1
            if count > cap:
                raise CapacityError(f"more than {cap} condensation paths")
            result.extend(chain(path))
        for j in sorted(succ.get(path[-1], ()), reverse=True):
            stack.append(path + [j])
    merged: list = []
    for w in result:
        if not merged or merged[-1] != w:
            merged.append(w)
    return merged


def bounded_decomposition(m: Automaton, cap: int = DEFAULT_PATH_CAP) -> list:
    """Words ``w1..wm`` with every accepted word in ``w1*...wm*``."""
    d = determinize(m)
    for comp in strongly_connected(d):
        if any(len(v) > 1 for v in _inner_edges(d, comp).values()):
            raise PreconditionError("language has exponential growth; no bounded decomposition")
    return _bounded_words(d, cap)


def in_bounded_product(w: Word, factors: Sequence[Word]) -> bool:
    """Is ``w`` a member of ``factors[0]* factors[1]* ...``?"""
    n = len(w)
    positions = {0}
    for f in factors:
        if not f:
            continue
        frontier = set(positions)
        stack = list(positions)
        while stack:
            i = stack.pop()
            j = i + len(f)
            if j <= n and w[i:j] == f and j not in frontier:
                frontier.add(j)
                stack.append(j)
        positions = frontier
    return n in positions


def pumping_triple(m: Automaton):
    """``(v1, w, v2)`` with ``w`` non-empty and ``v1 w* v2`` accepted, or None."""
    t = trim(m)
    if not t.terminals:
        return None
    cyc = set()
    for comp in strongly_connected(t):
        if _is_cyclic(t, comp):
            cyc.update(comp)
    if not cyc:
        return None
    prefixes = _bfs_words(t, t.initial)
    order = sorted(prefixes, key=lambda s: (len(prefixes[s]), [t.letter_index[a] for a in prefixes[s]]))
    p = next(s for s in order if s in cyc)
    # shortest closed walk at p
    best = None
    back = {}
    queue = deque()
    for a, q in t.out_edges[p]:
        if q == p:
            best = (a,)
            break
        if q not in back:
            back[q] = (a,)
            queue.append(q)
    while best is None and queue:
        r = queue.popleft()
        for a, q in t.out_edges[r]:
            if q == p:
                best = back[r] + (a,)
                break
            if q not in back:
                back[q] = back[r] + (a,)
                queue.append(q)
    reach = _bfs_words(t, p)
    suffix = min(
        (reach[s] for s in t.terminals if s in reach),
        key=lambda w: (len(w), [t.letter_index[a] for a in w]),
    )
    return prefixes[p], best, suffix


# ---------------------------------------------------------------------------
# free reduction


def _check_involution(alphabet, inverse: dict):
    for a in alphabet:
        b = inverse.get(a)
        if b is None or b not in alphabet:
            raise DomainError(f"letter {a!r} has no inverse in the alphabet")
        if b == a:
            raise DomainError(f"letter {a!r} is its own inverse")
        if inverse.get(b) != a:
            raise DomainError(f"pairing is not an involution at {a!r}")


def free_reduce(w, inverse: dict) -> Word:
    out: list = []
    for a in w:
        if out and inverse[out[-1]] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def reduced_words(alphabet, inverse: dict) -> Automaton:
    """DFA of the freely reduced words; the state is the last letter read."""
    alphabet = tuple(alphabet)
    _check_involution(alphabet, inverse)
    states = ("",) + alphabet
    edges = [("", b, b) for b in alphabet]
    edges += [(a, b, b) for a in alphabet for b in alphabet if inverse[a] != b]
    return Automaton(states, alphabet, edges, "", states, True)


def benois_reduce(m: Automaton, inverse_pairs: dict) -> Automaton:
    """Automaton of the free reductions of the words of ``m``."""
    _check_involution(m.alphabet, inverse_pairs)
    idx = m.state_index
    n = len(m.states)
    edges = [(idx[p], a, idx[q]) for p, a, q in m.edges]
    out: list = [[] for _ in range(n)]
    for p, a, q in edges:
        out[p].append((a, q))
    eps: set = set()
    changed = True
    while changed:
        changed = False
        closures = _eps_closures(n, eps)
        for p, x, r in edges:
            xi = inverse_pairs[x]
            for r2 in closures[r]:
                for y, q in out[r2]:
                    if y == xi and p != q and (p, q) not in eps:
                        eps.add((p, q))
                        changed = True
    saturated = _from_eps(
        n, m.alphabet, edges, eps, idx[m.initial], [idx[t] for t in m.terminals]
    )
    red = reduced_words(m.alphabet, inverse_pairs)
    return determinize(_product(saturated, red, lambda x, y: x and y))


# ---------------------------------------------------------------------------
# loop erasure


@dataclass(frozen=True)
class PathDecomposition:
    """Spine letters between distinct states plus the loops erased at each.

    ``loop_counts[i]`` loops (taken in order from ``loops``) are read at
    ``spine_states[i]`` before the spine segment ``spine[i]``.
    """

    spine: tuple
    loops: tuple
    spine_states: tuple
    loop_counts: tuple

    def reassemble(self) -> Word:
        out: list = []
        k = 0
        for i, c in enumerate(self.loop_counts):
            for anchor, word in self.loops[k : k + c]:
                out.extend(word)
            k += c
            if i < len(self.spine):
                out.extend(self.spine[i])
        return tuple(out)


def loop_erase_path(m: Automaton, w) -> PathDecomposition:
    """Split an accepted path into a simple spine and the loops it skips.

    At each newly entered state the walk jumps to the last visit of that
    state; the skipped closed walk is cut at the intermediate visits.
    """
    if not m.is_deterministic():
        raise PreconditionError("loop erasure needs a deterministic automaton")
    w = as_word(w, m.alphabet)
    seq = run(m, w)
    if seq is None or seq[-1] not in m.terminals:
        raise PreconditionError(f"word {show_word(w)!r} is not accepted")
    n = len(w)
    spine, loops, spine_states, counts = [], [], [], []
    i = 0
    while True:
        p = seq[i]
        visits = [j for j in range(i, n + 1) if seq[j] == p]
        for a, b in zip(visits, visits[1:]):
            loops.append((p, w[a:b]))
        counts.append(len(visits) - 1)
        spine_states.append(p)
        last = visits[-1]
        if last == n:
            break
        spine.append((w[last],))
        i = last + 1
    return PathDecomposition(tuple(spine), tuple(loops), tuple(spine_states), tuple(counts))


# ---------------------------------------------------------------------------
# I/O


_FIELDS = ("alphabet", "states", "initial", "terminal", "edges")


def to_json(m: Automaton) -> dict:
    names = {s: str(s) for s in m.states}
    if len(set(names.values())) != len(names):
        raise DomainError("state ids are not distinct as strings")
    order = m.state_index
    li = m.letter_index
    edges = sorted(m.edges, key=lambda e: (order[e[0]], li[e[1]], order[e[2]]))
    return {
        "alphabet": list(m.alphabet),
        "states": [names[s] for s in m.states],
        "initial": names[m.initial],
        "terminal": [names[s] for s in m.states if s in m.terminals],
        "edges": [[names[p], a, names[q]] for p, a, q in edges],
    }


def dumps(m: Automaton) -> str:
    return json.dumps(to_json(m), ensure_ascii=False)


def from_json(doc) -> Automaton:
    if not isinstance(doc, dict):
        raise SchemaError("automaton document must be a JSON object")
    for key in _FIELDS:
        if key not in doc:
            raise SchemaError("missing field", field=key)
    alphabet, states = doc["alphabet"], doc["states"]
    if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
        raise SchemaError("expected a list of strings", field="alphabet")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise SchemaError("expected a list of strings", field="states")
    known = set(states)
    if doc["initial"] not in known:
        raise SchemaError(f"unknown state {doc['initial']!r}", field="initial")
    terminal = doc["terminal"]
    if not isinstance(terminal, list):
        raise SchemaError("expected a list", field="terminal")
    for t in terminal:
        if t not in known:
            raise SchemaError(f"unknown state {t!r}", field="terminal")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise SchemaError("expected a list", field="edges")
    for e in edges:
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError(f"edge {e!r} is not a [source, letter, target] triple", field="edges")
        if e[0] not in known or e[2] not in known:
            raise SchemaError(f"edge {e!r} references an unknown state", field="edges")
        if e[1] not in alphabet:
            raise SchemaError(f"edge {e!r} has a letter outside the alphabet", field="edges")
    try:
        return automaton(states, alphabet, [tuple(e) for e in edges], doc["initial"], terminal)
    except DomainError as exc:
        raise SchemaError(str(exc)) from None


def loads(text: str) -> Automaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno) from None
    return from_json(doc)


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(m: Automaton, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(to_json(m), ensure_ascii=False, indent=1))
        fh.write("\n")


def _dot_id(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(m: Automaton, name: str = "automaton") -> str:
    """Graphviz source; terminals are filled green, the initial state is double-ringed."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for s in m.states:
        attrs = []
        if s == m.initial:
            attrs.append("peripheries=2")
        if s in m.terminals:
            attrs.append("style=filled")
            attrs.append("fillcolor=green")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_id(s)}{suffix};")
    doc = to_json(m)
    for p, a, q in doc["edges"]:
        lines.append(f"  {_dot_id(p)} -> {_dot_id(q)} [label={_dot_id(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
