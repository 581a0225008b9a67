"""Independent oracles shared by the test modules."""

import itertools
import random
import re


def random_regex_tree(rng: random.Random, alphabet, depth: int):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.06:
            return ("eps",)
        if r < 0.09:
            return ("empty",)
        return ("lit", rng.choice(alphabet))
    op = rng.choice(("cat", "alt", "star", "cat", "alt"))
    if op == "star":
        return ("star", random_regex_tree(rng, alphabet, depth - 1))
    return (op, random_regex_tree(rng, alphabet, depth - 1), random_regex_tree(rng, alphabet, depth - 1))


def render(tree) -> str:
    """Tree to the library's concrete syntax (fully parenthesised)."""
    kind = tree[0]
    if kind == "eps":
        return "ε"
    if kind == "empty":
        return "∅"
    if kind == "lit":
        return tree[1]
    if kind == "star":
        return "(" + render(tree[1]) + ")*"
    sep = "|" if kind == "alt" else ""
    return "(" + render(tree[1]) + sep + render(tree[2]) + ")"


def to_python_re(tree) -> str:
    kind = tree[0]
    if kind == "eps":
        return "(?:)"
    if kind == "empty":
        return "(?!)"
    if kind == "lit":
        return re.escape(tree[1])
    if kind == "star":
        return "(?:" + to_python_re(tree[1]) + ")*"
    if kind == "alt":
        return "(?:" + to_python_re(tree[1]) + "|" + to_python_re(tree[2]) + ")"
    return "(?:" + to_python_re(tree[1]) + to_python_re(tree[2]) + ")"


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            yield w


def brute_language(m, max_len):
    """Accepted words by explicit simulation of the NFA on every word."""
    out = set()
    for w in all_words(m.alphabet, max_len):
        cur = {m.initial}
        for a in w:
            cur = {q for p in cur for b, q in m.out_edges[p] if b == a}
        if cur & set(m.terminals):
            out.add(w)
    return out


def random_automaton(rng: random.Random, n_states: int, alphabet, density=0.35, terminal_p=0.4):
    from ratsec.automata import automaton

    states = list(range(n_states))
    edges = [
        (p, a, q) for p in states for a in alphabet for q in states if rng.random() < density / n_states * 2
    ]
    terminals = [s for s in states if rng.random() < terminal_p] or [rng.choice(states)]
    return automaton(states, alphabet, edges, 0, terminals)


def free_reduce(word, inverse):
    out = []
    for a in word:
        if out and inverse[out[-1]] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cancelling_pairs(m, inverse):
    """State pairs (p, q) joined by a path whose label freely reduces to the empty word."""
    states = list(m.states)
    rel = {(p, p) for p in states}
    changed = True
    while changed:
        changed = False
        new = set()
        for p, x, p2 in m.edges:
            for q2, y, q in m.edges:
                if y == inverse[x] and (p2, q2) in rel:
                    new.add((p, q))
        for p, q in list(rel):
            for q2, r in list(rel):
                if q == q2:
                    new.add((p, r))
        if not new <= rel:
            rel |= new
            changed = True
    return rel


def reductions_upto(m, inverse, k):
    """Exact set of reduced words of length <= k that are reductions of accepted words."""
    rel = cancelling_pairs(m, inverse)

    def close(S):
        return frozenset(q for p in S for (p2, q) in rel if p2 == p)

    out = set()
    stack = [((), close({m.initial}))]
    while stack:
        r, S = stack.pop()
        if S & set(m.terminals):
            out.add(r)
        if len(r) == k:
            continue
        for a in m.alphabet:
            if r and inverse[r[-1]] == a:
                continue
            T = close({q for p, b, q in m.edges if b == a and p in S})
            if T:
                stack.append((r + (a,), T))
    return out
