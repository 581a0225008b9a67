"""Enumeration-based checks of cross-sections, cones and the combinatorial
facts behind them.

Every check is cap-relative: a miss at a cap is reported as such and never
turned into a claim about the infinite object.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import automata as fa
from .automata import Automaton, show_word
from .errors import CapacityError, DomainError, PreconditionError
from .groups import (
    Ball,
    Group,
    HoughtonPerm,
    IntVector,
    WreathPair,
    ball_enumerate,
    crossing_number,
)
from .orders import Cone

CYCLE_CAP = 100_000
WORD_CAP = 1_000_000
RELATION_BUDGET = 1_000_000
DEFAULT_DEPTH_CAP = 8


# ---------------------------------------------------------------------------
# cross-sections


def evaluated_words(m: Automaton, group: Group, max_len: int):
    """Yield ``(word, element)`` for accepted words in length-lex order.

    Evaluation is shared along prefixes.
    """
    for a in m.alphabet:
        if a not in group.generators:
            raise DomainError(f"letter {a!r} is not a generator of {group.name}")
    d = fa.determinize(m)
    level = [((), d.initial, group.identity)]
    for length in range(max_len + 1):
        nxt = []
        for w, s, g in level:
            if s in d.terminals:
                yield w, g
            if length < max_len:
                for a, q in d.out_edges[s]:
                    nxt.append((w + (a,), q, g * group.generators[a]))
        level = nxt


@dataclass
class XSectionReport:
    injective: bool
    collision: tuple | None
    collisions: int
    words: int
    covered: list
    uncovered: list
    multiply_covered: list
    word_cap: int
    ball_radius: int | None
    representatives: dict = field(default_factory=dict, repr=False)

    @property
    def bijective(self) -> bool:
        return self.injective and not self.uncovered and not self.multiply_covered

    def to_json(self, group: Group | None = None) -> dict:
        show = group.show if group is not None else repr
        return {
            "injective": self.injective,
            "collision": [show_word(w) for w in self.collision] if self.collision else None,
            "collisions": self.collisions,
            "words": self.words,
            "covered": len(self.covered),
            "uncovered_at_cap": [show(g) for g in self.uncovered],
            "multiply_covered": [show(g) for g in self.multiply_covered],
            "word_cap": self.word_cap,
            "ball_radius": self.ball_radius,
        }


def check_cross_section(
    lang: Automaton,
    group: Group,
    word_cap: int,
    ball_radius: int | None = None,
    targets: Iterable | None = None,
    word_limit: int = WORD_CAP,
) -> XSectionReport:
    """Collisions among accepted words up to ``word_cap`` and coverage of a target set.

    Targets default to the word-metric ball of ``ball_radius``.
    """
    if targets is None:
        if ball_radius is None:
            raise DomainError("give a ball radius or an explicit target set")
        targets = list(ball_enumerate(group, ball_radius).elements)
    else:
        targets = list(targets)
    first: dict = {}
    collision = None
    collisions = 0
    count = 0
    for w, g in evaluated_words(lang, group, word_cap):
        count += 1
        if count > word_limit:
            raise CapacityError(f"more than {word_limit} accepted words up to length {word_cap}")
        if g in first:
            collisions += 1
            if collision is None:
                collision = (first[g][0], w)
            first[g].append(w)
        else:
            first[g] = [w]
    covered, uncovered, multiple = [], [], []
    for g in targets:
        reps = first.get(g)
        if not reps:
            uncovered.append(g)
        else:
            covered.append(g)
            if len(reps) > 1:
                multiple.append(g)
    return XSectionReport(
        collision is None,
        collision,
        collisions,
        count,
        covered,
        uncovered,
        multiple,
        word_cap,
        ball_radius,
        {g: first.get(g, []) for g in targets},
    )


def lamplighter_box(radius: int) -> list:
    """Elements of C2 wr Z with support and cursor inside ``[-radius, radius]``."""
    from .groups import Cyclic

    points = list(range(-radius, radius + 1))
    out = []
    for mask in range(1 << len(points)):
        lamps = {IntVector((p,)): Cyclic(2, 1) for i, p in enumerate(points) if mask >> i & 1}
        for c in points:
            out.append(WreathPair.build(lamps, IntVector((c,))))
    return out


# ---------------------------------------------------------------------------
# cones


@dataclass
class ConeReport:
    ok: bool
    checked: int
    positives: int
    violations: list

    def to_json(self):
        return {
            "ok": self.ok,
            "checked": self.checked,
            "positives": self.positives,
            "violations": self.violations[:20],
        }


def cone_axioms_check(
    cone: Cone, radius: int, samples: int = 10_000, seed: int = 0, ball: Ball | None = None
) -> ConeReport:
    """Identity excluded, anti-symmetry, trichotomy (when claimed) and closure under products."""
    group = cone.group
    ball = ball if ball is not None else ball_enumerate(group, radius)
    violations = []
    positives = []
    if cone.contains(group.identity):
        violations.append({"axiom": "identity", "element": "e"})
    for g, w in ball.elements.items():
        if g == group.identity:
            continue
        p, n = cone.contains(g), cone.contains(g.inverse())
        if p and n:
            violations.append({"axiom": "antisymmetry", "word": show_word(w)})
        if cone.total and not (p or n):
            violations.append({"axiom": "trichotomy", "word": show_word(w)})
        if p:
            positives.append((g, w))
    rng = random.Random(seed)
    if positives:
        for _ in range(samples):
            (g, u), (h, v) = rng.choice(positives), rng.choice(positives)
            if not cone.contains(g * h):
                violations.append({"axiom": "product", "words": [show_word(u), show_word(v)]})
    return ConeReport(not violations, len(ball), len(positives), violations)


@dataclass
class ConeLanguageReport:
    sound: bool
    injective: bool
    missed: list
    words: int

    @property
    def ok(self):
        return self.sound and self.injective and not self.missed


def cone_language_check(cone: Cone, word_cap: int, radius: int, hit_cap: int | None = None) -> ConeLanguageReport:
    """Accepted words evaluate into the cone, injectively; positives of a ball are hit."""
    if cone.language is None:
        raise DomainError(f"cone {cone.name!r} has no language")
    group = cone.group
    hit_cap = word_cap if hit_cap is None else hit_cap
    seen = set()
    sound = injective = True
    count = 0
    for w, g in evaluated_words(cone.language, group, max(word_cap, hit_cap)):
        if len(w) <= word_cap:
            count += 1
            if not cone.contains(g):
                sound = False
            if g in seen:
                injective = False
        seen.add(g)
    ball = ball_enumerate(group, radius)
    missed = [w for g, w in ball.elements.items() if cone.contains(g) and g not in seen]
    return ConeLanguageReport(sound, injective, missed, count)


# ---------------------------------------------------------------------------
# loop weights


@dataclass
class PvComponent:
    states: tuple
    classification: str
    weights: list
    cycles: int


@dataclass
class PvReport:
    components: list

    @property
    def has_mixed(self) -> bool:
        return any(c.classification == "mixed" for c in self.components)

    def to_json(self):
        return [
            {
                "states": [str(s) for s in c.states],
                "classification": c.classification,
                "weights": c.weights,
                "cycles": c.cycles,
            }
            for c in self.components
        ]


def simple_cycles(m: Automaton, comp: Sequence, cap: int = CYCLE_CAP) -> list:
    """Labelled simple cycles inside ``comp``; each is rooted at its least state."""
    order = {s: i for i, s in enumerate(comp)}
    members = set(comp)
    out = []
    for root in comp:
        r = order[root]
        stack = [(root, (), frozenset([root]))]
        while stack:
            p, word, visited = stack.pop()
            for a, q in reversed(m.out_edges[p]):
                if q not in members or order[q] < r:
                    continue
                if q == root:
                    out.append(word + (a,))
                    if len(out) > cap:
                        raise CapacityError(f"more than {cap} simple cycles; partial weights: {out[:10]}")
                elif q not in visited:
                    stack.append((q, word + (a,), visited | {q}))
    return out


def classify_weights(weights) -> str:
    ws = set(weights)
    if ws and all(w > 0 for w in ws):
        return "strictly_positive"
    if ws and all(w < 0 for w in ws):
        return "strictly_negative"
    if ws == {0}:
        return "zero_only"
    return "mixed"


def pv_analysis(m: Automaton, pi: dict, cap: int = CYCLE_CAP) -> PvReport:
    """Sign pattern of the projected weights of simple cycles, per cyclic SCC."""
    t = fa.trim(m)
    comps = []
    for comp in fa.strongly_connected(t):
        cycles = simple_cycles(t, comp, cap)
        if not cycles:
            continue
        weights = sorted({sum(pi[a] for a in w) for w in cycles})
        comps.append(PvComponent(comp, classify_weights(weights), weights, len(cycles)))
    return PvReport(comps)


# ---------------------------------------------------------------------------
# S-sets and power containment over Z-projected groups


def projection(g) -> int:
    """The Z-coordinate: cursor of a wreath product over Z, or the eventual shift in H2."""
    if isinstance(g, HoughtonPerm):
        return g.shift
    if isinstance(g, WreathPair):
        return g.cursor.coords[0]
    if isinstance(g, IntVector) and len(g.coords) == 1:
        return g.coords[0]
    raise DomainError(f"no projection onto Z for {type(g).__name__}")


def unit_translation(g):
    if isinstance(g, HoughtonPerm):
        return HoughtonPerm(1)
    if isinstance(g, WreathPair):
        return WreathPair((), IntVector((1,)))
    if isinstance(g, IntVector):
        return IntVector((1,))
    raise DomainError(f"no translation for {type(g).__name__}")


def _tpow(g, n: int):
    t = unit_translation(g)
    if n < 0:
        t, n = t.inverse(), -n
    out = t * t.inverse()
    for _ in range(n):
        out = out * t
    return out


def fiber(g):
    """``h(g) = g · t^-π(g)``."""
    return g * _tpow(g, -projection(g))


@dataclass
class SSet:
    J: int
    S: tuple
    m: int
    length_bound: int


def language_sset(m: Automaton, group: Group, word_limit: int = WORD_CAP) -> SSet:
    """Finite set S with e ∈ S such that the language evaluates into ((St)*(St⁻¹)*)^m."""
    pi = {a: projection(group.generators[a]) for a in m.alphabet}
    t = fa.trim(m)
    if pv_analysis(t, pi).has_mixed:
        raise PreconditionError("an SCC mixes ascending and descending loops")
    J = max((abs(v) for v in pi.values()), default=0)
    found = {fiber(group.generators[a]) for a in t.alphabet}
    found.add(group.identity)
    bound = 0
    total = 0
    for comp in fa.strongly_connected(t):
        k = len(comp)
        limit = J * k * k + k
        bound = max(bound, limit)
        members = set(comp)
        for start in comp:
            stack = [(start, 0, group.identity, 0)]
            while stack:
                p, length, g, h = stack.pop()
                total += 1
                if total > word_limit:
                    raise CapacityError(f"more than {word_limit} loop words")
                if length and abs(h) <= J:
                    found.add(fiber(g))
                if length + 1 >= limit:
                    continue
                for a, q in t.out_edges[p]:
                    if q in members:
                        stack.append((q, length + 1, g * group.generators[a], h + pi[a]))
    S = tuple(sorted(found, key=lambda g: g.key()))
    return SSet(J, S, 2 * len(t.states) - 1, bound)


@dataclass(frozen=True)
class ThreeValued:
    value: str  # "yes", "yes_witness" or "no_within_bounds"
    witness: tuple = ()

    def __bool__(self):
        return self.value != "no_within_bounds"


def reassemble(witness, identity, t):
    g = identity
    ti = t.inverse()
    for s, sign in witness:
        g = g * s * (t if sign > 0 else ti)
    return g


def _width(S) -> int | None:
    pts = []
    for s in S:
        if not isinstance(s, HoughtonPerm):
            return None
        pts += [x for x, _ in s.moves]
    return max(pts) - min(pts) if pts else 0


def bounded_power_membership(g, S, m: int, depth_cap: int = DEFAULT_DEPTH_CAP) -> ThreeValued:
    """Search for ``g`` in ``((St)*(St⁻¹)*)^m`` using at most ``depth_cap`` factors.

    For H2 inputs the crossing-number bound ``c ≤ (runs left)·(b − a)`` prunes
    states that cannot reach ``g``.
    """
    S = list(S)
    identity = g * g.inverse()
    if g == identity:
        return ThreeValued("yes", ())
    t = unit_translation(g)
    ti = t.inverse()
    steps = {1: [(s, s * t) for s in S], -1: [(s, s * ti) for s in S]}
    target_pi = projection(g)
    width = _width(S)

    def runs_left(block, phase):
        return (2 - phase) + 2 * (m - 1 - block)

    def hopeless(x, block, phase, used):
        if abs(target_pi - projection(x)) > depth_cap - used:
            return True
        if width is not None:
            return crossing_number(x.inverse() * g) > runs_left(block, phase) * width
        return False

    # phase 0 = ascending, 1 = descending; a block may switch to descending or to the next block
    start = (identity, 0, 0)
    if hopeless(identity, 0, 0, 0):
        return ThreeValued("no_within_bounds")
    parent = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        state, used = frontier.popleft()
        x, block, phase = state
        if used == depth_cap:
            continue
        moves = []
        if phase == 0:
            moves.append((block, 0, 1))
            moves.append((block, 1, -1))
        else:
            moves.append((block, 1, -1))
        if block + 1 < m:
            moves.append((block + 1, 0, 1))
            moves.append((block + 1, 1, -1))
        for nb, nphase, sign in moves:
            for s, step in steps[sign]:
                y = x * step
                nxt = (y, nb, nphase)
                if nxt in parent or hopeless(y, nb, nphase, used + 1):
                    continue
                parent[nxt] = (state, (s, sign))
                if y == g:
                    witness = []
                    cur = nxt
                    while parent[cur] is not None:
                        cur, factor = parent[cur]
                        witness.append(factor)
                    witness.reverse()
                    assert reassemble(witness, identity, t) == g
                    return ThreeValued("yes_witness", tuple(witness))
                frontier.append((nxt, used + 1))
    return ThreeValued("no_within_bounds")


def sample_power_element(S, m: int, depth: int, rng: random.Random, identity=None):
    """Random element of ``((St)*(St⁻¹)*)^m`` with at most ``depth`` factors in total."""
    S = list(S)
    t = unit_translation(S[0])
    ti = t.inverse()
    g = identity if identity is not None else S[0] * S[0].inverse()
    budget = depth
    for _ in range(m):
        for step in (t, ti):
            k = rng.randint(0, budget)
            budget -= k
            for _ in range(k):
                g = g * rng.choice(S) * step
    return g


def sym_interval(a: int, b: int) -> list:
    """All permutations of ``{a, ..., b}`` as H2 elements fixing everything else."""
    pts = list(range(a, b + 1))
    return [HoughtonPerm(0, tuple(zip(pts, perm))) for perm in itertools.permutations(pts)]


# ---------------------------------------------------------------------------
# positive relations


def substitute(word: str, x, y, identity):
    g = identity
    for ch in word:
        g = g * (x if ch == "x" else y)
    return g


def relation_equalize(v1: str, v2: str) -> tuple:
    """Equal-length distinct pair implied by ``v1 = v2``: ``(v1 z v2, v2 z v1)``.

    The separator ``z`` is chosen to differ from the longer word at the first
    position past the shorter one, which keeps the two outputs distinct.
    """
    for ch in v1 + v2:
        if ch not in "xy":
            raise DomainError("relation words are over x and y")
    if v1 == v2:
        raise DomainError("the two sides of a relation must differ")
    if len(v1) == len(v2):
        return v1, v2
    short, long_ = (v1, v2) if len(v1) < len(v2) else (v2, v1)
    z = "y" if long_[len(short)] == "x" else "x"
    return v1 + z + v2, v2 + z + v1


def find_relation(x, y, budget: int = RELATION_BUDGET) -> tuple:
    """Distinct equal-length positive words in x, y with the same value."""
    if x * y == y * x:
        return "xy", "yx"
    identity = x * x.inverse()
    used = 0
    level = {"": identity}
    for _ in itertools.count(1):
        seen: dict = {}
        nxt = {}
        for w, g in level.items():
            for ch, h in (("x", x), ("y", y)):
                v = w + ch
                val = g * h
                used += 1
                if used > budget:
                    raise CapacityError(f"no relation within {budget} words")
                if val in seen:
                    return seen[val], v
                seen[val] = v
                nxt[v] = val
        level = nxt


def _substitute_words(w: str, u1: str, u2: str) -> str:
    return "".join(u1 if ch == "x" else u2 for ch in w)


def relation_combine(pair1, pair2, finder1=find_relation, finder2=find_relation) -> tuple:
    """Positive relation for ``x = (g1, h1)``, ``y = (g2, h2)`` in a direct product."""
    (g1, h1), (g2, h2) = pair1, pair2
    u1, u2 = finder1(g1, g2)
    if len(u1) != len(u2):
        u1, u2 = relation_equalize(u1, u2)
    e2 = h1 * h1.inverse()
    k1, k2 = substitute(u1, h1, h2, e2), substitute(u2, h1, h2, e2)
    v1, v2 = finder2(k1, k2)
    if len(v1) != len(v2):
        v1, v2 = relation_equalize(v1, v2)
    w1, w2 = _substitute_words(v1, u1, u2), _substitute_words(v2, u1, u2)
    e1 = g1 * g1.inverse()
    ok = (
        w1 != w2
        and len(w1) == len(w2)
        and substitute(w1, g1, g2, e1) == substitute(w2, g1, g2, e1)
        and substitute(w1, h1, h2, e2) == substitute(w2, h1, h2, e2)
    )
    if not ok:
        raise AssertionError("combined relation failed verification")
    return w1, w2


def _order(q, cap: int) -> int:
    p = q
    for n in range(1, cap + 1):
        if p.is_identity:
            return n
        p = p * q
    raise PreconditionError(f"image has no finite order up to {cap}; quotient not torsion")


def torsion_extension_relation(g1, g2, quotient: Callable, finder=find_relation, order_cap: int = 1000) -> tuple:
    """Relation between ``g1, g2`` from relations of ``g1^n1, g2^n2`` in the kernel."""
    n1, n2 = _order(quotient(g1), order_cap), _order(quotient(g2), order_cap)
    identity = g1 * g1.inverse()
    k1 = substitute("x" * n1, g1, g1, identity)
    k2 = substitute("y" * n2, g2, g2, identity)
    v1, v2 = finder(k1, k2)
    w1 = "".join("x" * n1 if ch == "x" else "y" * n2 for ch in v1)
    w2 = "".join("x" * n1 if ch == "x" else "y" * n2 for ch in v2)
    if w1 == w2 or substitute(w1, g1, g2, identity) != substitute(w2, g1, g2, identity):
        raise AssertionError("torsion-extension relation failed verification")
    return w1, w2
