"""Exact arithmetic in a handful of concrete groups.

Every element type is an immutable value with ``*``, ``inverse()``,
``is_identity`` and a sortable ``key()``; equal elements have equal
canonical fields, so ``==`` and hashing are exact. A :class:`Group` ties
elements to an alphabet: each letter names a generator and words evaluate
left to right, ``ev(uv) = ev(u) * ev(v)``.

Permutations compose as functions, ``(s * t)(x) = s(t(x))``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .automata import as_word, free_reduce, show_word
from .errors import CapacityError, DomainError

DEFAULT_BALL_CAP = 1_000_000


# ---------------------------------------------------------------------------
# element types


@dataclass(frozen=True)
class FreeWord:
    """Reduced word in a free group; letters are ``(generator index, ±1)``."""

    rank: int
    syllables: tuple = ()

    def __mul__(self, other):
        _same(self, other)
        out = list(self.syllables)
        for g, e in other.syllables:
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        return FreeWord(self.rank, tuple(out))

    def inverse(self):
        return FreeWord(self.rank, tuple((g, -e) for g, e in reversed(self.syllables)))

    @property
    def is_identity(self):
        return not self.syllables

    def key(self):
        return (len(self.syllables), self.syllables)


@dataclass(frozen=True)
class IntVector:
    coords: tuple

    def __mul__(self, other):
        _same(self, other)
        return IntVector(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def inverse(self):
        return IntVector(tuple(-x for x in self.coords))

    @property
    def is_identity(self):
        return not any(self.coords)

    def key(self):
        return self.coords

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class Cyclic:
    order: int
    value: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.order)

    def __mul__(self, other):
        _same(self, other)
        return Cyclic(self.order, self.value + other.value)

    def inverse(self):
        return Cyclic(self.order, -self.value)

    @property
    def is_identity(self):
        return self.value == 0

    def key(self):
        return (self.value,)


@dataclass(frozen=True)
class FinitePerm:
    """Permutation of ``0..n-1`` stored as its image tuple."""

    images: tuple

    def __mul__(self, other):
        _same(self, other)
        return FinitePerm(tuple(self.images[other.images[x]] for x in range(len(self.images))))

    def inverse(self):
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return FinitePerm(tuple(inv))

    @property
    def is_identity(self):
        return all(x == y for x, y in enumerate(self.images))

    def key(self):
        return self.images


@dataclass(frozen=True)
class BSAffine:
    """Element ``(r, k)`` of BS(1,n) acting on ``Z[1/n]`` by ``x ↦ n^-k·x + r``.

    With ``a = (1, 0)`` and ``t = (0, 1)`` this satisfies ``t⁻¹at = aⁿ``.
    """

    n: int
    r: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        den = self.r.denominator
        while den % self.n == 0:
            den //= self.n
        if den != 1:
            raise DomainError(f"{self.r} is not an n-adic rational for n={self.n}")

    def _scale(self, k):
        return Fraction(self.n) ** (-k)

    def __mul__(self, other):
        _same(self, other)
        return BSAffine(self.n, self.r + self._scale(self.k) * other.r, self.k + other.k)

    def inverse(self):
        return BSAffine(self.n, -self.r / self._scale(self.k), -self.k)

    @property
    def is_identity(self):
        return self.r == 0 and self.k == 0

    def key(self):
        return (self.k, self.r)


@dataclass(frozen=True)
class WreathPair:
    """Element ``(f, q)`` of a restricted wreath product ``L wr Q``.

    ``lamps`` lists ``(position, lamp value)`` pairs with non-identity values,
    sorted by position key. The product is
    ``(f1, q1)(f2, q2) = (f1 · f2(q1⁻¹ ·), q1 q2)``.
    """

    lamps: tuple
    cursor: object

    def lamp_map(self) -> dict:
        return dict(self.lamps)

    @staticmethod
    def build(lamps: dict, cursor) -> "WreathPair":
        items = [(s, v) for s, v in lamps.items() if not v.is_identity]
        items.sort(key=lambda sv: sv[0].key())
        return WreathPair(tuple(items), cursor)

    def __mul__(self, other):
        _same(self, other)
        f = self.lamp_map()
        for s, v in other.lamps:
            pos = self.cursor * s
            f[pos] = f[pos] * v if pos in f else v
        return WreathPair.build(f, self.cursor * other.cursor)

    def inverse(self):
        qi = self.cursor.inverse()
        return WreathPair.build({qi * s: v.inverse() for s, v in self.lamps}, qi)

    @property
    def is_identity(self):
        return not self.lamps and self.cursor.is_identity

    def key(self):
        return (self.cursor.key(), tuple((s.key(), v.key()) for s, v in self.lamps))

    def support(self) -> list:
        return [s for s, _ in self.lamps]


@dataclass(frozen=True)
class HoughtonPerm:
    """Bijection ``σ`` of Z with ``σ(x) = x + shift`` off a finite set.

    ``moves`` holds the exceptional pairs ``(x, σ(x))`` sorted by ``x``.
    """

    shift: int = 0
    moves: tuple = ()

    def __post_init__(self):
        moves = tuple(sorted((int(x), int(y)) for x, y in self.moves if y != x + self.shift))
        object.__setattr__(self, "moves", moves)
        dom = {x for x, _ in moves}
        img = {y for _, y in moves}
        if len(img) != len(moves) or img != {x + self.shift for x in dom}:
            raise DomainError("exception map does not extend to a bijection of Z")

    @staticmethod
    def from_map(mapping: dict, shift: int = 0) -> "HoughtonPerm":
        return HoughtonPerm(shift, tuple(mapping.items()))

    def __call__(self, x: int) -> int:
        for a, b in self.moves:
            if a == x:
                return b
        return x + self.shift

    def _inv_point(self, y: int) -> int:
        for a, b in self.moves:
            if b == y:
                return a
        return y - self.shift

    def __mul__(self, other):
        _same(self, other)
        candidates = {x for x, _ in other.moves}
        candidates.update(other._inv_point(y) for y, _ in self.moves)
        shift = self.shift + other.shift
        table = {}
        for x in candidates:
            y = self(other(x))
            if y != x + shift:
                table[x] = y
        return HoughtonPerm(shift, tuple(table.items()))

    def inverse(self):
        return HoughtonPerm(-self.shift, tuple((b, a) for a, b in self.moves))

    @property
    def is_identity(self):
        return self.shift == 0 and not self.moves

    def key(self):
        return (self.shift, self.moves)

    def support(self) -> list:
        """Points moved by ``g · t^-shift`` (the finitary part)."""
        h = translation_part(self)[0]
        return [x for x, _ in h.moves]


@dataclass(frozen=True)
class Pair:
    """Element of a direct product."""

    left: object
    right: object

    def __mul__(self, other):
        _same(self, other)
        return Pair(self.left * other.left, self.right * other.right)

    def inverse(self):
        return Pair(self.left.inverse(), self.right.inverse())

    @property
    def is_identity(self):
        return self.left.is_identity and self.right.is_identity

    def key(self):
        return (self.left.key(), self.right.key())


def _family(x):
    if isinstance(x, FreeWord):
        return ("free", x.rank)
    if isinstance(x, IntVector):
        return ("lattice", len(x.coords))
    if isinstance(x, Cyclic):
        return ("cyclic", x.order)
    if isinstance(x, FinitePerm):
        return ("sym", len(x.images))
    if isinstance(x, BSAffine):
        return ("bs", x.n)
    if isinstance(x, WreathPair):
        return ("wreath",)
    if isinstance(x, HoughtonPerm):
        return ("houghton",)
    if isinstance(x, Pair):
        return ("pair",)
    return (type(x).__name__,)


def _same(x, y):
    if type(x) is not type(y) or _family(x) != _family(y):
        raise DomainError(f"cannot combine elements of {_family(x)} and {_family(y)}")


def group_arith(x, y=None, op: str = "mul"):
    """``mul``, ``inv`` or ``eq`` on elements of one backend."""
    if op == "inv":
        return x.inverse()
    if y is None:
        raise DomainError(f"operation {op!r} needs two elements")
    _same(x, y)
    if op == "mul":
        return x * y
    if op == "eq":
        return x == y
    raise DomainError(f"unknown operation {op!r}")


def power(x, n: int):
    base = x if n >= 0 else x.inverse()
    out = identity_like(x)
    for _ in range(abs(n)):
        out = out * base
    return out


def commutator(x, y):
    return x.inverse() * y.inverse() * x * y


def identity_like(x):
    return x * x.inverse()


# ---------------------------------------------------------------------------
# groups with alphabets


@dataclass
class Group:
    """A group backend together with a generating alphabet.

    ``inverse_letter`` pairs each letter with a letter for the inverse
    generator (self-paired for involutions).
    """

    name: str
    letters: tuple
    generators: dict
    identity: object
    inverse_letter: dict
    kind: str = ""
    params: dict = field(default_factory=dict)
    to_word: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        self.letters = tuple(self.letters)
        if len(set(self.letters)) != len(self.letters):
            raise DomainError("generator letters must be distinct")
        for a in self.letters:
            b = self.inverse_letter[a]
            if self.generators[a] * self.generators[b] != self.identity:
                raise DomainError(f"letters {a!r} and {b!r} are not mutually inverse")

    def evaluate(self, w) -> object:
        w = as_word(w, self.letters)
        g = self.identity
        gens = self.generators
        for a in w:
            try:
                g = g * gens[a]
            except KeyError:
                raise DomainError(f"letter {a!r} is not a generator of {self.name}") from None
        return g

    def gen(self, a):
        return self.generators[a]

    def invert_word(self, w) -> tuple:
        w = as_word(w, self.letters)
        return tuple(self.inverse_letter[a] for a in reversed(w))

    def word_for(self, g):
        """A word for ``g`` when the backend has a normal-form writer."""
        if self.to_word is None:
            raise DomainError(f"{self.name} has no normal-form writer")
        return self.to_word(g)

    def show(self, g) -> str:
        if isinstance(g, HoughtonPerm):
            return format_cycles(g)
        if self.to_word is not None:
            return show_word(self.to_word(g))
        return repr(g)


def evaluate_word(group: Group, w):
    return group.evaluate(w)


_LATTICE_LETTERS = {1: ["t"], 2: ["s", "t"], 3: ["r", "s", "t"]}


def _pairs(lowers: Sequence[str]):
    letters, inv = [], {}
    for a in lowers:
        b = a.upper() if a.upper() != a else a + "'"
        letters += [a, b]
        inv[a], inv[b] = b, a
    return letters, inv


def lattice(d: int) -> Group:
    if d < 1:
        raise DomainError("dimension must be positive")
    lowers = _LATTICE_LETTERS.get(d) or [f"x{i + 1}" for i in range(d)]
    letters, inv = _pairs(lowers)
    gens = {}
    for i, a in enumerate(lowers):
        e = [0] * d
        e[i] = 1
        gens[a] = IntVector(tuple(e))
        gens[inv[a]] = gens[a].inverse()

    def to_word(v):
        out = []
        for i, x in enumerate(v.coords):
            out += [lowers[i] if x > 0 else inv[lowers[i]]] * abs(x)
        return tuple(out)

    name = "Z" if d == 1 else f"Z^{d}"
    return Group(name, letters, gens, IntVector((0,) * d), inv, "lattice", {"d": d}, to_word)


def free_group(rank: int) -> Group:
    if rank < 1:
        raise DomainError("rank must be positive")
    lowers = [chr(ord("a") + i) for i in range(rank)] if rank <= 26 else [f"g{i}" for i in range(rank)]
    letters, inv = _pairs(lowers)
    gens = {}
    for i, a in enumerate(lowers):
        gens[a] = FreeWord(rank, ((i, 1),))
        gens[inv[a]] = FreeWord(rank, ((i, -1),))

    def to_word(g):
        return tuple(lowers[i] if e > 0 else inv[lowers[i]] for i, e in g.syllables)

    return Group(f"F{rank}", letters, gens, FreeWord(rank), inv, "free", {"rank": rank}, to_word)


def baumslag_solitar(n: int) -> Group:
    if n < 2:
        raise DomainError("BS(1,n) needs n >= 2")
    gens = {
        "a": BSAffine(n, Fraction(1), 0),
        "A": BSAffine(n, Fraction(-1), 0),
        "t": BSAffine(n, Fraction(0), 1),
        "T": BSAffine(n, Fraction(0), -1),
    }
    inv = {"a": "A", "A": "a", "t": "T", "T": "t"}
    return Group(f"BS(1,{n})", ("a", "A", "t", "T"), gens, BSAffine(n, Fraction(0), 0), inv, "bs", {"n": n})


def trivial_group() -> Group:
    return Group("1", (), {}, Cyclic(1, 0), {}, "trivial", {}, lambda g: ())


def cyclic(q: int) -> Group:
    if q < 2:
        raise DomainError("cyclic group order must be at least 2")
    if q == 2:
        gens = {"a": Cyclic(2, 1)}
        inv = {"a": "a"}
    else:
        gens = {"a": Cyclic(q, 1), "A": Cyclic(q, -1)}
        inv = {"a": "A", "A": "a"}

    def to_word(g):
        return ("a",) * g.value

    return Group(f"C{q}", tuple(gens), gens, Cyclic(q, 0), inv, "cyclic", {"q": q}, to_word)


def symmetric(q: int) -> Group:
    if q < 2:
        raise DomainError("symmetric group degree must be at least 2")
    swap = list(range(q))
    swap[0], swap[1] = 1, 0
    cycle = tuple((x + 1) % q for x in range(q))
    gens = {"s": FinitePerm(tuple(swap)), "c": FinitePerm(cycle)}
    gens["C"] = gens["c"].inverse()
    inv = {"s": "s", "c": "C", "C": "c"}
    return Group(f"Sym{q}", ("s", "c", "C"), gens, FinitePerm(tuple(range(q))), inv, "sym", {"q": q})


def direct_product(g1: Group, g2: Group) -> Group:
    clash = set(g1.letters) & set(g2.letters)
    if clash:
        raise DomainError(f"letter clash in direct product: {sorted(clash)}")
    gens = {a: Pair(g1.generators[a], g2.identity) for a in g1.letters}
    gens.update({a: Pair(g1.identity, g2.generators[a]) for a in g2.letters})
    inv = {**g1.inverse_letter, **g2.inverse_letter}
    return Group(
        f"{g1.name}x{g2.name}",
        g1.letters + g2.letters,
        gens,
        Pair(g1.identity, g2.identity),
        inv,
        "product",
        {"left": g1, "right": g2},
    )


def wreath(lamp: Group, base: Group) -> Group:
    """``lamp wr base``; lamp letters become a, A, b, B, ... and base letters are kept."""
    lamp_lowers = []
    for a in lamp.letters:
        if a not in lamp_lowers and lamp.inverse_letter[a] not in lamp_lowers:
            lamp_lowers.append(a)
    rename: dict = {}
    for i, a in enumerate(lamp_lowers):
        new = chr(ord("a") + i)
        rename[a] = new
        b = lamp.inverse_letter[a]
        if b != a:
            rename[b] = new.upper()
    clash = set(rename.values()) & set(base.letters)
    if clash:
        raise DomainError(f"letter clash between lamp and base alphabets: {sorted(clash)}")
    e = base.identity
    gens = {rename[a]: WreathPair.build({e: lamp.generators[a]}, e) for a in lamp.letters}
    gens.update({b: WreathPair((), base.generators[b]) for b in base.letters})
    inv = {rename[a]: rename[lamp.inverse_letter[a]] for a in lamp.letters}
    inv.update(base.inverse_letter)
    letters = tuple(rename[a] for a in lamp.letters) + base.letters
    to_word = None
    if lamp.to_word is not None and base.to_word is not None:

        def to_word(g):
            # visit lamps left to right, then move to the cursor
            out: list = []
            here = e
            for s, v in g.lamps:
                out += base.to_word(here.inverse() * s)
                out += [rename[a] for a in lamp.to_word(v)]
                here = s
            out += base.to_word(here.inverse() * g.cursor)
            return tuple(out)

    return Group(
        f"wr({lamp.name},{base.name})",
        letters,
        gens,
        WreathPair((), e),
        inv,
        "wreath",
        {"lamp": lamp, "base": base, "rename": rename},
        to_word,
    )


def lamplighter() -> Group:
    return wreath(cyclic(2), lattice(1))


def houghton2() -> Group:
    """H₂ generated by the transposition a = (1 2) and the translation t(x) = x + 1."""
    a = HoughtonPerm(0, ((1, 2), (2, 1)))
    t = HoughtonPerm(1)
    gens = {"a": a, "t": t, "T": t.inverse()}
    inv = {"a": "a", "t": "T", "T": "t"}
    return Group("H2", ("a", "t", "T"), gens, HoughtonPerm(), inv, "houghton", {}, houghton_word)


def _transposition_word(i: int) -> tuple:
    """Word for the adjacent transposition (i i+1): ``t^(i-1) a t^-(i-1)``."""
    k = i - 1
    up, down = ("t", "T") if k >= 0 else ("T", "t")
    return (up,) * abs(k) + ("a",) + (down,) * abs(k)


def houghton_word(g: HoughtonPerm) -> tuple:
    """A word in a, t, T for ``g`` (bubble sort of the finitary part, then the shift)."""
    h, pi = translation_part(g)
    word: list = []
    if h.moves:
        lo, hi = min(x for x, _ in h.moves), max(x for x, _ in h.moves)
        values = [h(x) for x in range(lo, hi + 1)]
        swaps = []
        for end in range(len(values) - 1, 0, -1):
            for j in range(end):
                if values[j] > values[j + 1]:
                    values[j], values[j + 1] = values[j + 1], values[j]
                    swaps.append(lo + j)
        # h · s_1 · ... · s_r = e, so h = s_r ... s_1
        for i in reversed(swaps):
            word += _transposition_word(i)
    word += ["t" if pi > 0 else "T"] * abs(pi)
    return free_reduce(tuple(word), {"a": "a", "t": "T", "T": "t"})


_SPEC_PATTERNS = [
    (re.compile(r"^Z$"), lambda m: lattice(1)),
    (re.compile(r"^Z\^?(\d+)$"), lambda m: lattice(int(m.group(1)))),
    (re.compile(r"^F_?(\d+)$"), lambda m: free_group(int(m.group(1)))),
    (re.compile(r"^BS\(1,(\d+)\)$"), lambda m: baumslag_solitar(int(m.group(1)))),
    (re.compile(r"^H_?2$"), lambda m: houghton2()),
    (re.compile(r"^1$"), lambda m: trivial_group()),
    (re.compile(r"^C_?(\d+)$"), lambda m: cyclic(int(m.group(1)))),
    (re.compile(r"^Sym_?(\d+)$"), lambda m: symmetric(int(m.group(1)))),
]


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


def parse_group(spec: str) -> Group:
    """Group from a spec string such as ``Z^2``, ``BS(1,3)`` or ``wr(C2,Z)``."""
    text = spec.replace(" ", "")
    if text.startswith("wr(") and text.endswith(")"):
        args = _split_args(text[3:-1])
        if len(args) != 2:
            raise DomainError(f"wr() takes two groups: {spec!r}")
        return wreath(parse_group(args[0]), parse_group(args[1]))
    if text.startswith("x(") and text.endswith(")"):
        args = _split_args(text[2:-1])
        if len(args) != 2:
            raise DomainError(f"x() takes two groups: {spec!r}")
        return direct_product(parse_group(args[0]), parse_group(args[1]))
    for pattern, make in _SPEC_PATTERNS:
        m = pattern.match(text)
        if m:
            return make(m)
    raise DomainError(f"unknown group spec {spec!r}")


# ---------------------------------------------------------------------------
# balls


@dataclass
class Ball:
    radius: int
    elements: dict  # element -> first (shortest, length-lex) word reaching it

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def __iter__(self):
        return iter(self.elements)

    def sphere(self, r: int) -> list:
        return [g for g, w in self.elements.items() if len(w) == r]


def ball_enumerate(group: Group, radius: int, cap: int = DEFAULT_BALL_CAP) -> Ball:
    """All elements of word length at most ``radius``, keyed to a geodesic word."""
    if radius < 0:
        raise DomainError("radius must be non-negative")
    elements = {group.identity: ()}
    frontier = deque([group.identity])
    for _ in range(radius):
        nxt = deque()
        for g in frontier:
            w = elements[g]
            for a in group.letters:
                h = g * group.generators[a]
                if h not in elements:
                    elements[h] = w + (a,)
                    if len(elements) > cap:
                        raise CapacityError(f"ball exceeds {cap} elements")
                    nxt.append(h)
        frontier = nxt
    return Ball(radius, elements)


# ---------------------------------------------------------------------------
# Houghton H₂


def translation_part(g: HoughtonPerm):
    """``(h, π)`` with ``h = g · t^-π`` finitary and ``g = h · t^π``."""
    if not isinstance(g, HoughtonPerm):
        raise DomainError("expected an H2 element")
    pi = g.shift
    h = g * HoughtonPerm(-pi)
    return h, pi


houghton_translation_part = translation_part


def crossing_number(g: HoughtonPerm) -> int:
    """max over half-integers p of #{x : x < p < h(x)} for the finitary part h."""
    h, _ = translation_part(g)
    if not h.moves:
        return 0
    table = dict(h.moves)
    lo = min(table)
    hi = max(table)
    best = 0
    for m in range(lo, hi):
        # p = m + 1/2
        c = sum(1 for x, y in table.items() if x <= m < y)
        best = max(best, c)
    return best


def houghton_witness(K: int) -> HoughtonPerm:
    """The involution (1 -1)(2 -2)...(K -K)."""
    if K < 1:
        raise DomainError("K must be at least 1")
    moves = [(i, -i) for i in range(1, K + 1)] + [(-i, i) for i in range(1, K + 1)]
    return HoughtonPerm(0, tuple(moves))


def interval_perm(images: dict) -> HoughtonPerm:
    return HoughtonPerm(0, tuple(images.items()))


def format_cycles(g: HoughtonPerm) -> str:
    """Cycle notation of the finitary part, e.g. ``(1 -1)(2 -2); shift=0``."""
    h, pi = translation_part(g)
    table = dict(h.moves)
    seen = set()
    cycles = []
    for x in sorted(table, key=lambda v: (abs(v), v < 0)):
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = table[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = table[y]
        cycles.append("(" + " ".join(str(v) for v in cyc) + ")")
    return ("".join(cycles) or "()") + f"; shift={pi}"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> HoughtonPerm:
    """Inverse of :func:`format_cycles`; the shift part is optional."""
    body, _, tail = text.partition(";")
    shift = 0
    if tail.strip():
        m = re.fullmatch(r"\s*shift\s*=\s*(-?\d+)\s*", tail)
        if not m:
            raise DomainError(f"bad shift clause {tail!r}")
        shift = int(m.group(1))
    if _CYCLE_RE.sub("", body).strip():
        raise DomainError(f"bad cycle notation {text!r}")
    table: dict = {}
    for grp in _CYCLE_RE.findall(body):
        pts = [int(v) for v in grp.split()]
        if len(set(pts)) != len(pts) or set(pts) & set(table):
            raise DomainError(f"cycles must be disjoint: {text!r}")
        for i, x in enumerate(pts):
            table[x] = pts[(i + 1) % len(pts)]
    h = HoughtonPerm(0, tuple(table.items()))
    return h * HoughtonPerm(shift)
