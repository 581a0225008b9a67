"""The first Grigorchuk group and its ascending HNN extension.

Elements of the group are words over ``a, b, c, d`` acting on binary strings;
a word ``x1...xn`` acts as the composite ``x1 ∘ ... ∘ xn`` (rightmost letter
first), so sections obey ``(xy)_v = x_{y(v)} y_v``. Generator recursions::

    a = swap(e, e)   b = (a, c)   c = (a, d)   d = (e, b)

The extension adds ``t`` with ``t⁻¹ g t = φ(g)``; it acts on a 3-regular tree
whose vertices are pairs ``(n, w)`` with ``(m, 1ʲw) ~ (m+j, w)``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapacityError, DomainError

LETTERS = "abcd"
_KLEIN = {
    ("b", "c"): "d",
    ("c", "b"): "d",
    ("b", "d"): "c",
    ("d", "b"): "c",
    ("c", "d"): "b",
    ("d", "c"): "b",
}
# (section at 0, section at 1, swaps root)
_RECURSION = {
    "a": ("", "", True),
    "b": ("a", "c", False),
    "c": ("a", "d", False),
    "d": ("", "b", False),
}
PHI = {"a": "aca", "b": "d", "c": "b", "d": "c"}
# ψ_i: the action of each generator on the branches hanging off the spine
PSI = (
    {"a": "d", "b": "a", "c": "a", "d": ""},
    {"a": "d", "b": "a", "c": "", "d": "a"},
    {"a": "d", "b": "", "c": "a", "d": "a"},
)
DEFAULT_QUOTIENT_CAP = 5
DEFAULT_LEVEL_CAP = 6
MAX_PORTRAIT_DEPTH = 8
SMALL_SECTIONS = ("", "a", "b", "c", "d", "ad", "da", "ada", "dad", "adad")


def _check(w: str):
    for ch in w:
        if ch not in LETTERS:
            raise DomainError(f"{ch!r} is not one of a, b, c, d")


def reduce_word(w: str) -> str:
    """Alternating normal form using a² = b² = c² = d² = bcd = e."""
    _check(w)
    stack: list = []
    for x in w:
        if not stack:
            stack.append(x)
        elif x == "a":
            if stack[-1] == "a":
                stack.pop()
            else:
                stack.append(x)
        elif stack[-1] == "a":
            stack.append(x)
        else:
            top = stack.pop()
            if top != x:
                stack.append(_KLEIN[(top, x)])
    return "".join(stack)


def inverse(w: str) -> str:
    return reduce_word(w[::-1])


def multiply(*words: str) -> str:
    return reduce_word("".join(words))


def act(w: str, v: str) -> tuple:
    """``(g(v), g_v)`` for a word ``g`` and a binary string ``v``."""
    _check(w)
    image = []
    section = w
    for bit in v:
        if bit not in "01":
            raise DomainError(f"vertex {v!r} is not a binary string")
        s = int(bit)
        parts = []
        for x in reversed(section):
            left, right, swap = _RECURSION[x]
            parts.append(right if s else left)
            if swap:
                s ^= 1
        image.append(str(s))
        section = reduce_word("".join(reversed(parts)))
    return "".join(image), reduce_word(section)


def section_at(g: str, v: str) -> str:
    return act(g, v)[1]


def sections(g: str) -> tuple:
    """Level-1 sections and whether the root is swapped."""
    g = reduce_word(g)
    return section_at(g, "0"), section_at(g, "1"), g.count("a") % 2 == 1


@lru_cache(maxsize=1 << 16)
def _trivial(g: str) -> bool:
    if not g:
        return True
    if g.count("a") % 2:
        return False
    return _trivial(section_at(g, "0")) and _trivial(section_at(g, "1"))


def is_trivial(g: str) -> bool:
    """Word problem by contraction: trivial iff it fixes level 1 and both sections are trivial."""
    return _trivial(reduce_word(g))


def equal(g: str, h: str) -> bool:
    return is_trivial(reduce_word(g) + inverse(h))


def element_order(g: str, limit: int = 64) -> int:
    """Order of ``g`` if at most ``limit``."""
    g = reduce_word(g)
    p = ""
    for k in range(1, limit + 1):
        p = reduce_word(p + g)
        if is_trivial(p):
            return k
    raise CapacityError(f"order exceeds {limit}")


def phi_apply(g: str, times: int = 1) -> str:
    """Substitution a → aca, b → d, c → b, d → c."""
    g = reduce_word(g)
    for _ in range(times):
        g = reduce_word("".join(PHI[x] for x in g))
    return g


def psi_apply(i: int, g: str) -> str:
    table = PSI[i % 3]
    return reduce_word("".join(table[x] for x in reduce_word(g)))


# ---------------------------------------------------------------------------
# portraits


@dataclass(frozen=True)
class Portrait:
    """Action on level ``level``; ``leaves[i]`` is the image of leaf ``i``.

    Leaf ``i`` is the binary string of ``i`` on ``level`` bits, first letter
    most significant.
    """

    level: int
    leaves: bytes

    def image(self, v: str) -> str:
        i = int(v, 2) if v else 0
        return format(self.leaves[i], f"0{self.level}b") if self.level else ""

    def __mul__(self, other: "Portrait") -> "Portrait":
        # (self * other)(v) = self(other(v))
        return Portrait(self.level, other.leaves.translate(_table(self.leaves)))

    @property
    def is_identity(self):
        return self.leaves == bytes(range(len(self.leaves)))

    def respects_tree(self) -> bool:
        """Siblings go to siblings at every level."""
        n = self.level
        for depth in range(1, n + 1):
            shift = n - depth
            blocks: dict = {}
            for i, j in enumerate(self.leaves):
                blocks.setdefault(i >> shift, set()).add(j >> shift)
            if any(len(v) != 1 for v in blocks.values()):
                return False
        return True


def _table(leaves: bytes) -> bytes:
    return leaves + bytes(range(len(leaves), 256))


@lru_cache(maxsize=None)
def _generator_portrait(x: str, n: int) -> bytes:
    out = bytearray(1 << n)
    for i in range(1 << n):
        v = format(i, f"0{n}b") if n else ""
        img = act(x, v)[0]
        out[i] = int(img, 2) if img else 0
    return bytes(out)


def portrait(g: str, n: int) -> Portrait:
    if not 0 <= n <= MAX_PORTRAIT_DEPTH:
        raise CapacityError(f"portrait depth must be in 0..{MAX_PORTRAIT_DEPTH}")
    leaves = bytes(range(1 << n))
    for x in reversed(reduce_word(g)):
        leaves = leaves.translate(_table(_generator_portrait(x, n)))
    return Portrait(n, leaves)


def quotient_size(n: int, cap: int = DEFAULT_QUOTIENT_CAP) -> int:
    """|G_n|: closure of the generator portraits on level ``n``."""
    if n < 1:
        raise DomainError("level must be at least 1")
    if n > cap:
        raise CapacityError(f"level {n} exceeds the quotient cap {cap}")
    gens = [_table(_generator_portrait(x, n)) for x in LETTERS]
    start = bytes(range(1 << n))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = p.translate(g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def quotient_elements(n: int, cap: int = DEFAULT_QUOTIENT_CAP) -> list:
    """All portraits of G_n (small n only)."""
    if n > cap:
        raise CapacityError(f"level {n} exceeds the quotient cap {cap}")
    gens = [_table(_generator_portrait(x, n)) for x in LETTERS]
    start = bytes(range(1 << n))
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = p.translate(g)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return [Portrait(n, p) for p in seen]


def predicted_quotient_size(n: int) -> int:
    """2^(5·2^(n-3)+2) for n ≥ 3."""
    if n < 3:
        raise DomainError("formula holds for n >= 3")
    return 2 ** (5 * 2 ** (n - 3) + 2)


def portrait_dot(g: str, n: int) -> str:
    """DOT tree of depth ``n`` with each vertex labelled by its section."""
    lines = ["digraph portrait {", "  node [shape=box];"]
    for depth in range(n + 1):
        for i in range(1 << depth):
            v = format(i, f"0{depth}b") if depth else ""
            sec = section_at(g, v)
            swap = sec.count("a") % 2 == 1
            label = (sec or "e") + (" *" if swap else "")
            lines.append(f'  "v{v}" [label="{label}"];')
            if depth:
                lines.append(f'  "v{v[:-1]}" -> "v{v}" [label="{v[-1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the HNN extension


def _lift(k: int, g: str, target: int) -> str:
    return phi_apply(g, target - k)


@dataclass(frozen=True)
class HnnElement:
    """``tᵏ g t⁻ᵏ · tᵐ`` with ``k ≥ 0``; negative ``k`` is folded into ``g`` via φ."""

    k: int
    g: str
    m: int = 0

    def __post_init__(self):
        k, g = self.k, reduce_word(self.g)
        if k < 0:
            g = phi_apply(g, -k)
            k = 0
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "g", g)

    def __mul__(self, other: "HnnElement") -> "HnnElement":
        # tᵏ¹g₁t⁻ᵏ¹ tᵐ¹ · tᵏ²g₂t⁻ᵏ² tᵐ² = (k₁,g₁)(k₂+m₁,g₂) tᵐ¹⁺ᵐ²
        right = HnnElement(other.k + self.m, other.g)
        top = max(self.k, right.k)
        g = reduce_word(_lift(self.k, self.g, top) + _lift(right.k, right.g, top))
        return HnnElement(top, g, self.m + other.m)

    def inverse(self) -> "HnnElement":
        return HnnElement(self.k - self.m, inverse(self.g), -self.m)

    def __eq__(self, other):
        if not isinstance(other, HnnElement):
            return NotImplemented
        if self.m != other.m:
            return False
        top = max(self.k, other.k)
        return equal(_lift(self.k, self.g, top), _lift(other.k, other.g, top))

    def __hash__(self):
        # equal elements may have different (k, g); hash only the invariant part
        return hash(self.m)

    @property
    def is_identity(self):
        return self.m == 0 and is_trivial(self.g)

    @property
    def in_normal_subgroup(self) -> bool:
        return self.m == 0

    def __str__(self):
        core = f"t^{self.k}[{self.g}]t^-{self.k}"
        return core + (f" t^{self.m}" if self.m else "")


_HNN_RE = re.compile(r"^\s*t\^(\d+)\[([abcd]*)\]t\^-(\d+)(?:\s*t\^(-?\d+))?\s*$")


def parse_hnn(text: str) -> HnnElement:
    """Parse ``t^k[word]t^-k t^m`` or a word over a, b, c, d, t, T."""
    m = _HNN_RE.match(text)
    if m:
        if m.group(1) != m.group(3):
            raise DomainError(f"conjugating exponents differ in {text!r}")
        return HnnElement(int(m.group(1)), m.group(2), int(m.group(4) or 0))
    return hnn_from_word(text)


def hnn_from_word(w: str) -> HnnElement:
    out = HnnElement(0, "")
    for x in w.replace(" ", ""):
        if x in LETTERS:
            out = out * HnnElement(0, x)
        elif x == "t":
            out = out * HnnElement(0, "", 1)
        elif x == "T":
            out = out * HnnElement(0, "", -1)
        else:
            raise DomainError(f"unknown letter {x!r}")
    return out


def hnn_mul(x: HnnElement, y: HnnElement) -> HnnElement:
    return x * y


def conjugate_by_t(g: str, j: int) -> HnnElement:
    """``tʲ g t⁻ʲ`` (so ``j < 0`` gives ``φ^|j|(g)``)."""
    return HnnElement(j, g)


# graded 3-regular tree -------------------------------------------------------


def canonical_vertex(n: int, w: str) -> tuple:
    """Strip leading 1s: (m, 1ʲw) ~ (m+j, w)."""
    j = len(w) - len(w.lstrip("1"))
    return n + j, w[j:]


def vertex_level(n: int, w: str) -> int:
    return n + len(w)


def _section_of_group_element(g: str, n: int, w: str) -> str:
    """Section of ``g`` in the base group at the canonical vertex ``(n, w)``."""
    n, w = canonical_vertex(n, w)
    if n >= 0:
        return section_at(g, "1" * n + w)
    if not w:
        return phi_apply(g, -n)
    return section_at(psi_apply(n % 3, g), w[1:])


def graded_section_word(x: HnnElement, vertex: tuple) -> str:
    if x.m != 0:
        raise DomainError("graded sections need an element with m = 0")
    n, w = vertex
    return _section_of_group_element(x.g, n + x.k, w)


def graded_section(x: HnnElement, vertex: tuple, depth: int) -> Portrait:
    """Depth-``depth`` portrait of the section of ``x`` below ``vertex``."""
    return portrait(graded_section_word(x, vertex), depth)


def level_vertices(level: int, branches: int = 3) -> list:
    """Canonical vertices of one level, keeping only the ``branches`` nearest branches.

    Deeper branches repeat the residues mod 3 with longer words, so their
    sections are sections of the ones listed.
    """
    out = []
    if level >= 0:
        out += [(0, format(i, f"0{level}b") if level else "") for i in range(1 << level)]
        out = [canonical_vertex(*v) for v in out]
    else:
        out.append((level, ""))
    for n in range(min(level, 0) - 1, min(level, 0) - 1 - branches, -1):
        length = level - n - 1
        for i in range(1 << length):
            out.append((n, "0" + (format(i, f"0{length}b") if length else "")))
    return out


_SMALL = ("", "a", "b", "c", "d")


def _is_small(g: str) -> bool:
    return any(equal(g, s) for s in _SMALL)


def complexity_level(x: HnnElement, cap: int = DEFAULT_LEVEL_CAP):
    """Least level whose vertices all carry sections in {e, a, b, c, d}.

    Returns ``-math.inf`` for e, b, c, d; raises :class:`CapacityError`
    when the answer exceeds ``cap``.
    """
    if x.m != 0:
        raise DomainError("complexity level needs an element with m = 0")
    if any(equal(x.g, s) for s in ("", "b", "c", "d")):
        return -math.inf
    # for g outside {e,b,c,d} the spine section φ(g) at level -1 is never small
    for level in range(0, cap + x.k + 1):
        if all(_is_small(_section_of_group_element(x.g, n, w)) for n, w in level_vertices(level)):
            return level - x.k
    raise CapacityError(f"complexity level exceeds {cap}")


def level_zero_sections(x: HnnElement, skip_root: bool = False) -> list:
    """Distinct section words of ``x`` over all level-0 vertices.

    The infinitely many branch vertices only contribute subsections of
    ``ψ_i(g)``, which are closed off by iterating sections to a fixpoint.
    With ``skip_root`` the vertex ``(0, ε)`` itself is left out.
    """
    if x.m != 0:
        raise DomainError("sections at level 0 need an element with m = 0")
    g, k = x.g, x.k
    found: dict = {}
    for i in range(1 << k):
        v = format(i, f"0{k}b") if k else ""
        if skip_root and v == "1" * k:
            continue
        s = section_at(g, v)
        found.setdefault(s, s)
    for n in (-1, -2, -3):
        h = psi_apply(n % 3, g)
        depth = k - n - 1
        todo = [section_at(h, format(i, f"0{depth}b") if depth else "") for i in range(1 << depth)]
        seen = set()
        while todo:
            s = todo.pop()
            if s in seen:
                continue
            seen.add(s)
            found.setdefault(s, s)
            todo += [section_at(s, "0"), section_at(s, "1")]
    return list(found)


def branch_sections(x: HnnElement) -> list:
    """Level-0 sections of ``x`` away from the root ``(0, ε)``."""
    return level_zero_sections(x, skip_root=True)


def sec_n(X, n: int) -> set:
    """Depth-``n`` portraits of all level-0 sections of the elements of ``X``."""
    out = set()
    for x in X:
        for s in level_zero_sections(x):
            out.add(portrait(s, n))
    return out


def sec_n_count(X, n: int) -> int:
    return len(sec_n(X, n))


def in_small_sections(g: str) -> bool:
    return any(equal(g, s) for s in SMALL_SECTIONS)


RELATORS = ("aa", "adadadad", "adacacadacacadacacadacac")


def relator_family(i: int) -> list:
    return [phi_apply(r, i) for r in RELATORS]
