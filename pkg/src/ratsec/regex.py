"""Regular expressions over opaque letters.

Syntax: letters, ``|`` (union), juxtaposition (concatenation), postfix ``*``,
``+`` and ``?``, parentheses, ``ε`` for the empty word and ``∅`` for the empty
language. Whitespace is ignored. When an alphabet is supplied, letters are
tokenized by longest match against it, so multi-character letters work;
otherwise every other character is a one-character letter.

The parse tree is made of plain tuples::

    ("empty",) ("eps",) ("lit", a) ("cat", x, y) ("alt", x, y) ("star", x)
"""

from __future__ import annotations

from .errors import RegexSyntaxError

_SPECIAL = set("|*+?()")
EPSILON_TOKENS = ("ε",)
EMPTY_TOKENS = ("∅",)


def _tokenize(expr, alphabet):
    tokens = []
    letters = sorted(alphabet, key=len, reverse=True) if alphabet is not None else None
    i = 0
    while i < len(expr):
        ch = expr[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SPECIAL:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch in EPSILON_TOKENS:
            tokens.append(("eps", ch, i))
            i += 1
            continue
        if ch in EMPTY_TOKENS:
            tokens.append(("empty", ch, i))
            i += 1
            continue
        if letters is None:
            tokens.append(("lit", ch, i))
            i += 1
            continue
        for a in letters:
            if expr.startswith(a, i):
                tokens.append(("lit", a, i))
                i += len(a)
                break
        else:
            raise RegexSyntaxError(f"unknown letter {ch!r}", i)
    tokens.append(("end", "", len(expr)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] == "|":
            self.take()
            node = ("alt", node, self.term())
        return node

    def term(self):
        node = None
        while self.peek()[0] in ("lit", "eps", "empty", "("):
            f = self.factor()
            node = f if node is None else ("cat", node, f)
        return ("eps",) if node is None else node

    def factor(self):
        node = self.atom()
        while self.peek()[0] in ("*", "+", "?"):
            op = self.take()[0]
            if op == "*":
                node = ("star", node)
            elif op == "+":
                node = ("cat", node, ("star", node))
            else:
                node = ("alt", node, ("eps",))
        return node

    def atom(self):
        kind, text, where = self.take()
        if kind == "lit":
            return ("lit", text)
        if kind == "eps":
            return ("eps",)
        if kind == "empty":
            return ("empty",)
        if kind == "(":
            node = self.expr()
            closing = self.take()
            if closing[0] != ")":
                raise RegexSyntaxError("expected ')'", closing[2])
            return node
        raise RegexSyntaxError(f"unexpected {text or 'end of input'!r}", where)


def parse(expr, alphabet=None):
    """Parse ``expr`` into a tuple tree; raises :class:`RegexSyntaxError`."""
    tokens = _tokenize(expr, alphabet)
    parser = _Parser(tokens)
    node = parser.expr()
    kind, text, where = parser.peek()
    if kind != "end":
        raise RegexSyntaxError(f"unexpected {text!r}", where)
    return node


def letters_of(node, acc=None):
    """Letters of a parse tree in order of first appearance."""
    if acc is None:
        acc = []
    kind = node[0]
    if kind == "lit":
        if node[1] not in acc:
            acc.append(node[1])
    elif kind in ("cat", "alt"):
        letters_of(node[1], acc)
        letters_of(node[2], acc)
    elif kind == "star":
        letters_of(node[1], acc)
    return acc
