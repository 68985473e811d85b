"""Parser for the monotone structure-formula language.

Grammar::

    expr   := term ("|" term)*
    term   := factor ("&" factor)*
    factor := var | "(" expr ")" | "k-of-n(" int ";" var ("," var)* ")"
    var    := "x" int

``&`` is the product and ``|`` the coproduct ``1 - (1 - x)(1 - y)``.
Whitespace is ignored. There is no negation, so every formula is monotone.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ComponentError, FormulaSyntaxError

_TOKEN = re.compile(
    r"\s*(?:(?P<kofn>k-of-n\()|(?P<var>x\d+)|(?P<int>\d+)|(?P<op>[&|(),;]))"
)


@dataclass(frozen=True)
class Var:
    label: int
    position: int


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class KOfN:
    k: int
    parts: tuple


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        parts = [self.term()]
        while self.peek()[:2] == ("op", "|"):
            self.i += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def term(self):
        parts = [self.factor()]
        while self.peek()[:2] == ("op", "&"):
            self.i += 1
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def var(self):
        _, text, pos = self.take("var")
        return Var(int(text[1:]), pos)

    def factor(self):
        kind, text, pos = self.peek()
        if kind == "var":
            return self.var()
        if (kind, text) == ("op", "("):
            self.i += 1
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "kofn":
            self.i += 1
            _, k, kpos = self.take("int")
            self.take("op", ";")
            parts = [self.var()]
            while self.peek()[:2] == ("op", ","):
                self.i += 1
                parts.append(self.var())
            self.take("op", ")")
            k = int(k)
            if not 1 <= k <= len(parts):
                raise FormulaSyntaxError(
                    f"k-of-n threshold {k} outside 1..{len(parts)}", kpos
                )
            return KOfN(k, tuple(parts))
        raise FormulaSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse(text: str):
    """Parse ``text`` into an AST of ``Var``/``And``/``Or``/``KOfN`` nodes."""
    parser = _Parser(text)
    node = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected trailing {value!r}", pos)
    return node


def variables(node) -> set[int]:
    if isinstance(node, Var):
        return {node.label}
    return set().union(*(variables(p) for p in node.parts))


def evaluate(node, masks: np.ndarray, labels: list[int]) -> np.ndarray:
    """Evaluate on every mask at once; bit ``i`` of a mask is ``labels[i]``."""
    index = {label: i for i, label in enumerate(labels)}

    def walk(node):
        if isinstance(node, Var):
            if node.label not in index:
                raise ComponentError(
                    f"variable x{node.label} at position {node.position} "
                    f"is not one of the components {labels}"
                )
            return ((masks >> index[node.label]) & 1).astype(bool)
        values = [walk(p) for p in node.parts]
        if isinstance(node, And):
            return np.logical_and.reduce(values)
        if isinstance(node, Or):
            return np.logical_or.reduce(values)
        return np.sum(values, axis=0) >= node.k

    return walk(node)


def to_text(node) -> str:
    if isinstance(node, Var):
        return f"x{node.label}"
    if isinstance(node, KOfN):
        return f"k-of-n({node.k}; " + ", ".join(to_text(p) for p in node.parts) + ")"
    sep = " & " if isinstance(node, And) else " | "
    inner = sep.join(
        f"({to_text(p)})" if isinstance(p, (And, Or)) else to_text(p) for p in node.parts
    )
    return inner
