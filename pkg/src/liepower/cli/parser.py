"""Recursive-descent parser for functor expressions.

Grammar::

    sum    := tensor ('+' tensor)*
    tensor := comp ('*' comp)*
    comp   := atom ('o' atom)*          left-associative
    atom   := 'Id' | 'L^' INT | 'Lres^' INT | 'Ext^' INT | 'T^' INT | '(' sum ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..functors import Compose, DirectSum, ExteriorPower, FunctorExpr, Id, LiePower, RestrictedLiePower, Tensor, TensorPower


class ParseError(ValueError):
    def __init__(self, text: str, position: int, expected: set[str]):
        self.text = text
        self.position = position
        self.expected = frozenset(expected)
        found = repr(text[position]) if position < len(text) else "end of input"
        super().__init__(f"at column {position}: expected one of {sorted(self.expected)}, found {found}")


_TOKEN = re.compile(r"\s*(?:(?P<power>Lres|Ext|L|T)\^(?P<exp>\d+)|(?P<word>Id|o)(?![A-Za-z0-9_])|(?P<sym>[()+*]))")

_POWERS = {"L": LiePower, "Lres": RestrictedLiePower, "Ext": ExteriorPower, "T": TensorPower}
_ATOM_START = {"Id", "L^n", "Lres^n", "Ext^n", "T^n", "("}


@dataclass
class _Tok:
    kind: str  # power, Id, o, + * ( ), eof
    pos: int
    name: str = ""
    exp: int = 0


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("eof", pos))
            return toks
        m = _TOKEN.match(text, pos)
        if m is None:
            expected = _ATOM_START | {"+", "*", "o", ")"} if toks else _ATOM_START
            raise ParseError(text, pos, expected)
        start = pos
        if m.group("power"):
            toks.append(_Tok("power", start, m.group("power"), int(m.group("exp"))))
        elif m.group("word"):
            toks.append(_Tok(m.group("word"), start))
        else:
            toks.append(_Tok(m.group("sym"), start))
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: set[str]):
        raise ParseError(self.text, self.tok.pos, expected)

    def parse(self) -> FunctorExpr:
        e = self.sum()
        if self.tok.kind != "eof":
            self.fail({"+", "*", "o", "end of input"})
        return e

    def sum(self) -> FunctorExpr:
        parts = [self.tensor()]
        while self.tok.kind == "+":
            self.i += 1
            parts.append(self.tensor())
        return parts[0] if len(parts) == 1 else DirectSum(tuple(parts))

    def tensor(self) -> FunctorExpr:
        parts = [self.comp()]
        while self.tok.kind == "*":
            self.i += 1
            parts.append(self.comp())
        return parts[0] if len(parts) == 1 else Tensor(tuple(parts))

    def comp(self) -> FunctorExpr:
        e = self.atom()
        while self.tok.kind == "o":
            self.i += 1
            e = Compose(e, self.atom())
        return e

    def atom(self) -> FunctorExpr:
        t = self.tok
        if t.kind == "Id":
            self.i += 1
            return Id()
        if t.kind == "power":
            minimum = 0 if t.name == "Ext" else 1
            if t.exp < minimum:
                raise ParseError(self.text, t.pos, {f"{t.name}^n with n >= {minimum}"})
            self.i += 1
            return _POWERS[t.name](t.exp)
        if t.kind == "(":
            self.i += 1
            e = self.sum()
            if self.tok.kind != ")":
                self.fail({")", "+", "*", "o"})
            self.i += 1
            return e
        self.fail(_ATOM_START)


def parse_functor_expr(text: str) -> FunctorExpr:
    """Parse e.g. ``"(Id * L^3) + (Ext^2 o L^2)"``."""
    return _Parser(text).parse()
