"""Text syntax for Weyl algebra elements.

Grammar (whitespace is ignored between tokens)::

    expr   := [+|-] term ((+|-) term)*
    term   := factor ([*] factor)*
    factor := atom [^ int]
    atom   := int [/ int] | x<i> | d<i> | E | ( expr )

Factors are multiplied left to right with the Weyl product, so ``d1*x1``
parses to ``x1*d1 + 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import QQ

from .algebra import WeylElement, euler_operator, format_element, power


class ParseError(ValueError):
    """Malformed element text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        caret = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {caret}")


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[xd])(?P<idx>\d+)|(?P<sym>[E+\-*/^()]))")


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "x", "d", or the literal symbol
    value: int | None
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"Unexpected character {text[bad]!r}", text, bad)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group("int") is not None:
            tokens.append(_Token("int", int(m.group("int")), start))
        elif m.group("var") is not None:
            tokens.append(_Token(m.group("var"), int(m.group("idx")), start))
        else:
            tokens.append(_Token(m.group("sym"), None, start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("Unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.take()
        if tok.kind != kind:
            raise ParseError(f"Expected {kind!r}, found {self._show(tok)}", self.text, tok.pos)
        return tok

    def _show(self, tok: _Token) -> str:
        if tok.kind in ("x", "d"):
            return f"'{tok.kind}{tok.value}'"
        if tok.kind == "int":
            return f"'{tok.value}'"
        return repr(tok.kind)

    # -- grammar -------------------------------------------------------------

    def parse(self) -> WeylElement:
        if not self.tokens:
            raise ParseError("Empty expression", self.text, 0)
        value = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"Unexpected {self._show(tok)}", self.text, tok.pos)
        return value

    def expr(self) -> WeylElement:
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind in ("+", "-"):
            self.take()
            sign = -1 if tok.kind == "-" else 1
        value = self.term().scale(sign)
        while (tok := self.peek()) is not None and tok.kind in ("+", "-"):
            self.take()
            rhs = self.term()
            value = value + rhs if tok.kind == "+" else value - rhs
        return value

    def term(self) -> WeylElement:
        value = self.factor()
        while (tok := self.peek()) is not None:
            if tok.kind == "*":
                self.take()
                value = value * self.factor()
            elif tok.kind in ("int", "x", "d", "E", "("):
                value = value * self.factor()
            else:
                break
        return value

    def factor(self) -> WeylElement:
        value = self.atom()
        tok = self.peek()
        if tok is not None and tok.kind == "^":
            self.take()
            exp = self.expect("int")
            value = power(value, exp.value)
        return value

    def atom(self) -> WeylElement:
        tok = self.take()
        if tok.kind == "int":
            nxt = self.peek()
            if nxt is not None and nxt.kind == "/":
                self.take()
                den = self.expect("int")
                if den.value == 0:
                    raise ParseError("Division by zero", self.text, den.pos)
                return WeylElement.constant(self.n, QQ(tok.value, den.value))
            return WeylElement.constant(self.n, tok.value)
        if tok.kind in ("x", "d"):
            if not 1 <= tok.value <= self.n:
                raise ParseError(
                    f"Unknown variable index {tok.kind}{tok.value} for A_{self.n}",
                    self.text, tok.pos)
            make = WeylElement.x if tok.kind == "x" else WeylElement.d
            return make(self.n, tok.value)
        if tok.kind == "E":
            if self.n < 1:
                raise ParseError("E needs n >= 1", self.text, tok.pos)
            return euler_operator(self.n)
        if tok.kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"Unexpected {self._show(tok)}", self.text, tok.pos)


def parse_element(text: str, n: int) -> WeylElement:
    """Parse *text* as an element of A_n(QQ)."""
    return _Parser(text, n).parse()


def print_element(a: WeylElement) -> str:
    """Canonical text of *a*; ``parse_element(print_element(a), a.n) == a``."""
    return format_element(a)
