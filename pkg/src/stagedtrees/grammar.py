"""Recursive-descent parser for the polynomial text grammar.

    expr := term ('+' term)*
    term := symbol ('*' symbol)* ('*' '(' expr ')')?

Whitespace is insignificant. A term with several symbols and no bracket is a
single composite label (products inside one floret edge); a bracket holds the
subtree hanging below that label.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .polynomial import Factorization, Poly
from .trees import Label

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[+*()]|\s+|.")


@dataclass
class _Term:
    symbols: list
    sub: "list[_Term] | None"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        for m in _TOKEN_RE.finditer(text):
            tok = m.group(0)
            if tok.isspace():
                continue
            if tok in "+*()" or re.match(r"[A-Za-z_]", tok):
                self.tokens.append((tok, m.start()))
            else:
                raise self._error(f"unexpected character {tok!r}", m.start())
        self.i = 0

    def _error(self, message, offset):
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, line, column)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        if self.i >= len(self.tokens):
            raise self._error(
                f"unexpected end of input (wanted {expected or 'more'})",
                len(self.text),
            )
        tok, off = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise self._error(f"expected {expected!r}, found {tok!r}", off)
        self.i += 1
        return tok, off

    def parse_expr(self) -> list[_Term]:
        terms = [self.parse_term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.parse_term())
        return terms

    def parse_term(self) -> _Term:
        symbols = []
        tok, off = self.take()
        if tok in "+*()":
            raise self._error(f"expected a symbol, found {tok!r}", off)
        symbols.append(tok)
        sub = None
        while self.peek() == "*":
            self.take("*")
            if self.peek() == "(":
                self.take("(")
                sub = self.parse_expr()
                self.take(")")
                break
            tok, off = self.take()
            if tok in "+*()":
                raise self._error(f"expected a symbol, found {tok!r}", off)
            symbols.append(tok)
        return _Term(symbols, sub)

    def done(self):
        if self.i < len(self.tokens):
            tok, off = self.tokens[self.i]
            raise self._error(f"trailing input {tok!r}", off)


def _parse(text: str) -> list[_Term]:
    p = _Parser(text)
    terms = p.parse_expr()
    p.done()
    return terms


def _to_factorization(terms: list[_Term]) -> Factorization:
    entries = []
    for t in terms:
        if len(set(t.symbols)) != len(t.symbols):
            raise ParseError(f"repeated symbol in label {'*'.join(t.symbols)}")
        label = Label.of(*t.symbols)
        child = _to_factorization(t.sub) if t.sub is not None else None
        entries.append((label, child))
    return Factorization(tuple(entries))


def parse_factorization(text: str) -> Factorization:
    """Parse a (possibly nested) expression as a tree-compatible
    factorization."""
    return _to_factorization(_parse(text))


def parse_polynomial(text: str) -> Poly:
    """Parse an expression and expand it into a flat polynomial."""

    def monos(terms: list[_Term]):
        for t in terms:
            base = frozenset(t.symbols)
            if len(base) != len(t.symbols):
                raise ParseError(f"repeated symbol in term {'*'.join(t.symbols)}")
            if t.sub is None:
                yield base
                continue
            for sub in monos(t.sub):
                if base & sub:
                    raise ParseError(
                        f"repeated symbol {sorted(base & sub)[0]} in a product"
                    )
                yield base | sub

    return Poly(list(monos(_parse(text))))
