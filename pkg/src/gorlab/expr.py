"""Tokenizer and parser for polynomial expressions over declared generators.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := RATIONAL | NAME ['^' INT]

A term may carry at most one rational factor, which must come first.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^]))"
)


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple  # ((name, exponent), ...) in written order


def tokenize(text: str, line: int | None = None, offset: int = 0):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + offset + 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start + offset + 1))
        pos = m.end()
    return out


def parse_expression(text: str, names=None, line: int | None = None, offset: int = 0) -> list[Term]:
    """Parse ``text``; ``names`` (if given) restricts allowed generator names."""
    toks = tokenize(text, line, offset)
    if not toks:
        raise ParseError("empty expression", line, offset + 1)
    i = 0
    terms: list[Term] = []

    def peek():
        return toks[i] if i < len(toks) else (None, None, len(text) + offset + 1)

    sign = 1
    kind, val, col = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coeff = Fraction(sign)
        factors = []
        first = True
        while True:
            kind, val, col = peek()
            if kind == "num":
                if not first:
                    raise ParseError("a rational coefficient must lead its term", line, col)
                frac = Fraction(val)
                coeff *= frac
                i += 1
            elif kind == "name":
                if names is not None and val not in names:
                    raise ParseError(f"undeclared generator {val!r}", line, col)
                i += 1
                exp = 1
                k2, v2, c2 = peek()
                if k2 == "op" and v2 == "^":
                    i += 1
                    k3, v3, c3 = peek()
                    if k3 != "num" or "/" in v3:
                        raise ParseError("exponent must be a non-negative integer", line, c3)
                    exp = int(v3)
                    i += 1
                if exp:
                    factors.append((val, exp))
            else:
                raise ParseError("expected a coefficient or generator name", line, col)
            first = False
            kind, val, col = peek()
            if kind == "op" and val == "*":
                i += 1
                continue
            break
        terms.append(Term(coeff, tuple(factors)))
        kind, val, col = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected token {val!r}", line, col)
    return terms
