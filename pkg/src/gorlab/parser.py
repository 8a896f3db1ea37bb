"""Reading and writing ``.alg`` / ``.ext`` presentation files.

::

    # comment
    name sphere
    gen e : 3
    gen a : 2 stage 0 block base
    d e = 0
    rel a^3

A file whose generators carry ``block`` tags describes a Λ-extension: the
``base`` generators (with their relations) form the base, the ``fiber`` ones
the free fiber.
"""
from __future__ import annotations

import re

from .algebra import CdgaPresentation, Generator, InvalidPresentation, terms_str
from .expr import ParseError, parse_expression
from .sullivan import LambdaExtension

_GEN = re.compile(
    r"gen\s+(?P<name>[A-Za-z_][A-Za-z0-9_']*)\s*:\s*(?P<deg>-?\d+)"
    r"(?:\s+stage\s+(?P<stage>\d+))?(?:\s+block\s+(?P<block>\w+))?\s*$"
)
_D = re.compile(r"d\s+(?P<name>[A-Za-z_][A-Za-z0-9_']*)\s*=\s*")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _check_expr(text: str, degrees: dict, lineno: int, offset: int) -> None:
    for term in parse_expression(text, degrees, lineno, offset):
        for name, exp in term.factors:
            if exp > 1 and degrees[name] % 2:
                col = offset + 1 + text.find(name)
                raise ParseError(f"odd generator {name!r} cannot be raised to power {exp}", lineno, col)


def parse_algebra(text: str, *, max_degree: int = 12, word_cap: int = 6):
    """Parse a presentation; returns a :class:`CdgaPresentation` or :class:`LambdaExtension`."""
    gens: list[tuple[Generator, str | None]] = []
    degrees: dict[str, int] = {}
    diffs: dict[str, str] = {}
    rels: list[str] = []
    name = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        body = line.lstrip()
        if not body:
            continue
        indent = len(line) - len(body)
        if body.startswith("name "):
            name = body[5:].strip()
        elif body.startswith("gen ") or body == "gen":
            m = _GEN.match(body)
            if not m:
                raise ParseError("expected 'gen <name> : <degree> [stage <k>] [block base|fiber]'", lineno, indent + 1)
            g = m["name"]
            if g in degrees:
                raise ParseError(f"generator {g!r} declared twice", lineno, indent + m.start("name") + 1)
            block = m["block"]
            if block not in (None, "base", "fiber"):
                raise ParseError(f"unknown block {block!r}", lineno, indent + m.start("block") + 1)
            degrees[g] = int(m["deg"])
            stage = int(m["stage"]) if m["stage"] is not None else None
            gens.append((Generator(g, degrees[g], stage), block))
        elif body.startswith("d "):
            m = _D.match(body)
            if not m:
                raise ParseError("expected 'd <name> = <expr>'", lineno, indent + 1)
            g = m["name"]
            if g not in degrees:
                raise ParseError(f"differential of undeclared generator {g!r}", lineno, indent + m.start("name") + 1)
            if g in diffs:
                raise ParseError(f"differential of {g!r} given twice", lineno, indent + 1)
            expr = body[m.end():]
            _check_expr(expr, degrees, lineno, indent + m.end())
            diffs[g] = expr
        elif body.startswith("rel "):
            expr = body[4:]
            _check_expr(expr, degrees, lineno, indent + 4)
            rels.append(expr)
        else:
            raise ParseError(f"unknown directive {body.split()[0]!r}", lineno, indent + 1)
    if not gens:
        raise ParseError("no generators declared")
    blocks = {b for _, b in gens}
    if blocks == {None}:
        return CdgaPresentation(
            [g for g, _ in gens], diffs, rels, max_degree=max_degree, word_cap=word_cap, name=name
        )
    if None in blocks:
        untagged = next(g.name for g, b in gens if b is None)
        raise InvalidPresentation(f"generator {untagged!r} lacks a block tag", untagged)
    base_gens = [g for g, b in gens if b == "base"]
    fiber_gens = [g for g, b in gens if b == "fiber"]
    base_names = {g.name for g in base_gens}
    base = CdgaPresentation(
        base_gens,
        {k: v for k, v in diffs.items() if k in base_names},
        rels,
        max_degree=max_degree,
        word_cap=word_cap,
        name=f"{name} base" if name else "base",
    )
    return LambdaExtension(base, fiber_gens, {k: v for k, v in diffs.items() if k not in base_names}, name=name)


def format_algebra(obj) -> str:
    """Canonical text; ``parse_algebra(format_algebra(x))`` reproduces ``x``."""
    if isinstance(obj, LambdaExtension):
        tot = obj.total
        base = set(obj.base.names)
        lines = [f"name {obj.name}"] if obj.name else []
        for g in tot.generators:
            lines.append(f"gen {g.name} : {g.degree} block {'base' if g.name in base else 'fiber'}")
        lines += _d_lines(tot)
        lines += [f"rel {_canon(r, tot.names)}" for r in obj.base.relations]
        return "\n".join(lines) + "\n"
    lines = [f"name {obj.name}"] if obj.name else []
    for g in obj.generators:
        lines.append(f"gen {g.name} : {g.degree}" + (f" stage {g.stage}" if g.stage is not None else ""))
    lines += _d_lines(obj)
    lines += [f"rel {_canon(r, obj.names)}" for r in obj.relations]
    return "\n".join(lines) + "\n"


def _d_lines(p: CdgaPresentation) -> list[str]:
    return [f"d {g.name} = {_canon(p._raw_d.get(i, {}), p.names)}" for i, g in enumerate(p.generators)]


def _canon(terms, names) -> str:
    return terms_str(dict(sorted(terms.items())), names)


def load(path: str, **kw):
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), **kw)
