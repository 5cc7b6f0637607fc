"""Prefix text syntax for CTL formulas.

Examples::

    true
    (def X)  (use ?x)  (point 3)  (point ?m)
    (stmt "V := 3")  (trans "?e")  (conlit "?c")  (freevar ?v "?e")
    (not F)  (and F G ...)  (or F G ...)  (at ?m F)
    (fwd-AX F)  (bwd-EX F)  (fwd-AU F G)  (bwd-EU F G)

``?name`` is a meta-variable. Its kind follows from where it appears: the
argument of ``def``/``use``/``freevar`` is a variable, of ``point``/``at`` a
point; inside quoted instructions and expressions the ``.osr`` parser decides.
A name used with two different kinds is rejected.
"""

from __future__ import annotations

import re

from ..errors import OsrSyntaxError
from ..ir.text import parse_expr, parse_instr
from .ctl import (AU, AX, EU, EX, At, ConLit, Def, Formula, FreeVar, Not, Point, Stmt, Trans,
                  TrueF, Use, conj, disj)
from .meta import Meta, metas_in

_TOKEN = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')

_TEMPORAL = {"AX": AX, "EX": EX, "AU": AU, "EU": EU}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise OsrSyntaxError(f"bad formula text near {text[pos:pos + 10]!r}")
        if m.group(1):
            out.append(("(", None))
        elif m.group(2):
            out.append((")", None))
        elif m.group(3) is not None:
            out.append(("str", m.group(3)))
        else:
            out.append(("atom", m.group(4)))
        pos = m.end()
    return out


class _FormulaParser:
    def __init__(self, tokens, kinds=None):
        self.tokens = tokens
        self.i = 0
        self.kinds: dict[str, str] = dict(kinds or {})

    def next(self):
        if self.i >= len(self.tokens):
            raise OsrSyntaxError("unexpected end of formula")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_close(self):
        if self.next()[0] != ")":
            raise OsrSyntaxError("expected ')'")

    def slot(self, kind):
        tag, value = self.next()
        if tag != "atom":
            raise OsrSyntaxError(f"expected a {kind}, found {tag}")
        if value.startswith("?"):
            return Meta(value[1:], kind)
        if kind == "point":
            if not value.lstrip("-").isdigit():
                raise OsrSyntaxError(f"expected a point, found {value!r}")
            return int(value)
        return value

    def quoted(self, parse):
        tag, value = self.next()
        if tag != "str":
            raise OsrSyntaxError("expected a quoted instruction or expression")
        return parse(value, metas=self.kinds)

    def formula(self) -> Formula:
        tag, value = self.next()
        if tag == "atom":
            if value == "true":
                return TrueF()
            if value == "false":
                return Not(TrueF())
            raise OsrSyntaxError(f"unknown formula {value!r}")
        if tag != "(":
            raise OsrSyntaxError("expected '('")
        tag, head = self.next()
        if tag != "atom":
            raise OsrSyntaxError("expected an operator after '('")
        out = self.compound(head)
        self.expect_close()
        return out

    def compound(self, head) -> Formula:
        if head in ("def", "use"):
            return (Def if head == "def" else Use)(self.slot("var"))
        if head == "point":
            return Point(self.slot("point"))
        if head == "stmt":
            return Stmt(self.quoted(lambda t, metas: parse_instr(t, metas=metas)))
        if head in ("trans", "conlit"):
            return (Trans if head == "trans" else ConLit)(self.quoted(parse_expr))
        if head == "freevar":
            var = self.slot("var")
            return FreeVar(var, self.quoted(parse_expr))
        if head == "not":
            return Not(self.formula())
        if head in ("and", "or"):
            args = [self.formula()]
            while self.tokens[self.i][0] != ")":
                args.append(self.formula())
            return (conj if head == "and" else disj)(*args)
        if head == "at":
            point = self.slot("point")
            return At(point, self.formula())
        direction, _, op = head.partition("-")
        if direction in ("fwd", "bwd") and op in _TEMPORAL:
            cls = _TEMPORAL[op]
            if op in ("AX", "EX"):
                return cls(self.formula(), direction)
            hold = self.formula()
            return cls(hold, self.formula(), direction)
        raise OsrSyntaxError(f"unknown operator {head!r}")


def _check_kinds(f: Formula):
    seen: dict[str, str] = {}

    def walk(o):
        if isinstance(o, Meta):
            if seen.setdefault(o.name, o.kind) != o.kind:
                raise OsrSyntaxError(f"meta-variable ?{o.name} used as both "
                                     f"{seen[o.name]} and {o.kind}")
        elif isinstance(o, tuple):
            for x in o:
                walk(x)
        elif hasattr(o, "__dataclass_fields__"):
            for name in o.__dataclass_fields__:
                walk(getattr(o, name))

    walk(f)


def _parse_once(tokens, kinds):
    p = _FormulaParser(tokens, kinds)
    f = p.formula()
    if p.i != len(p.tokens):
        raise OsrSyntaxError("trailing input after formula")
    return f


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    # second pass lets quoted code see names that are variables elsewhere
    first = _parse_once(tokens, None)
    var_names = {}
    for node_meta in _all_metas(first):
        if node_meta.kind == "var":
            var_names[node_meta.name] = "var"
    f = _parse_once(tokens, var_names)
    _check_kinds(f)
    return f


def _all_metas(o):
    if isinstance(o, Meta):
        yield o
    elif isinstance(o, tuple):
        for x in o:
            yield from _all_metas(x)
    elif hasattr(o, "__dataclass_fields__"):
        for name in o.__dataclass_fields__:
            yield from _all_metas(getattr(o, name))


def format_formula(f: Formula) -> str:
    return str(f)


__all__ = ["parse_formula", "format_formula", "metas_in"]
