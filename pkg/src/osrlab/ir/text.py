"""The `.osr` line format.

One instruction per line; ``#`` starts a comment; blank and comment-only lines
do not consume instruction indices. Grammar::

    instr := IDENT ':=' expr | 'if' expr 'goto' INT | 'goto' INT
           | 'skip' | 'abort' | 'in' IDENT* | 'out' IDENT*
    expr  := sum [('=='|'!='|'<'|'<=') sum]
    sum   := term (('+'|'-') term)*
    term  := atom ('*' atom)*
    atom  := INT | '-' INT | IDENT | '(' expr ')'

The printer emits single spaces and parenthesizes every nested operation, so
``parse_program(print_program(p)) == p``.
"""

from __future__ import annotations

import re

from ..errors import OsrSyntaxError
from .ast import (COMPARE_OPS, Abort, Assign, BinOp, CondGoto, Goto, In, IntLit, Out,
                  Program, Skip, VarRef, check_structure)

KEYWORDS = frozenset({"if", "goto", "skip", "abort", "in", "out"})

_TOKEN = re.compile(r"\s*(?:(\d+)|(\??[A-Za-z_][A-Za-z0-9_]*)|(:=|==|!=|<=|[-+*<()]))")


def tokenize(text: str, line: int | None = None) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise OsrSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, line, metas):
        self.tokens = tokens
        self.i = 0
        self.line = line
        # name -> kind for meta-variables (``?name``); None forbids them
        self.metas = metas

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise OsrSyntaxError("unexpected end of line", self.line)
        if expected is not None and tok != expected:
            raise OsrSyntaxError(f"expected {expected!r}, found {tok!r}", self.line)
        self.i += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise OsrSyntaxError(f"trailing input {self.peek()!r}", self.line)

    def meta(self, tok, default_kind):
        from ..analysis.meta import Meta

        if self.metas is None:
            raise OsrSyntaxError(f"meta-variable {tok} not allowed here", self.line)
        name = tok[1:]
        return Meta(name, self.metas.get(name, default_kind))

    def ident(self):
        tok = self.take()
        if tok.startswith("?"):
            return self.meta(tok, "var")
        if not (tok[0].isalpha() or tok[0] == "_") or tok in KEYWORDS:
            raise OsrSyntaxError(f"expected identifier, found {tok!r}", self.line)
        return tok

    def integer(self):
        tok = self.take()
        if tok.startswith("?"):
            return self.meta(tok, "point")
        if not tok.isdigit():
            raise OsrSyntaxError(f"expected integer, found {tok!r}", self.line)
        return int(tok)

    def expr(self):
        left = self.sum()
        if self.peek() in COMPARE_OPS:
            op = self.take()
            left = BinOp(op, left, self.sum())
        return left

    def sum(self):
        left = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.atom()
        while self.peek() == "*":
            self.take()
            left = BinOp("*", left, self.atom())
        return left

    def atom(self):
        tok = self.take()
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        if tok == "-" and self.peek() is not None and self.peek().isdigit():
            return IntLit(-int(self.take()))
        if tok.isdigit():
            return IntLit(int(tok))
        if tok.startswith("?"):
            m = self.meta(tok, "expr")
            return VarRef(m) if m.kind == "var" else m
        if tok in KEYWORDS or not (tok[0].isalpha() or tok[0] == "_"):
            raise OsrSyntaxError(f"unexpected {tok!r} in expression", self.line)
        return VarRef(tok)

    def instr(self):
        tok = self.peek()
        if tok == "if":
            self.take()
            cond = self.expr()
            self.take("goto")
            return CondGoto(cond, self.integer())
        if tok == "goto":
            self.take()
            return Goto(self.integer())
        if tok == "skip":
            self.take()
            return Skip()
        if tok == "abort":
            self.take()
            return Abort()
        if tok in ("in", "out"):
            self.take()
            names = []
            while self.peek() is not None:
                names.append(self.ident())
            return In(tuple(names)) if tok == "in" else Out(tuple(names))
        target = self.ident()
        self.take(":=")
        return Assign(target, self.expr())


def parse_expr(text: str, metas: dict[str, str] | None = None):
    p = _Parser(tokenize(text), None, metas)
    e = p.expr()
    p.done()
    return e


def parse_instr(text: str, line: int | None = None, metas: dict[str, str] | None = None):
    tokens = tokenize(text, line)
    if not tokens:
        raise OsrSyntaxError("empty instruction", line)
    p = _Parser(tokens, line, metas)
    instr = p.instr()
    p.done()
    return instr


def parse_program(text: str) -> Program:
    """Parse `.osr` source; instruction k comes from the k-th non-blank line."""
    instrs, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        instrs.append(parse_instr(body, lineno))
        lines.append(lineno)
    check_structure(instrs, lines)
    return Program(tuple(instrs))


def print_program(p: Program) -> str:
    return str(p)


def load_program(path) -> Program:
    with open(path, encoding="utf-8") as f:
        return parse_program(f.read())
