"""Meta-variables, substitutions, and pattern matching over syntax trees.

A pattern is any syntax tree (instruction, expression, CTL formula) in which
some leaves are :class:`Meta` placeholders. ``Hole(e, v)`` is the pattern
``e[v]`` (an expression ``e`` mentioning variable ``v``) and ``Plug(e, v, c)``
builds ``e[c]`` by substituting ``c`` for ``v`` in ``e``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from ..errors import UnboundMetaVariable
from ..ir.ast import BinOp, IntLit, VarRef, expr_vars, substitute_var

KINDS = ("point", "var", "expr", "instr")


@dataclass(frozen=True)
class Meta:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown meta-variable kind {self.kind!r}")

    def __str__(self):
        return f"?{self.name}"


@dataclass(frozen=True)
class Hole:
    expr: Meta
    var: Meta

    def __str__(self):
        return f"{self.expr}[{self.var}]"


@dataclass(frozen=True)
class Plug:
    expr: Meta
    var: Meta
    value: Any

    def __str__(self):
        return f"{self.expr}[{self.var}:={self.value}]"


Substitution = Mapping[str, Any]


def metas_in(obj) -> dict[str, Meta]:
    """All meta-variables occurring in ``obj``, by name."""
    found: dict[str, Meta] = {}

    def walk(o):
        if isinstance(o, Meta):
            found.setdefault(o.name, o)
        elif isinstance(o, tuple):
            for x in o:
                walk(x)
        elif dataclasses.is_dataclass(o) and not isinstance(o, type):
            for f in dataclasses.fields(o):
                walk(getattr(o, f.name))

    walk(obj)
    return found


def is_ground(obj) -> bool:
    return not metas_in(obj)


def _as_expr(value):
    # a var-kind binding used where an expression is expected
    return VarRef(value) if isinstance(value, str) else value


def apply_subst(obj, theta: Substitution, partial: bool = False):
    """Replace bound meta-variables in ``obj``.

    Unbound ones raise :class:`UnboundMetaVariable` unless ``partial``.
    """
    if isinstance(obj, Meta):
        if obj.name in theta:
            return theta[obj.name]
        if partial:
            return obj
        raise UnboundMetaVariable(obj.name)
    if isinstance(obj, Hole):
        return _as_expr(apply_subst(obj.expr, theta, partial))
    if isinstance(obj, Plug):
        e = apply_subst(obj.expr, theta, partial)
        v = apply_subst(obj.var, theta, partial)
        c = _as_expr(apply_subst(obj.value, theta, partial))
        if isinstance(e, Meta) or isinstance(v, Meta) or isinstance(c, Meta):
            return Plug(e, v, c)
        return substitute_var(e, v, c)
    if isinstance(obj, BinOp):
        return BinOp(obj.op, _as_expr(apply_subst(obj.left, theta, partial)),
                     _as_expr(apply_subst(obj.right, theta, partial)))
    if isinstance(obj, tuple):
        return tuple(apply_subst(x, theta, partial) for x in obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        changes = {}
        for f in dataclasses.fields(obj):
            old = getattr(obj, f.name)
            new = apply_subst(old, theta, partial)
            if new is not old:
                changes[f.name] = new
        if not changes:
            return obj
        if hasattr(obj, "rhs") or hasattr(obj, "cond"):
            for key in ("rhs", "cond"):
                if key in changes:
                    changes[key] = _as_expr(changes[key])
        return dataclasses.replace(obj, **changes)
    return obj


def _bind(theta: dict, meta: Meta, value) -> Iterator[dict]:
    if meta.name in theta:
        if theta[meta.name] == value:
            yield theta
        return
    out = dict(theta)
    out[meta.name] = value
    yield out


def match(pattern, obj, theta: Substitution | None = None) -> Iterator[dict]:
    """Yield every extension of ``theta`` under which ``pattern`` equals ``obj``.

    Alternatives are produced in a deterministic order (hole variables sorted).
    """
    theta = dict(theta or {})
    if isinstance(pattern, Meta):
        if pattern.kind == "var" and isinstance(obj, VarRef):
            obj = obj.name
        yield from _bind(theta, pattern, obj)
        return
    if isinstance(pattern, Hole):
        if not isinstance(obj, (IntLit, VarRef, BinOp)):
            return
        for t in match(pattern.expr, obj, theta):
            for name in sorted(expr_vars(obj)):
                yield from _bind(t, pattern.var, name)
        return
    if isinstance(pattern, tuple):
        if not isinstance(obj, tuple) or len(obj) != len(pattern):
            return
        if not pattern:
            yield theta
            return
        for t in match(pattern[0], obj[0], theta):
            yield from match(pattern[1:], obj[1:], t)
        return
    if dataclasses.is_dataclass(pattern) and not isinstance(pattern, type):
        if type(pattern) is not type(obj):
            return
        names = [f.name for f in dataclasses.fields(pattern)]
        yield from match(tuple(getattr(pattern, n) for n in names),
                         tuple(getattr(obj, n) for n in names), theta)
        return
    if pattern == obj:
        yield theta
