"""CTL over control-flow graphs.

Formulas are frozen dataclasses; temporal operators carry a direction
(``"fwd"`` walks successors, ``"bwd"`` walks predecessors). Two path
semantics are offered:

* ``FIXPOINT``: textbook least-fixpoint CTL, where infinite paths count.
* ``MAXIMAL_FINITE``: quantification over complete paths only, i.e. finite
  maximal paths ending in a node without successors (predecessors when
  walking backwards). Nodes heading no complete path satisfy every
  A-until vacuously and no E-until.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Iterator

from ..errors import UnboundMetaVariable
from ..ir.ast import (Assign, Expr, IntLit, Program, defined_vars, expr_vars, instr_exprs,
                      subexprs, used_vars)
from ..ir.cfg import build_cfg
from .meta import Meta, apply_subst, metas_in

FWD, BWD = "fwd", "bwd"


class PathSemantics(enum.Enum):
    FIXPOINT = "fixpoint"
    MAXIMAL_FINITE = "maximal-finite"


class Formula:
    """Base class for CTL formulas."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Def(Formula):
    var: Any

    def __str__(self):
        return f"(def {self.var})"


@dataclass(frozen=True)
class Use(Formula):
    var: Any

    def __str__(self):
        return f"(use {self.var})"


@dataclass(frozen=True)
class Stmt(Formula):
    instr: Any

    def __str__(self):
        return f'(stmt "{self.instr}")'


@dataclass(frozen=True)
class Point(Formula):
    point: Any

    def __str__(self):
        return f"(point {self.point})"


@dataclass(frozen=True)
class Trans(Formula):
    expr: Any

    def __str__(self):
        return f'(trans "{self.expr}")'


@dataclass(frozen=True)
class ConLit(Formula):
    expr: Any

    def __str__(self):
        return f'(conlit "{self.expr}")'


@dataclass(frozen=True)
class FreeVar(Formula):
    var: Any
    expr: Any

    def __str__(self):
        return f'(freevar {self.var} "{self.expr}")'


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def __str__(self):
        return f"(not {self.arg})"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class At(Formula):
    """``m |= arg``: true everywhere iff ``arg`` holds at point ``m``."""

    point: Any
    arg: Formula

    def __str__(self):
        return f"(at {self.point} {self.arg})"


@dataclass(frozen=True)
class AX(Formula):
    arg: Formula
    direction: str = FWD

    def __str__(self):
        return f"({self.direction}-AX {self.arg})"


@dataclass(frozen=True)
class EX(Formula):
    arg: Formula
    direction: str = FWD

    def __str__(self):
        return f"({self.direction}-EX {self.arg})"


@dataclass(frozen=True)
class AU(Formula):
    hold: Formula
    until: Formula
    direction: str = FWD

    def __str__(self):
        return f"({self.direction}-AU {self.hold} {self.until})"


@dataclass(frozen=True)
class EU(Formula):
    hold: Formula
    until: Formula
    direction: str = FWD

    def __str__(self):
        return f"({self.direction}-EU {self.hold} {self.until})"


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# --- predicates from the liveness/urdef definitions -------------------------

def is_live(x) -> Formula:
    return And(AX(AU(TrueF(), Def(x), BWD), BWD), EU(Not(Def(x)), Use(x), FWD))


def urdef(x, point) -> Formula:
    return AX(AU(Not(Def(x)), And(Point(point), Def(x)), BWD), BWD)


def dominates(a, b) -> Formula:
    """At the entry node: every path to ``b`` passes through ``a``."""
    return Not(EU(Not(Point(a)), Point(b), FWD))


# --- evaluation ---------------------------------------------------------------

def _neighbours(p: Program, direction: str):
    cfg = build_cfg(p)
    return cfg.succ if direction == FWD else cfg.pred


@lru_cache(maxsize=512)
def _dead_ends(p: Program, direction: str) -> frozenset[int]:
    nb = _neighbours(p, direction)
    return frozenset(l for l in p.points() if not nb[l])


@lru_cache(maxsize=512)
def _reaches_dead_end(p: Program, direction: str) -> frozenset[int]:
    back = _neighbours(p, BWD if direction == FWD else FWD)
    seen = set(_dead_ends(p, direction))
    stack = list(seen)
    while stack:
        n = stack.pop()
        for m in back[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return frozenset(seen)


def _all_next(p, direction, s: frozenset) -> frozenset:
    nb = _neighbours(p, direction)
    return frozenset(l for l in p.points() if nb[l] <= s)


def _some_next(p, direction, s: frozenset) -> frozenset:
    nb = _neighbours(p, direction)
    return frozenset(l for l in p.points() if nb[l] & s)


def _lfp(step) -> frozenset:
    z = frozenset()
    while True:
        nxt = step(z)
        if nxt == z:
            return z
        z = nxt


def _local(p: Program, f: Formula) -> frozenset[int] | None:
    pts = p.points()
    everything = frozenset(pts)
    if isinstance(f, TrueF):
        return everything
    if isinstance(f, Def):
        return frozenset(l for l in pts if f.var in defined_vars(p[l]))
    if isinstance(f, Use):
        return frozenset(l for l in pts if f.var in used_vars(p[l]))
    if isinstance(f, Stmt):
        return frozenset(l for l in pts if p[l] == f.instr)
    if isinstance(f, Point):
        return frozenset({f.point}) & everything
    if isinstance(f, Trans):
        names = expr_vars(f.expr)
        return frozenset(l for l in pts
                         if not (isinstance(p[l], Assign) and p[l].target in names))
    if isinstance(f, ConLit):
        return everything if isinstance(f.expr, IntLit) else frozenset()
    if isinstance(f, FreeVar):
        return everything if f.var in expr_vars(f.expr) else frozenset()
    return None


@lru_cache(maxsize=8192)
def satisfying_points(p: Program, f: Formula,
                      mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> frozenset[int]:
    """The set of points of ``p`` at which the ground formula ``f`` holds."""
    local = _local(p, f)
    if local is not None:
        return local
    everything = frozenset(p.points())
    sat = lambda g: satisfying_points(p, g, mode)  # noqa: E731
    if isinstance(f, Not):
        return everything - sat(f.arg)
    if isinstance(f, And):
        return sat(f.left) & sat(f.right)
    if isinstance(f, Or):
        return sat(f.left) | sat(f.right)
    if isinstance(f, At):
        return everything if f.point in sat(f.arg) else frozenset()
    if isinstance(f, AX):
        return _all_next(p, f.direction, sat(f.arg))
    if isinstance(f, EX):
        return _some_next(p, f.direction, sat(f.arg))
    if isinstance(f, (AU, EU)):
        hold, until, d = sat(f.hold), sat(f.until), f.direction
        if mode is PathSemantics.FIXPOINT:
            if isinstance(f, EU):
                return _lfp(lambda z: until | (hold & _some_next(p, d, z)))
            has_next = everything - _dead_ends(p, d)
            return _lfp(lambda z: until | (hold & has_next & _all_next(p, d, z)))
        finite = _reaches_dead_end(p, d)
        if isinstance(f, EU):
            return _lfp(lambda z: (until & finite) | (hold & _some_next(p, d, z)))
        # complement of "some complete path violates the until"
        bad_start = _dead_ends(p, d) | ((everything - hold) & finite)
        bad = _lfp(lambda z: (everything - until) & (bad_start | _some_next(p, d, z)))
        return everything - bad
    raise TypeError(f"not a CTL formula: {f!r}")


def _require_ground(f):
    free = metas_in(f)
    if free:
        raise UnboundMetaVariable(sorted(free)[0])


def check_ctl(p: Program, l: int, f: Formula,
              mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> bool:
    """``p, l |= f``."""
    _require_ground(f)
    if not 1 <= l <= len(p):
        raise ValueError(f"point {l} outside [1, {len(p)}]")
    return l in satisfying_points(p, f, mode)


def holds(p: Program, f: Formula, mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> bool:
    """``p |= f``: ``f`` holds at every point (the reading used for rule side conditions)."""
    _require_ground(f)
    return satisfying_points(p, f, mode) == frozenset(p.points())


# --- substitution search ------------------------------------------------------

_KIND_ORDER = {"point": 0, "var": 1, "expr": 2, "instr": 3}


def _expr_key(e: Expr):
    return (0, e.value, "") if isinstance(e, IntLit) else (1, 0, str(e))


def meta_domain(p: Program, kind: str) -> list:
    """Candidate bindings for a meta-variable of ``kind``, in ascending order."""
    if kind == "point":
        return list(p.points())
    if kind == "var":
        return sorted(p.variables())
    if kind == "expr":
        found = {sub for instr in p.instrs for e in instr_exprs(instr) for sub in subexprs(e)}
        return sorted(found, key=_expr_key)
    seen, out = set(), []
    for instr in p.instrs:
        if instr not in seen:
            seen.add(instr)
            out.append(instr)
    return out


def find_substitutions(p: Program, f: Formula, theta: dict | None = None,
                       mode: PathSemantics = PathSemantics.MAXIMAL_FINITE,
                       anchor: str | None = None) -> Iterator[dict]:
    """Yield every extension of ``theta`` making ``f`` true.

    With ``anchor`` naming a point meta-variable, ``f`` is read as
    ``anchor |= f``; otherwise ``f`` must hold at every point. Free
    meta-variables range over objects occurring in ``p``; results come in
    ascending order (point metas first, then variables, expressions,
    instructions; names break ties).
    """
    theta = dict(theta or {})
    body = At(Meta(anchor, "point"), f) if anchor is not None else f
    partial = apply_subst(body, theta, partial=True)
    free = sorted(metas_in(partial).values(), key=lambda m: (_KIND_ORDER[m.kind], m.name))
    domains = [meta_domain(p, m.kind) for m in free]
    for values in product(*domains):
        extra = {m.name: v for m, v in zip(free, values)}
        ground = apply_subst(partial, extra)
        if holds(p, ground, mode):
            yield {**theta, **extra}


def substitutions(p: Program, f: Formula, theta: dict | None = None,
                  mode: PathSemantics = PathSemantics.MAXIMAL_FINITE,
                  anchor: str | None = None) -> list[dict]:
    return list(find_substitutions(p, f, theta, mode, anchor))


def live_by_ctl(p: Program, l: int,
                mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> frozenset[str]:
    """Liveness read straight off the ``is_live`` formula (no point-1 override)."""
    return frozenset(x for x in p.variables() if check_ctl(p, l, is_live(x), mode))


def urdef_by_ctl(p: Program, l: int, x: str,
                 mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> int | None:
    hits = [d for d in p.points() if check_ctl(p, l, urdef(x, d), mode)]
    return hits[0] if len(hits) == 1 else None


__all__ = [
    "FWD", "BWD", "PathSemantics", "Formula", "TrueF", "Def", "Use", "Stmt", "Point", "Trans",
    "ConLit", "FreeVar", "Not", "And", "Or", "At", "AX", "EX", "AU", "EU", "conj", "disj",
    "is_live", "urdef", "dominates", "satisfying_points", "check_ctl", "holds",
    "meta_domain", "find_substitutions", "substitutions", "live_by_ctl", "urdef_by_ctl",
]
