"""Rewrite rules guarded by CTL side conditions, and the built-in CP, DCE, and Hoist."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from ..analysis.ctl import (AU, AX, BWD, EU, And, At, ConLit, Def, Formula, Not, Or, PathSemantics,
                            Point, Stmt, Trans, TrueF, Use, find_substitutions)
from ..analysis.meta import Hole, Meta, Plug, apply_subst, match, metas_in
from ..errors import NoMatch
from ..ir.ast import Assign, Instr, Program, Skip, VarRef
from .actions import AddInstr, DeleteInstr, HoistInstr, ReplaceOperand, SinkInstr


@dataclass(frozen=True)
class Clause:
    point: Meta
    lhs: Instr
    rhs: Instr


@dataclass(frozen=True)
class RewriteRule:
    name: str
    clauses: tuple[Clause, ...]
    condition: Formula
    # turns a substitution into the primitive actions of the edit
    actions: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        names = [c.point.name for c in self.clauses]
        if len(set(names)) != len(names):
            raise ValueError(f"rule {self.name}: clause points must be distinct")
        bound = metas_in(tuple(c.lhs for c in self.clauses)) | metas_in(self.condition)
        bound.update({c.point.name: c.point for c in self.clauses})
        unbound = set(metas_in(tuple(c.rhs for c in self.clauses))) - set(bound)
        if unbound:
            raise ValueError(f"rule {self.name}: rhs meta-variables {sorted(unbound)} are unbound")

    def __str__(self):
        return self.name


class RuleApplication(NamedTuple):
    program: Program
    forward: dict[int, int]
    backward: dict[int, int]
    log: tuple
    theta: dict


def identity_map(n: int) -> dict[int, int]:
    return {l: l for l in range(1, n + 1)}


def _pattern_matches(p: Program, clauses, theta) -> Iterator[dict]:
    if not clauses:
        yield theta
        return
    first, rest = clauses[0], clauses[1:]
    used = {theta[c.point.name] for c in clauses if c.point.name in theta}
    for l in p.points():
        if first.point.name in theta and theta[first.point.name] != l:
            continue
        if first.point.name not in theta and l in used:
            continue
        for t in match(first.lhs, p[l], theta):
            t = {**t, first.point.name: l}
            yield from _pattern_matches(p, rest, t)


def matches(p: Program, rule: RewriteRule,
            mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> Iterator[dict]:
    """Substitutions under which every clause matches and the side condition holds.

    Instruction patterns are matched first (clauses in order, points
    ascending); meta-variables left free are then enumerated by the checker.
    """
    for theta in _pattern_matches(p, rule.clauses, {}):
        yield from find_substitutions(p, rule.condition, theta, mode)


def _generic_actions(p: Program, rule: RewriteRule, theta: dict, rewritten: dict[int, Instr]):
    log = []
    for at, new in sorted(rewritten.items()):
        log.append(DeleteInstr(at, as_skip=False))
        log.append(AddInstr(new, at))
    return tuple(log)


def apply_rule(p: Program, rule: RewriteRule,
               mode: PathSemantics = PathSemantics.MAXIMAL_FINITE) -> RuleApplication:
    """Rewrite ``p`` with the first substitution satisfying ``rule``; raise NoMatch otherwise."""
    for theta in matches(p, rule, mode):
        rewritten = {theta[c.point.name]: apply_subst(c.rhs, theta) for c in rule.clauses}
        instrs = list(p.instrs)
        for at, new in rewritten.items():
            instrs[at - 1] = new
        out = Program(tuple(instrs))
        if out == p:
            continue
        log = (rule.actions(theta) if rule.actions is not None
               else _generic_actions(p, rule, theta, rewritten))
        ident = identity_map(len(p))
        return RuleApplication(out, ident, dict(ident), log, theta)
    raise NoMatch(rule.name)


# --- built-in rules -----------------------------------------------------------

def builtin_cp() -> RewriteRule:
    """``m: x := e[v]  =>  x := e[c]`` if conlit(c) and every backward path meets ``v := c`` first."""
    m, x, e = Meta("m", "point"), Meta("x", "var"), Meta("e", "expr")
    v, c = Meta("v", "var"), Meta("c", "expr")
    cond = And(ConLit(c), At(m, AU(Not(Def(v)), Stmt(Assign(v, c)), BWD)))
    return RewriteRule(
        "cp",
        (Clause(m, Assign(x, Hole(e, v)), Assign(x, Plug(e, v, c))),),
        cond,
        lambda t: (ReplaceOperand(t["m"], VarRef(t["v"]), t["c"]),),
    )


def builtin_dce() -> RewriteRule:
    """``m: x := e  =>  skip`` if no path after ``m`` reads ``x``."""
    m, x, e = Meta("m", "point"), Meta("x", "var"), Meta("e", "expr")
    cond = At(m, AX(Not(EU(TrueF(), Use(x)))))
    return RewriteRule(
        "dce",
        (Clause(m, Assign(x, e), Skip()),),
        cond,
        lambda t: (DeleteInstr(t["m"], as_skip=True),),
    )


def _move_action(t):
    src, dst = t["q"], t["p"]
    return (HoistInstr(src, dst),) if dst < src else (SinkInstr(src, dst),)


def builtin_hoist() -> RewriteRule:
    """Move ``x := e`` from ``q`` onto an existing ``skip`` at ``p``.

    Guard: from ``p`` no path reads ``x`` before reaching ``q``; backwards from
    ``q`` nothing but ``q`` assigns ``x`` and nothing modifies ``e`` before ``p``.
    """
    p, q = Meta("p", "point"), Meta("q", "point")
    x, e = Meta("x", "var"), Meta("e", "expr")
    cond = And(
        At(p, AU(Not(Use(x)), Point(q))),
        At(q, AU(And(Or(Not(Def(x)), Point(q)), Trans(e)), Point(p), BWD)),
    )
    return RewriteRule(
        "hoist",
        (Clause(p, Skip(), Assign(x, e)), Clause(q, Assign(x, e), Skip())),
        cond,
        _move_action,
    )


BUILTINS: dict[str, Callable[[], RewriteRule]] = {
    "cp": builtin_cp,
    "dce": builtin_dce,
    "hoist": builtin_hoist,
}


def builtin(name: str) -> RewriteRule:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown rule {name!r}; expected one of {sorted(BUILTINS)}") from None


__all__ = ["Clause", "RewriteRule", "RuleApplication", "identity_map", "matches", "apply_rule",
           "builtin_cp", "builtin_dce", "builtin_hoist", "BUILTINS", "builtin"]
