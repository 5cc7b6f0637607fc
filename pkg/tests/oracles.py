"""Brute-force reference implementations used to check the production analyses.

Everything here works by explicit path enumeration or plain graph search on
a successor relation rebuilt from the instructions, sharing no code with the
fixpoint engines under test.
"""

from __future__ import annotations

from osrlab.analysis.ctl import (AU, AX, BWD, EU, EX, FWD, And, At, ConLit, Def, FreeVar, Not,
                                 Or, Point, Stmt, Trans, TrueF, Use)
from osrlab.ir.ast import (Abort, Assign, BinOp, CondGoto, Goto, In, IntLit, Out, Program, Skip,
                           VarRef)


# --- instruction-level facts -------------------------------------------------------

def expr_names(e) -> set[str]:
    if isinstance(e, VarRef):
        return {e.name}
    if isinstance(e, BinOp):
        return expr_names(e.left) | expr_names(e.right)
    return set()


def defs_at(p: Program, l: int) -> set[str]:
    i = p[l]
    if isinstance(i, Assign):
        return {i.target}
    if isinstance(i, In):
        return set(i.vars)
    return set()


def uses_at(p: Program, l: int) -> set[str]:
    i = p[l]
    if isinstance(i, Assign):
        return expr_names(i.rhs)
    if isinstance(i, CondGoto):
        return expr_names(i.cond)
    if isinstance(i, Out):
        return set(i.vars)
    return set()


def successors(p: Program, l: int) -> list[int]:
    i = p[l]
    if isinstance(i, (Out, Abort)):
        return []
    if isinstance(i, Goto):
        return [i.target]
    if isinstance(i, CondGoto):
        return sorted({l + 1, i.target})
    assert isinstance(i, (Assign, Skip, In))
    return [l + 1]


def predecessors(p: Program, l: int) -> list[int]:
    return [k for k in p.points() if l in successors(p, k)]


def is_acyclic(p: Program) -> bool:
    state: dict[int, int] = {}

    def visit(n):
        state[n] = 1
        for m in successors(p, n):
            if state.get(m) == 1 or (m not in state and not visit(m)):
                return False
        state[n] = 2
        return True

    return all(visit(n) for n in p.points() if n not in state)


# --- path enumeration --------------------------------------------------------------

def complete_paths(p: Program, start: int, direction: str) -> list[tuple[int, ...]]:
    """Every maximal path from ``start``; only meaningful on acyclic CFGs."""
    nxt = (lambda n: successors(p, n)) if direction == FWD else (lambda n: predecessors(p, n))
    out = []

    def walk(path):
        following = nxt(path[-1])
        if not following:
            out.append(tuple(path))
            return
        for m in following:
            assert m not in path, "complete-path enumeration needs an acyclic CFG"
            walk(path + [m])

    walk([start])
    return out


def simple_paths(p: Program, src: int, dst: int) -> list[tuple[int, ...]]:
    out = []

    def walk(path):
        if path[-1] == dst:
            out.append(tuple(path))
            return
        for m in successors(p, path[-1]):
            if m not in path:
                walk(path + [m])

    walk([src])
    return out


def reachable_avoiding(p: Program, src: int, dst: int, blocked: set[int]) -> bool:
    """A path of at least one edge from ``src`` to ``dst`` whose inner nodes avoid ``blocked``."""
    seen, stack = set(), list(successors(p, src))
    while stack:
        n = stack.pop()
        if n == dst:
            return True
        if n in seen or n in blocked:
            continue
        seen.add(n)
        stack.extend(successors(p, n))
    return False


# --- dataflow oracles --------------------------------------------------------------

def definitely_assigned(p: Program, l: int) -> set[str]:
    """Variables defined on every entry path strictly before ``l``.

    Simple paths suffice: dropping a cycle never adds a definition.
    An unreachable point gets every variable, the empty meet.
    """
    paths = simple_paths(p, 1, l)
    universe = set(p.variables())
    if not paths:
        return universe
    out = universe
    for path in paths:
        seen: set[str] = set()
        for n in path[:-1]:
            seen |= defs_at(p, n)
        out &= seen
    return out


def may_live(p: Program, l: int) -> set[str]:
    out = set()
    for x in p.variables():
        if x in uses_at(p, l):
            out.add(x)
            continue
        if x in defs_at(p, l):
            continue
        users = {u for u in p.points() if x in uses_at(p, u)}
        killers = {k for k in p.points() if x in defs_at(p, k) and x not in uses_at(p, k)}
        if any(reachable_avoiding(p, l, u, killers - {u}) for u in users):
            out.add(x)
    return out


def live(p: Program, l: int) -> set[str]:
    if l == 1:
        return set()
    return definitely_assigned(p, l) & may_live(p, l)


ENTRY = 0


def reaching(p: Program, l: int, x: str) -> set[int]:
    """Definitions of ``x`` that reach ``l``, with ``ENTRY`` standing for "possibly unset"."""
    defs = {d for d in p.points() if x in defs_at(p, d)}
    out = set()
    for d in defs:
        if (d == 1 or reachable_avoiding(p, 1, d, set())) and reachable_avoiding(p, d, l, defs):
            out.add(d)
    if 1 == l or (1 not in defs and reachable_avoiding(p, 1, l, defs)):
        out.add(ENTRY)
    return out


def urdef(p: Program, l: int, x: str) -> int | None:
    r = reaching(p, l, x)
    if len(r) == 1 and ENTRY not in r:
        return next(iter(r))
    return None


# --- CTL over complete paths -------------------------------------------------------

def _nexts(p, n, direction):
    return successors(p, n) if direction == FWD else predecessors(p, n)


def holds_at(p: Program, n: int, f) -> bool:
    """Truth of a ground formula at ``n``, quantifying over explicitly listed complete paths."""
    if isinstance(f, TrueF):
        return True
    if isinstance(f, Def):
        return f.var in defs_at(p, n)
    if isinstance(f, Use):
        return f.var in uses_at(p, n)
    if isinstance(f, Stmt):
        return p[n] == f.instr
    if isinstance(f, Point):
        return n == f.point
    if isinstance(f, Trans):
        i = p[n]
        return not (isinstance(i, Assign) and i.target in expr_names(f.expr))
    if isinstance(f, ConLit):
        return isinstance(f.expr, IntLit)
    if isinstance(f, FreeVar):
        return f.var in expr_names(f.expr)
    if isinstance(f, Not):
        return not holds_at(p, n, f.arg)
    if isinstance(f, And):
        return holds_at(p, n, f.left) and holds_at(p, n, f.right)
    if isinstance(f, Or):
        return holds_at(p, n, f.left) or holds_at(p, n, f.right)
    if isinstance(f, At):
        return holds_at(p, f.point, f.arg)
    if isinstance(f, AX):
        return all(holds_at(p, m, f.arg) for m in _nexts(p, n, f.direction))
    if isinstance(f, EX):
        return any(holds_at(p, m, f.arg) for m in _nexts(p, n, f.direction))
    if isinstance(f, (AU, EU)):
        def until(path):
            for m in path:
                if holds_at(p, m, f.until):
                    return True
                if not holds_at(p, m, f.hold):
                    return False
            return False
        paths = complete_paths(p, n, f.direction)
        return all(map(until, paths)) if isinstance(f, AU) else any(map(until, paths))
    raise TypeError(f"unsupported formula {f!r}")


def formula_battery(p: Program) -> list:
    """Ground formulas exercising every operator, instantiated with ``p``'s objects."""
    vs = sorted(p.variables())
    n = len(p)
    out = []
    for x in vs:
        dx, ux = Def(x), Use(x)
        out += [
            And(AX(AU(TrueF(), dx, BWD), BWD), EU(Not(dx), ux, FWD)),
            EU(Not(dx), ux, FWD),
            AU(Not(dx), ux, FWD),
            AX(Not(EU(TrueF(), ux, FWD)), FWD),
            AX(AU(TrueF(), dx, BWD), BWD),
            EX(ux, FWD), AX(ux, FWD), EX(dx, BWD), AX(dx, BWD),
            EU(TrueF(), dx, BWD), AU(Not(ux), dx, FWD),
            Or(dx, EX(EX(ux, FWD), FWD)),
        ]
        for d in p.points():
            if x in defs_at(p, d):
                out.append(AX(AU(Not(dx), And(Point(d), dx), BWD), BWD))
                out.append(At(d, EU(Not(dx), ux, FWD)))
    for a in range(1, n + 1):
        out.append(EX(Point(a), FWD))
        for b in range(1, n + 1):
            if a != b:
                out.append(Not(EU(Not(Point(a)), Point(b), FWD)))
    for l in p.points():
        i = p[l]
        if isinstance(i, Assign):
            out += [EU(TrueF(), Stmt(i), FWD), AU(Trans(i.rhs), Stmt(i), BWD),
                    ConLit(i.rhs), And(FreeVar(i.target, i.rhs), Not(Point(l)))]
    out.append(TrueF())
    return out
