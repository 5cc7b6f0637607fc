"""Classic dataflow analyses over the CFG.

Liveness is the conjunction used by the CTL ``is_live`` predicate: a variable
is live at ``l`` when it is definitely assigned on every entry path reaching
``l`` and may be read before being redefined on some path leaving ``l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..ir.ast import Program, defined_vars, used_vars
from ..ir.cfg import build_cfg

# pseudo-definition standing for "unassigned at entry"
ENTRY_DEF = 0


@dataclass(frozen=True)
class DataflowTables:
    live_in: dict[int, frozenset[str]]
    assigned_in: dict[int, frozenset[str]]
    reaching_in: dict[int, dict[str, frozenset[int]]]

    def __hash__(self):
        return id(self)


def _may_live(p: Program, cfg) -> dict[int, frozenset[str]]:
    uses = {l: used_vars(p[l]) for l in p.points()}
    defs = {l: defined_vars(p[l]) for l in p.points()}
    live = {l: frozenset() for l in p.points()}
    changed = True
    while changed:
        changed = False
        for l in reversed(p.points()):
            out = frozenset().union(*(live[s] for s in cfg.succ[l]))
            new = uses[l] | (out - defs[l])
            if new != live[l]:
                live[l] = new
                changed = True
    return live


def _must_assigned(p: Program, cfg) -> dict[int, frozenset[str]]:
    universe = p.variables()
    defs = {l: defined_vars(p[l]) for l in p.points()}
    # unreachable points keep the top element
    da = {l: universe for l in p.points()}
    da[1] = frozenset()
    changed = True
    while changed:
        changed = False
        for l in p.points():
            if l == 1:
                continue
            preds = cfg.pred[l]
            new = (frozenset.intersection(*(da[q] | defs[q] for q in preds))
                   if preds else frozenset())
            if new != da[l]:
                da[l] = new
                changed = True
    return da


def _reaching(p: Program, cfg) -> dict[int, dict[str, frozenset[int]]]:
    names = sorted(p.variables())
    defs = {l: defined_vars(p[l]) for l in p.points()}
    rd_in = {l: {x: frozenset() for x in names} for l in p.points()}

    def transfer(l):
        return {x: (frozenset({l}) if x in defs[l] else rd_in[l][x]) for x in names}

    changed = True
    while changed:
        changed = False
        for l in p.points():
            incoming = [transfer(q) for q in cfg.pred[l]]
            new = {}
            for x in names:
                acc = frozenset({ENTRY_DEF}) if l == 1 else frozenset()
                for out in incoming:
                    acc |= out[x]
                new[x] = acc
            if new != rd_in[l]:
                rd_in[l] = new
                changed = True
    return rd_in


@lru_cache(maxsize=2048)
def tables(p: Program) -> DataflowTables:
    cfg = build_cfg(p)
    return DataflowTables(_may_live(p, cfg), _must_assigned(p, cfg), _reaching(p, cfg))


def _check_point(p: Program, l: int):
    if not 1 <= l <= len(p):
        raise ValueError(f"point {l} outside [1, {len(p)}]")


def may_live_vars(p: Program, l: int) -> frozenset[str]:
    """Variables read before redefinition on some path from ``l``."""
    _check_point(p, l)
    return tables(p).live_in[l]


def definitely_assigned(p: Program, l: int) -> frozenset[str]:
    """Variables assigned on every entry path strictly before ``l``."""
    _check_point(p, l)
    return tables(p).assigned_in[l]


def live_vars(p: Program, l: int) -> frozenset[str]:
    _check_point(p, l)
    t = tables(p)
    return t.assigned_in[l] & t.live_in[l]


def reaching_defs(p: Program, l: int, x: str) -> frozenset[int]:
    """Points whose definition of ``x`` may reach ``l``; 0 means unassigned at entry."""
    _check_point(p, l)
    return tables(p).reaching_in[l].get(x, frozenset({ENTRY_DEF}) if l == 1 else frozenset())


def unique_reaching_def(p: Program, l: int, x: str) -> int | None:
    defs = reaching_defs(p, l, x)
    if len(defs) == 1:
        (d,) = defs
        if d != ENTRY_DEF:
            return d
    return None
