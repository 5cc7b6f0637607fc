"""Control-flow graphs and program composition."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import NotComposable
from .ast import Abort, CondGoto, Goto, Out, Program, relocate


@dataclass(frozen=True)
class Cfg:
    """Nodes are the points ``1..n``; the Out instruction is the unique sink."""

    n: int
    succ: dict[int, frozenset[int]]
    pred: dict[int, frozenset[int]]

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def edges(self):
        for u in self.nodes:
            for v in sorted(self.succ[u]):
                yield u, v

    def __hash__(self):
        return id(self)


@lru_cache(maxsize=1024)
def build_cfg(p: Program) -> Cfg:
    n = len(p)
    succ: dict[int, set[int]] = {l: set() for l in p.points()}
    for l in p.points():
        instr = p[l]
        if not isinstance(instr, (Abort, Goto, Out)):
            succ[l].add(l + 1)
        if isinstance(instr, (Goto, CondGoto)):
            succ[l].add(instr.target)
    pred: dict[int, set[int]] = {l: set() for l in p.points()}
    for u, vs in succ.items():
        for v in vs:
            pred[v].add(u)
    return Cfg(n, {k: frozenset(v) for k, v in succ.items()},
               {k: frozenset(v) for k, v in pred.items()})


def compose_programs(p: Program, q: Program) -> Program:
    """Sequential composition: run ``p`` up to its out, then the body of ``q``.

    Jump targets of ``q`` are shifted by ``len(p) - 2`` so they keep pointing at
    the same instructions.
    """
    missing = set(q.in_vars) - set(p.out_vars)
    if missing:
        raise NotComposable(missing)
    shift = len(p) - 2
    tail = tuple(relocate(instr, lambda m: m + shift) for instr in q.instrs[1:])
    return Program(p.instrs[:-1] + tail)
