"""Compensation code: value reconstruction and ``build_comp``.

``reconstruct`` walks unique reaching definitions in the destination program
backwards from the point where a value is demanded, emitting the defining
assignments in dependency order. It stops at values the source state already
holds:

* the variable is live at both ends and the destination's definition also
  reaches the OSR target (the classic both-live shortcut);
* the variable is in the mode's *pool* at the source and its unique reaching
  definition there is the very definition demanded in the destination (same
  point, same instruction up to value-preserving operand replacement).

The live pool is ``live(src, l)``. The avail pool additionally admits
definitely-assigned dead variables; those used become the *keep set*, values
whose liveness must be artificially extended.

Each variable may take a single definition version inside one compensation
block; any conflict (or a pass-through variable overwritten with a different
version) makes the block undefined rather than risking a wrong store.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..analysis.dataflow import definitely_assigned, live_vars, unique_reaching_def
from ..errors import ReconstructFailed
from ..ir.ast import Assign, In, Instr, Out, Program, expr_vars


class ReconstructMode(enum.Enum):
    LIVE = "live"
    AVAIL = "avail"


def parse_modes(text: str) -> tuple[ReconstructMode, ...]:
    return tuple(ReconstructMode(m.strip()) for m in text.split(",") if m.strip())


@dataclass(frozen=True)
class CompCode:
    """A straight-line program ``in ...; assignments; out ...`` plus its keep set."""

    program: Program
    keep: frozenset[str] = frozenset()

    @property
    def body(self) -> tuple[Instr, ...]:
        return self.program.instrs[1:-1]

    @property
    def size(self) -> int:
        return len(self.body)

    @property
    def in_vars(self) -> tuple[str, ...]:
        return self.program.in_vars

    @property
    def out_vars(self) -> tuple[str, ...]:
        return self.program.out_vars

    def lines(self) -> list[str]:
        return [str(i) for i in self.program.instrs]

    def __str__(self):
        return "; ".join(self.lines())


@dataclass
class ReconstructState:
    """Bookkeeping shared by all reconstructions within one ``build_comp``."""

    visited: set[int] = field(default_factory=set)
    versions: dict[str, int] = field(default_factory=dict)
    emitted: set[str] = field(default_factory=set)
    keep: set[str] = field(default_factory=set)


class _Reconstructor:
    def __init__(self, src: Program, l: int, dst: Program, l_dst: int,
                 mode: ReconstructMode, aliases: frozenset[int], state: ReconstructState):
        self.src, self.l, self.dst, self.l_dst = src, l, dst, l_dst
        self.mode = mode
        self.aliases = aliases
        self.state = state
        self.live_src = live_vars(src, l)
        self.live_dst = live_vars(dst, l_dst)
        if mode is ReconstructMode.AVAIL:
            self.pool = self.live_src | definitely_assigned(src, l)
        else:
            self.pool = self.live_src

    def _version(self, x: str, at: int):
        seen = self.state.versions.setdefault(x, at)
        if seen != at:
            raise ReconstructFailed(x, f"needs definitions at both {seen} and {at}")

    def _same_definition(self, x: str, at: int) -> bool:
        a, b = self.src[at], self.dst[at]
        if isinstance(a, In) and isinstance(b, In):
            return x in a.vars and x in b.vars
        if not (isinstance(a, Assign) and isinstance(b, Assign)):
            return False
        if a.target != x or b.target != x:
            return False
        return a == b or at in self.aliases

    def _from_pool(self, x: str, lhat: int) -> bool:
        if x not in self.pool:
            return False
        if unique_reaching_def(self.src, self.l, x) != lhat:
            return False
        return self._same_definition(x, lhat)

    def run(self, x: str, at: int) -> list[Instr]:
        lhat = unique_reaching_def(self.dst, at, x)
        if lhat is None:
            raise ReconstructFailed(x, f"no unique reaching definition at {at}")
        if self._from_pool(x, lhat):
            self._version(x, lhat)
            if x not in self.live_src:
                self.state.keep.add(x)
            return []
        instr = self.dst[lhat]
        if not isinstance(instr, Assign):
            raise ReconstructFailed(x, f"defined by the input header at {lhat}")
        if lhat in self.state.visited:
            self._version(x, lhat)
            return []
        self.state.visited.add(lhat)
        if (unique_reaching_def(self.dst, self.l_dst, x) == lhat
                and x in self.live_dst and x in self.live_src):
            self._version(x, lhat)
            return []
        code: list[Instr] = []
        operands = sorted(expr_vars(instr.rhs),
                          key=lambda y: (unique_reaching_def(self.dst, lhat, y) or 0, y))
        for y in operands:
            code += self.run(y, lhat)
        self._version(x, lhat)
        self.state.emitted.add(x)
        code.append(instr)
        return code


def reconstruct(x: str, src: Program, l: int, dst: Program, l_dst: int,
                l_at: int | None = None, mode: ReconstructMode = ReconstructMode.LIVE,
                aliases: frozenset[int] = frozenset(),
                state: ReconstructState | None = None) -> tuple[Instr, ...]:
    """Assignments giving ``x`` the value it would hold at ``l_at`` (default ``l_dst``) in ``dst``.

    Raises :class:`ReconstructFailed` when that value cannot be rebuilt from
    the source state at ``l``. Without a shared ``state``, avail mode tries
    the live pool first.
    """
    if state is None and mode is ReconstructMode.AVAIL:
        try:
            return reconstruct(x, src, l, dst, l_dst, l_at, ReconstructMode.LIVE, aliases)
        except ReconstructFailed:
            pass
    state = state if state is not None else ReconstructState()
    worker = _Reconstructor(src, l, dst, l_dst, mode, aliases, state)
    return tuple(worker.run(x, l_dst if l_at is None else l_at))


def try_build_comp(src: Program, l: int, dst: Program, l_dst: int,
                   mode: ReconstructMode = ReconstructMode.LIVE,
                   aliases: frozenset[int] = frozenset()) -> CompCode:
    """Like :func:`build_comp` but raises :class:`ReconstructFailed` with the reason.

    Avail mode only reaches into the wider pool when live-mode reconstruction
    fails, so keep sets stay minimal and live-feasible code is unchanged.
    """
    if mode is ReconstructMode.AVAIL:
        try:
            return _build(src, l, dst, l_dst, ReconstructMode.LIVE, aliases)
        except ReconstructFailed:
            pass
    return _build(src, l, dst, l_dst, mode, aliases)


def _build(src, l, dst, l_dst, mode, aliases) -> CompCode:
    state = ReconstructState()
    worker = _Reconstructor(src, l, dst, l_dst, mode, aliases, state)
    body: list[Instr] = []
    for x in sorted(worker.live_dst - worker.live_src):
        body += worker.run(x, l_dst)
    for x in sorted(worker.live_dst & state.emitted):
        if state.versions[x] != unique_reaching_def(dst, l_dst, x):
            raise ReconstructFailed(x, "overwritten with a stale definition")
    keep = frozenset(state.keep)
    header = In(tuple(sorted(worker.live_src | keep)))
    footer = Out(tuple(sorted(worker.live_dst)))
    return CompCode(Program((header, *body, footer)), keep)


def build_comp(src: Program, l: int, dst: Program, l_dst: int,
               mode: ReconstructMode = ReconstructMode.LIVE,
               aliases: frozenset[int] = frozenset()) -> CompCode | None:
    """Compensation code for an OSR from ``(src, l)`` to ``(dst, l_dst)``, or None if undefined."""
    try:
        return try_build_comp(src, l, dst, l_dst, mode, aliases)
    except ReconstructFailed:
        return None


__all__ = ["ReconstructMode", "parse_modes", "CompCode", "ReconstructState", "reconstruct",
           "try_build_comp", "build_comp"]
