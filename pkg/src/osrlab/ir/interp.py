"""Small-step interpreter: stores, states, outcomes, traces.

The transition rules are total: situations the formal semantics leaves
undefined (reading an unbound variable, a failed in/out check, abort) surface
as distinct :class:`RunOutcome` variants, and a fuel bound stands in for
divergence.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

from ..errors import Stuck, UndefinedVariable
from .ast import (Abort, Assign, CondGoto, Expr, Goto, In, IntLit, Out, Program,
                  Skip, VarRef)


class Store(Mapping):
    """Immutable finite map from variable names to integers; absence means unbound."""

    __slots__ = ("_d", "_hash")

    def __init__(self, bindings=(), **kw):
        d = dict(bindings)
        d.update(kw)
        self._d = d
        self._hash = None

    def __getitem__(self, name):
        return self._d[name]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def restrict(self, names: Iterable[str]) -> "Store":
        keep = set(names)
        return Store({k: v for k, v in self._d.items() if k in keep})

    def update(self, name: str, value: int) -> "Store":
        d = dict(self._d)
        d[name] = value
        return Store(d)

    def __repr__(self):
        return "{" + ", ".join(f"{k}:{self._d[k]}" for k in sorted(self._d)) + "}"

    __str__ = __repr__


class ProgState(NamedTuple):
    store: Store
    point: int


@dataclass(frozen=True)
class Completed:
    final: Store

    def __str__(self):
        return f"Completed {self.final}"


@dataclass(frozen=True)
class Aborted:
    at: int

    def __str__(self):
        return f"Aborted at {self.at}"


@dataclass(frozen=True)
class UndefinedVar:
    name: str
    at: int

    def __str__(self):
        return f"UndefinedVar {self.name} at {self.at}"


@dataclass(frozen=True)
class InViolation:
    missing: str

    def __str__(self):
        return f"InViolation {self.missing}"


@dataclass(frozen=True)
class OutViolation:
    missing: str

    def __str__(self):
        return f"OutViolation {self.missing}"


@dataclass(frozen=True)
class FuelExhausted:
    after: int

    def __str__(self):
        return f"FuelExhausted after {self.after}"


RunOutcome = Union[Completed, Aborted, UndefinedVar, InViolation, OutViolation, FuelExhausted]


def outcome_kind(outcome: RunOutcome) -> str:
    return type(outcome).__name__


_BINOPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "==": lambda a, b: int(a == b),
    "!=": lambda a, b: int(a != b),
    "<": lambda a, b: int(a < b),
    "<=": lambda a, b: int(a <= b),
}


def eval_expr(store: Mapping, e: Expr) -> int:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, VarRef):
        try:
            return store[e.name]
        except KeyError:
            raise UndefinedVariable(e.name) from None
    return _BINOPS[e.op](eval_expr(store, e.left), eval_expr(store, e.right))


@lru_cache(maxsize=4096)
def _compile_expr(e: Expr):
    # closures over a plain dict; ~10x faster than re-walking the tree per step
    if isinstance(e, IntLit):
        v = e.value
        return lambda d: v
    if isinstance(e, VarRef):
        name = e.name
        return lambda d: d[name]
    fn = _BINOPS[e.op]
    left, right = _compile_expr(e.left), _compile_expr(e.right)
    return lambda d: fn(left(d), right(d))


def _missing(store: Mapping, e: Expr) -> str:
    try:
        eval_expr(store, e)
    except UndefinedVariable as err:
        return err.name
    raise AssertionError("expression evaluated fine")


def _exec(p: Program, d: dict, point: int) -> int:
    """Execute the instruction at ``point`` on the mutable dict ``d``; return the next point.

    Out replaces the contents of ``d`` with its restriction.
    """
    instr = p.instrs[point - 1]
    try:
        if isinstance(instr, Assign):
            d[instr.target] = _compile_expr(instr.rhs)(d)
            return point + 1
        if isinstance(instr, CondGoto):
            return instr.target if _compile_expr(instr.cond)(d) != 0 else point + 1
        if isinstance(instr, Goto):
            return instr.target
        if isinstance(instr, Skip):
            return point + 1
        if isinstance(instr, In):
            for name in instr.vars:
                if name not in d:
                    raise Stuck(InViolation(name))
            return point + 1
        if isinstance(instr, Out):
            for name in instr.vars:
                if name not in d:
                    raise Stuck(OutViolation(name))
            kept = {name: d[name] for name in instr.vars}
            d.clear()
            d.update(kept)
            return point + 1
        if isinstance(instr, Abort):
            raise Stuck(Aborted(point))
    except KeyError:
        expr = instr.rhs if isinstance(instr, Assign) else instr.cond
        raise Stuck(UndefinedVar(_missing(d, expr), point)) from None
    raise TypeError(f"not an instruction: {instr!r}")


def step(p: Program, s: ProgState) -> ProgState:
    """One transition; raises :class:`Stuck` when no rule applies."""
    if not 1 <= s.point <= len(p):
        raise ValueError(f"point {s.point} outside [1, {len(p)}]")
    d = dict(s.store)
    nxt = _exec(p, d, s.point)
    return ProgState(Store(d), nxt)


def run_from(p: Program, store: Mapping, point: int, fuel: int) -> RunOutcome:
    """Run ``p`` from an arbitrary state for at most ``fuel`` steps."""
    d = dict(store)
    end = len(p) + 1
    steps = 0
    try:
        while point != end:
            if steps >= fuel:
                return FuelExhausted(fuel)
            point = _exec(p, d, point)
            steps += 1
    except Stuck as stuck:
        return stuck.outcome
    return Completed(Store(d))


def run(p: Program, store: Mapping, fuel: int = 10_000) -> RunOutcome:
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    return run_from(p, store, 1, fuel)


@dataclass(frozen=True)
class Trace:
    states: tuple[ProgState, ...]
    outcome: RunOutcome

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i) -> ProgState:
        return self.states[i]

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(s.point for s in self.states)


def trace(p: Program, store: Mapping, fuel: int = 10_000) -> Trace:
    """The unique execution trace from ``(store, 1)``, truncated after ``fuel`` steps."""
    d = dict(store)
    point = 1
    end = len(p) + 1
    states = [ProgState(Store(d), point)]
    outcome = None
    try:
        while point != end:
            if len(states) > fuel:
                outcome = FuelExhausted(fuel)
                break
            point = _exec(p, d, point)
            states.append(ProgState(Store(d), point))
    except Stuck as stuck:
        outcome = stuck.outcome
    if outcome is None:
        outcome = Completed(states[-1].store)
    return Trace(tuple(states), outcome)
