"""Abstract syntax of the toy imperative language.

Programs are immutable tuples of instructions addressed by 1-based points.
The same dataclasses double as rewrite-rule patterns: any field may hold a
meta-variable (see :mod:`osrlab.analysis.meta`) instead of a concrete value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import StructureError

ARITH_OPS = ("+", "-", "*")
COMPARE_OPS = ("==", "!=", "<", "<=")
OPS = ARITH_OPS + COMPARE_OPS


@dataclass(frozen=True)
class IntLit:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class VarRef:
    name: str

    def __str__(self) -> str:
        return str(self.name)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")

    def __str__(self) -> str:
        return f"{_operand(self.left)} {self.op} {_operand(self.right)}"


Expr = Union[IntLit, VarRef, BinOp]


def _operand(e) -> str:
    return f"({e})" if isinstance(e, BinOp) else str(e)


@dataclass(frozen=True)
class Assign:
    target: str
    rhs: Expr

    def __str__(self) -> str:
        return f"{self.target} := {self.rhs}"


@dataclass(frozen=True)
class CondGoto:
    cond: Expr
    target: int

    def __str__(self) -> str:
        return f"if ({self.cond}) goto {self.target}"


@dataclass(frozen=True)
class Goto:
    target: int

    def __str__(self) -> str:
        return f"goto {self.target}"


@dataclass(frozen=True)
class Skip:
    def __str__(self) -> str:
        return "skip"


@dataclass(frozen=True)
class Abort:
    def __str__(self) -> str:
        return "abort"


@dataclass(frozen=True)
class In:
    vars: tuple[str, ...]

    def __str__(self) -> str:
        return " ".join(("in",) + tuple(str(v) for v in self.vars))


@dataclass(frozen=True)
class Out:
    vars: tuple[str, ...]

    def __str__(self) -> str:
        return " ".join(("out",) + tuple(str(v) for v in self.vars))


Instr = Union[Assign, CondGoto, Goto, Skip, Abort, In, Out]


def expr_vars(e: Expr) -> frozenset[str]:
    """Names of the variables occurring in ``e``."""
    if isinstance(e, VarRef):
        return frozenset((e.name,))
    if isinstance(e, BinOp):
        return expr_vars(e.left) | expr_vars(e.right)
    return frozenset()


def subexprs(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, BinOp):
        yield from subexprs(e.left)
        yield from subexprs(e.right)


def substitute_var(e: Expr, name: str, replacement: Expr) -> Expr:
    """Replace every occurrence of variable ``name`` in ``e``."""
    if isinstance(e, VarRef):
        return replacement if e.name == name else e
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute_var(e.left, name, replacement),
                     substitute_var(e.right, name, replacement))
    return e


def defined_vars(instr: Instr) -> frozenset[str]:
    if isinstance(instr, Assign):
        return frozenset((instr.target,))
    if isinstance(instr, In):
        return frozenset(instr.vars)
    return frozenset()


def used_vars(instr: Instr) -> frozenset[str]:
    # In is deliberately absent: it defines its variables, it does not read them
    if isinstance(instr, Assign):
        return expr_vars(instr.rhs)
    if isinstance(instr, CondGoto):
        return expr_vars(instr.cond)
    if isinstance(instr, Out):
        return frozenset(instr.vars)
    return frozenset()


def instr_exprs(instr: Instr) -> tuple[Expr, ...]:
    if isinstance(instr, Assign):
        return (instr.rhs,)
    if isinstance(instr, CondGoto):
        return (instr.cond,)
    return ()


def relocate(instr: Instr, shift) -> Instr:
    """Rewrite the jump target of ``instr`` through ``shift`` (a callable)."""
    if isinstance(instr, Goto):
        return Goto(shift(instr.target))
    if isinstance(instr, CondGoto):
        return CondGoto(instr.cond, shift(instr.target))
    return instr


@dataclass(frozen=True)
class Program:
    """A validated instruction sequence; ``p[l]`` is the instruction at point ``l``."""

    instrs: tuple[Instr, ...]

    def __post_init__(self):
        object.__setattr__(self, "instrs", tuple(self.instrs))
        check_structure(self.instrs)

    def __len__(self) -> int:
        return len(self.instrs)

    def __getitem__(self, point: int) -> Instr:
        if not 1 <= point <= len(self.instrs):
            raise IndexError(f"point {point} outside [1, {len(self.instrs)}]")
        return self.instrs[point - 1]

    def points(self) -> range:
        return range(1, len(self.instrs) + 1)

    @property
    def in_vars(self) -> tuple[str, ...]:
        return self.instrs[0].vars

    @property
    def out_vars(self) -> tuple[str, ...]:
        return self.instrs[-1].vars

    def variables(self) -> frozenset[str]:
        names: set[str] = set()
        for instr in self.instrs:
            names |= defined_vars(instr) | used_vars(instr)
        return frozenset(names)

    def replace(self, point: int, instr: Instr) -> "Program":
        instrs = list(self.instrs)
        instrs[point - 1] = instr
        return Program(tuple(instrs))

    def __str__(self) -> str:
        return "\n".join(str(i) for i in self.instrs)


def check_structure(instrs, lines=None) -> None:
    """Raise StructureError unless ``instrs`` forms a legal program.

    ``lines`` optionally maps instruction index (0-based) to a source line for
    error messages.
    """

    def at(k):
        return lines[k] if lines is not None else k + 1

    n = len(instrs)
    if n < 2:
        raise StructureError("a program needs at least an in and an out instruction",
                             at(n - 1) if n else None)
    if not isinstance(instrs[0], In):
        raise StructureError("first instruction must be 'in'", at(0))
    if not isinstance(instrs[-1], Out):
        raise StructureError("last instruction must be 'out'", at(n - 1))
    for k in range(1, n - 1):
        if isinstance(instrs[k], (In, Out)):
            raise StructureError("'in'/'out' may only appear first/last", at(k))
    for k in (0, n - 1):
        names = instrs[k].vars
        if len(set(names)) != len(names):
            raise StructureError("duplicate variable in in/out list", at(k))
    for k, instr in enumerate(instrs):
        if isinstance(instr, (Goto, CondGoto)) and not 1 <= instr.target <= n:
            raise StructureError(f"goto target {instr.target} outside [1, {n}]", at(k))
