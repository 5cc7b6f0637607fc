"""Primitive edit actions and their replay.

Six action kinds describe any transformation that inserts, deletes, moves, or
rewrites instructions. Replaying a recorded log on the original program must
reproduce the transformed program exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import InvalidAction, StructureError
from ..ir.ast import (Assign, CondGoto, Expr, In, Instr, Out, Program, Skip, instr_exprs,
                      relocate, subexprs)


@dataclass(frozen=True)
class AddInstr:
    instr: Instr
    at: int


@dataclass(frozen=True)
class DeleteInstr:
    """Remove the instruction at ``at``; ``as_skip`` leaves a ``skip`` so no point moves."""

    at: int
    as_skip: bool = True


@dataclass(frozen=True)
class HoistInstr:
    src: int
    dst: int
    in_place: bool = True


@dataclass(frozen=True)
class SinkInstr:
    src: int
    dst: int
    in_place: bool = True


@dataclass(frozen=True)
class ReplaceOperand:
    at: int
    old: Expr
    new: Expr


@dataclass(frozen=True)
class ReplaceAllUses:
    old: Expr
    new: Expr


Action = Union[AddInstr, DeleteInstr, HoistInstr, SinkInstr, ReplaceOperand, ReplaceAllUses]
ActionLog = tuple  # tuple[Action, ...]


def _replace_in_expr(e: Expr, old: Expr, new: Expr) -> Expr:
    if e == old:
        return new
    if hasattr(e, "left"):
        return type(e)(e.op, _replace_in_expr(e.left, old, new), _replace_in_expr(e.right, old, new))
    return e


def _replace_operand(instr: Instr, old: Expr, new: Expr) -> Instr:
    if isinstance(instr, Assign):
        return Assign(instr.target, _replace_in_expr(instr.rhs, old, new))
    if isinstance(instr, CondGoto):
        return CondGoto(_replace_in_expr(instr.cond, old, new), instr.target)
    return instr


def _mentions(instr: Instr, operand: Expr) -> bool:
    return any(operand == sub for e in instr_exprs(instr) for sub in subexprs(e))


def _shifted(instrs, fn):
    return [relocate(i, fn) for i in instrs]


def _check(instrs: list, at: int, action):
    if not 1 <= at <= len(instrs):
        raise InvalidAction(f"{action}: point {at} outside [1, {len(instrs)}]")


def _insert(instrs: list, instr: Instr, at: int) -> list:
    out = _shifted(instrs, lambda m: m + 1 if m >= at else m)
    out.insert(at - 1, instr)
    return out


def _remove(instrs: list, at: int) -> list:
    rest = instrs[:at - 1] + instrs[at:]
    return _shifted(rest, lambda m: m - 1 if m > at else m)


def _move(instrs: list, src: int, dst: int, in_place: bool, action) -> list:
    _check(instrs, src, action)
    _check(instrs, dst, action)
    moved = instrs[src - 1]
    if isinstance(moved, (In, Out)):
        raise InvalidAction(f"{action}: cannot move {moved}")
    if in_place:
        if not isinstance(instrs[dst - 1], Skip):
            raise InvalidAction(f"{action}: destination {dst} is not a skip")
        out = list(instrs)
        out[dst - 1] = moved
        out[src - 1] = Skip()
        return out
    out = _remove(instrs, src)
    target = dst if dst < src else dst - 1
    return _insert(out, moved, target)


def apply_action(instrs: list, action: Action) -> list:
    if isinstance(action, AddInstr):
        if not 2 <= action.at <= len(instrs):
            raise InvalidAction(f"{action}: can only insert between in and out")
        return _insert(instrs, action.instr, action.at)
    if isinstance(action, DeleteInstr):
        _check(instrs, action.at, action)
        victim = instrs[action.at - 1]
        if isinstance(victim, (In, Out)):
            raise InvalidAction(f"{action}: cannot delete {victim}")
        if action.as_skip:
            out = list(instrs)
            out[action.at - 1] = Skip()
            return out
        return _remove(instrs, action.at)
    if isinstance(action, HoistInstr):
        if action.dst >= action.src:
            raise InvalidAction(f"{action}: hoisting must move upwards")
        return _move(instrs, action.src, action.dst, action.in_place, action)
    if isinstance(action, SinkInstr):
        if action.dst <= action.src:
            raise InvalidAction(f"{action}: sinking must move downwards")
        return _move(instrs, action.src, action.dst, action.in_place, action)
    if isinstance(action, ReplaceOperand):
        _check(instrs, action.at, action)
        if not _mentions(instrs[action.at - 1], action.old):
            raise InvalidAction(f"{action}: operand {action.old} not found")
        out = list(instrs)
        out[action.at - 1] = _replace_operand(instrs[action.at - 1], action.old, action.new)
        return out
    if isinstance(action, ReplaceAllUses):
        return [_replace_operand(i, action.old, action.new) for i in instrs]
    raise InvalidAction(f"unknown action {action!r}")


def replay_log(p: Program, log) -> Program:
    """Apply ``log`` to ``p`` in order."""
    instrs = list(p.instrs)
    for action in log:
        instrs = apply_action(instrs, action)
    try:
        return Program(tuple(instrs))
    except StructureError as err:
        raise InvalidAction(f"replay produced an ill-formed program: {err}") from None


def value_aliased_points(log) -> frozenset[int]:
    """Points whose instruction computes the same value before and after the log.

    Operand replacement only fires when the two operands are known equal
    (constant propagation), so such points stay value-equivalent.
    """
    return frozenset(a.at for a in log if isinstance(a, ReplaceOperand))


def describe(action: Action) -> str:
    if isinstance(action, AddInstr):
        return f"add({action.instr}, {action.at})"
    if isinstance(action, DeleteInstr):
        return f"delete({action.at})"
    if isinstance(action, HoistInstr):
        return f"hoist({action.src}, {action.dst})"
    if isinstance(action, SinkInstr):
        return f"sink({action.src}, {action.dst})"
    if isinstance(action, ReplaceOperand):
        return f"replace({action.at}, {action.old}, {action.new})"
    return f"replaceAll({action.old}, {action.new})"


__all__ = [
    "AddInstr", "DeleteInstr", "HoistInstr", "SinkInstr", "ReplaceOperand", "ReplaceAllUses",
    "Action", "ActionLog", "apply_action", "replay_log", "value_aliased_points", "describe",
]
