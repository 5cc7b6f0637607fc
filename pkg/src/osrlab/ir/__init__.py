from .ast import (Abort, Assign, BinOp, CondGoto, Expr, Goto, In, Instr, IntLit, Out, Program,
                  Skip, VarRef, defined_vars, expr_vars, used_vars)
from .cfg import Cfg, build_cfg, compose_programs
from .interp import (Aborted, Completed, FuelExhausted, InViolation, OutViolation, ProgState,
                     RunOutcome, Store, Trace, UndefinedVar, eval_expr, outcome_kind, run,
                     run_from, step, trace)
from .text import load_program, parse_expr, parse_instr, parse_program, print_program

__all__ = [
    "Abort", "Assign", "BinOp", "CondGoto", "Expr", "Goto", "In", "Instr", "IntLit", "Out",
    "Program", "Skip", "VarRef", "defined_vars", "expr_vars", "used_vars",
    "Cfg", "build_cfg", "compose_programs",
    "Aborted", "Completed", "FuelExhausted", "InViolation", "OutViolation", "ProgState",
    "RunOutcome", "Store", "Trace", "UndefinedVar", "eval_expr", "outcome_kind", "run",
    "run_from", "step", "trace",
    "load_program", "parse_expr", "parse_instr", "parse_program", "print_program",
]
