"""Static analyses: dataflow facts, CTL model checking, and meta-variable matching."""

from .ctl import (AU, AX, BWD, EU, EX, FWD, And, At, ConLit, Def, Formula, FreeVar, Not, Or,
                  PathSemantics, Point, Stmt, Trans, TrueF, Use, check_ctl, conj, disj,
                  dominates, find_substitutions, holds, is_live, live_by_ctl, meta_domain,
                  satisfying_points, substitutions, urdef, urdef_by_ctl)
from .ctl_text import format_formula, parse_formula
from .dataflow import (ENTRY_DEF, DataflowTables, definitely_assigned, live_vars, may_live_vars,
                       reaching_defs, tables, unique_reaching_def)
from .meta import Hole, Meta, Plug, apply_subst, is_ground, match, metas_in

__all__ = [
    "AU", "AX", "BWD", "EU", "EX", "FWD", "And", "At", "ConLit", "Def", "Formula", "FreeVar",
    "Not", "Or", "PathSemantics", "Point", "Stmt", "Trans", "TrueF", "Use", "check_ctl", "conj",
    "disj", "dominates", "find_substitutions", "holds", "is_live", "live_by_ctl", "meta_domain",
    "satisfying_points", "substitutions", "urdef", "urdef_by_ctl",
    "format_formula", "parse_formula",
    "ENTRY_DEF", "DataflowTables", "definitely_assigned", "live_vars", "may_live_vars",
    "reaching_defs", "tables", "unique_reaching_def",
    "Hole", "Meta", "Plug", "apply_subst", "is_ground", "match", "metas_in",
]
