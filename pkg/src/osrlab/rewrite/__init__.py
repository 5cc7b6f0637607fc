from .actions import (AddInstr, DeleteInstr, HoistInstr, ReplaceAllUses, ReplaceOperand,
                      SinkInstr, apply_action, describe, replay_log, value_aliased_points)
from .pipeline import (PipelineStep, as_steps, expand, format_pipeline, pad, parse_pipeline,
                       run_pipeline)
from .rules import (BUILTINS, Clause, RewriteRule, RuleApplication, apply_rule, builtin,
                    builtin_cp, builtin_dce, builtin_hoist, identity_map, matches)

__all__ = [
    "AddInstr", "DeleteInstr", "HoistInstr", "ReplaceAllUses", "ReplaceOperand", "SinkInstr",
    "apply_action", "describe", "replay_log", "value_aliased_points",
    "PipelineStep", "as_steps", "expand", "format_pipeline", "pad", "parse_pipeline",
    "run_pipeline",
    "BUILTINS", "Clause", "RewriteRule", "RuleApplication", "apply_rule", "builtin",
    "builtin_cp", "builtin_dce", "builtin_hoist", "identity_map", "matches",
]
