"""Pass pipelines (``cp,dce,hoist``; ``cp*`` repeats until no match) and skip padding."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NoMatch
from ..ir.ast import Program, Skip
from .actions import AddInstr, replay_log
from .rules import RewriteRule, RuleApplication, apply_rule, builtin

# guards repeat-until-no-match against a rule that keeps rewriting forever
MAX_REPEAT = 1000


@dataclass(frozen=True)
class PipelineStep:
    rule: RewriteRule
    repeat: bool = False

    def __str__(self):
        return self.rule.name + ("*" if self.repeat else "")


def parse_pipeline(text: str) -> tuple[PipelineStep, ...]:
    steps = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ValueError(f"empty pass name in pipeline {text!r}")
        repeat = item.endswith("*")
        steps.append(PipelineStep(builtin(item.rstrip("*")), repeat))
    return tuple(steps)


def format_pipeline(steps) -> str:
    return ",".join(str(s) for s in steps)


def as_steps(pipeline) -> tuple[PipelineStep, ...]:
    """Accept a pipeline string, rules, or steps."""
    if isinstance(pipeline, str):
        return parse_pipeline(pipeline)
    return tuple(s if isinstance(s, PipelineStep) else PipelineStep(s) for s in pipeline)


def expand(p: Program, pipeline):
    """Yield ``(step, application)`` for every rule firing, in order.

    A step that does not match contributes ``(step, None)`` once.
    """
    for step in as_steps(pipeline):
        fired = 0
        while True:
            try:
                app = apply_rule(p, step.rule)
            except NoMatch:
                if fired == 0:
                    yield step, None
                break
            yield step, app
            p = app.program
            fired += 1
            if not step.repeat or fired >= MAX_REPEAT:
                break


def run_pipeline(p: Program, pipeline) -> Program:
    for _, app in expand(p, pipeline):
        if app is not None:
            p = app.program
    return p


def pad(p: Program, at: int) -> RuleApplication:
    """Insert ``skip`` so it becomes point ``at``; later points and jump targets shift by one."""
    log = (AddInstr(Skip(), at),)
    out = replay_log(p, log)
    forward = {l: (l if l < at else l + 1) for l in p.points()}
    backward = {v: k for k, v in forward.items()}
    return RuleApplication(out, forward, backward, log, {})


__all__ = ["PipelineStep", "parse_pipeline", "format_pipeline", "as_steps", "expand",
           "run_pipeline", "pad", "MAX_REPEAT"]
