"""OSR mappings: construction per rewrite, composition, and multi-pass pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ..errors import NotComposable
from ..ir.ast import Program
from ..ir.cfg import compose_programs
from ..rewrite.actions import value_aliased_points
from ..rewrite.pipeline import expand
from ..rewrite.rules import RewriteRule, RuleApplication, apply_rule
from .comp import CompCode, ReconstructMode, build_comp


@dataclass(frozen=True)
class OsrMapping:
    """Partial map ``source point -> (target point, compensation code)``."""

    src: Program
    dst: Program
    entries: dict[int, tuple[int, CompCode]]
    mode: ReconstructMode = ReconstructMode.LIVE
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __hash__(self):
        return id(self)

    def __contains__(self, l: int) -> bool:
        return l in self.entries

    def __getitem__(self, l: int) -> tuple[int, CompCode]:
        return self.entries[l]

    def __len__(self):
        return len(self.entries)

    def domain(self) -> list[int]:
        return sorted(self.entries)

    @property
    def keep_sets(self) -> dict[int, frozenset[str]]:
        return {l: chi.keep for l, (_, chi) in sorted(self.entries.items())}

    def to_json(self, src_version: int = 1, dst_version: int = 2) -> dict:
        return {
            "src_version": src_version,
            "dst_version": dst_version,
            "mode": self.mode.value,
            "entries": [
                {"src": l, "dst": target, "keep": sorted(chi.keep), "comp": chi.lines()}
                for l, (target, chi) in sorted(self.entries.items())
            ],
        }


def mapping_between(src: Program, dst: Program, point_map: dict[int, int],
                    mode: ReconstructMode = ReconstructMode.LIVE,
                    aliases: frozenset[int] = frozenset()) -> OsrMapping:
    """One ``build_comp`` per mapped point; points without compensation are left out."""
    entries, notes = {}, []
    for l, target in sorted(point_map.items()):
        chi = build_comp(src, l, dst, target, mode, aliases)
        if chi is None:
            notes.append(f"point {l}: no compensation code")
        else:
            entries[l] = (target, chi)
    return OsrMapping(src, dst, entries, mode, tuple(notes))


def identity_mapping(p: Program, mode: ReconstructMode = ReconstructMode.LIVE) -> OsrMapping:
    return mapping_between(p, p, {l: l for l in p.points()}, mode)


class OsrTransResult(NamedTuple):
    program: Program
    forward: OsrMapping
    backward: OsrMapping
    application: RuleApplication


def mappings_for(p: Program, app: RuleApplication,
                 mode: ReconstructMode = ReconstructMode.LIVE) -> OsrTransResult:
    aliases = value_aliased_points(app.log)
    fwd = mapping_between(p, app.program, app.forward, mode, aliases)
    bwd = mapping_between(app.program, p, app.backward, mode, aliases)
    return OsrTransResult(app.program, fwd, bwd, app)


def osr_trans(p: Program, rule: RewriteRule,
              mode: ReconstructMode = ReconstructMode.LIVE) -> OsrTransResult:
    """Apply ``rule`` and build forward and backward mappings; raises NoMatch."""
    return mappings_for(p, apply_rule(p, rule), mode)


def compose_mappings(first: OsrMapping, second: OsrMapping) -> OsrMapping:
    """``first`` then ``second``; entries whose codes do not compose are dropped with a note."""
    entries, notes = {}, list(first.diagnostics) + list(second.diagnostics)
    for l, (mid, chi) in sorted(first.entries.items()):
        if mid not in second.entries:
            continue
        target, chi2 = second.entries[mid]
        try:
            code = compose_programs(chi.program, chi2.program)
        except NotComposable as err:
            notes.append(f"point {l}: compensation codes do not compose (missing "
                         f"{', '.join(err.missing)})")
            continue
        entries[l] = (target, CompCode(code, chi.keep))
    return OsrMapping(first.src, second.dst, entries, first.mode, tuple(notes))


class PassesResult(NamedTuple):
    program: Program
    forward: OsrMapping
    backward: OsrMapping
    applied: tuple[tuple[str, RuleApplication], ...]
    diagnostics: tuple[str, ...]

    @property
    def aliases(self) -> frozenset[int]:
        """Points whose instruction changed only by value-preserving operand replacement."""
        return frozenset().union(*(value_aliased_points(app.log) for _, app in self.applied))

    def point_map(self, forward: bool = True) -> dict[int, int]:
        """Composed point correspondence, including points without compensation code."""
        apps = [app for _, app in self.applied]
        if not apps:
            return {l: l for l in self.program.points()}
        composed = None
        for app in (apps if forward else reversed(apps)):
            step = dict(app.forward if forward else app.backward)
            composed = step if composed is None else {k: step[v] for k, v in composed.items()
                                                      if v in step}
        return composed


def do_passes(p: Program, pipeline,
              mode: ReconstructMode = ReconstructMode.LIVE) -> PassesResult:
    """Fold ``osr_trans`` over ``pipeline``; forward maps compose left to right, backward right to left.

    Rules that do not match are skipped with a diagnostic. When nothing fires
    the result is ``p`` with identity mappings.
    """
    current = p
    fwd = bwd = None
    applied, notes = [], []
    for step, app in expand(p, pipeline):
        if app is None:
            notes.append(f"{step.rule.name}: no match")
            continue
        res = mappings_for(current, app, mode)
        fwd = res.forward if fwd is None else compose_mappings(fwd, res.forward)
        bwd = res.backward if bwd is None else compose_mappings(res.backward, bwd)
        applied.append((step.rule.name, app))
        current = app.program
    if fwd is None:
        fwd = bwd = identity_mapping(p, mode)
    return PassesResult(current, fwd, bwd, tuple(applied), tuple(notes))


__all__ = ["OsrMapping", "mapping_between", "identity_mapping", "OsrTransResult", "mappings_for",
           "osr_trans", "compose_mappings", "PassesResult", "do_passes"]
