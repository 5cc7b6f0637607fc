"""Per-point OSR feasibility classification and summary statistics."""

from __future__ import annotations

import enum
import statistics
from dataclasses import dataclass

from ..ir.ast import Program
from .comp import CompCode, ReconstructMode, build_comp


class PointClass(enum.Enum):
    EMPTY_COMP = "EmptyComp"
    FEASIBLE_LIVE = "FeasibleLive"
    FEASIBLE_AVAIL_ONLY = "FeasibleAvailOnly"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class PointFeasibility:
    src: int
    dst: int
    klass: PointClass
    comps: dict[str, CompCode | None]

    def __hash__(self):
        return hash((self.src, self.dst, self.klass))


def _stats(values) -> dict:
    values = list(values)
    if not values:
        return {"count": 0, "avg": 0.0, "max": 0}
    return {"count": len(values), "avg": round(statistics.fmean(values), 6), "max": max(values)}


@dataclass(frozen=True)
class FeasibilityReport:
    points: tuple[PointFeasibility, ...]
    modes: tuple[ReconstructMode, ...]

    def classification(self) -> dict[int, PointClass]:
        return {pf.src: pf.klass for pf in self.points}

    def fractions(self) -> dict[str, float]:
        n = len(self.points)
        return {k.value: (sum(pf.klass is k for pf in self.points) / n if n else 0.0)
                for k in PointClass}

    def feasible_points(self, mode: ReconstructMode) -> list[int]:
        return [pf.src for pf in self.points if pf.comps.get(mode.value) is not None]

    def comp_sizes(self, mode: ReconstructMode) -> dict[int, int]:
        return {pf.src: pf.comps[mode.value].size for pf in self.points
                if pf.comps.get(mode.value) is not None}

    def to_json(self) -> dict:
        out = {
            "modes": [m.value for m in self.modes],
            "points": [
                {
                    "src": pf.src,
                    "dst": pf.dst,
                    "class": pf.klass.value,
                    "comp_size": {m: (c.size if c is not None else None)
                                  for m, c in sorted(pf.comps.items())},
                    "keep": sorted(pf.comps["avail"].keep)
                    if pf.comps.get("avail") is not None else [],
                }
                for pf in self.points
            ],
            "fractions": self.fractions(),
            "comp_size": {m.value: _stats(self.comp_sizes(m).values()) for m in self.modes},
        }
        if ReconstructMode.AVAIL in self.modes:
            keeps = [len(pf.comps["avail"].keep) for pf in self.points
                     if pf.comps.get("avail") is not None]
            out["keep"] = {**_stats(keeps),
                           "points_with_keep": sum(1 for k in keeps if k)}
        return out


def classify(live: CompCode | None, avail: CompCode | None) -> PointClass:
    if live is not None:
        return PointClass.EMPTY_COMP if live.size == 0 else PointClass.FEASIBLE_LIVE
    if avail is not None:
        return PointClass.FEASIBLE_AVAIL_ONLY
    return PointClass.INFEASIBLE


def feasibility_report(src: Program, dst: Program,
                       modes=(ReconstructMode.LIVE, ReconstructMode.AVAIL),
                       point_map: dict[int, int] | None = None,
                       aliases: frozenset[int] = frozenset()) -> FeasibilityReport:
    """Classify every source point by what compensation an OSR there needs.

    ``point_map`` defaults to the identity (all built-in rules keep points).
    """
    modes = tuple(modes)
    if point_map is None:
        point_map = {l: l for l in src.points() if l <= len(dst)}
    rows = []
    for l, target in sorted(point_map.items()):
        comps = {m.value: build_comp(src, l, dst, target, m, aliases) for m in modes}
        rows.append(PointFeasibility(l, target, classify(comps.get("live"), comps.get("avail")),
                                     comps))
    return FeasibilityReport(tuple(rows), modes)


__all__ = ["PointClass", "PointFeasibility", "FeasibilityReport", "classify",
           "feasibility_report"]
