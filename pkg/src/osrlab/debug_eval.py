"""Endangered-variable analysis and value recoverability for optimized code.

Every point of a base program is treated as a breakpoint. A variable live
there is *endangered* when the optimized version does not hold it live at the
corresponding point, so a debugger cannot read it directly. It is
*recoverable* in a given mode when ``reconstruct`` can rebuild its expected
value from the optimized state.

A "function" in the corpus reports is one (program, pipeline) pair.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .analysis.dataflow import live_vars
from .errors import ReconstructFailed
from .ir.ast import Assign, Instr, Program
from .ir.interp import Store, eval_expr
from .osr.comp import ReconstructMode, ReconstructState, reconstruct
from .osr.mapping import do_passes
from .rewrite.pipeline import as_steps, format_pipeline

DEFAULT_MODES = (ReconstructMode.LIVE, ReconstructMode.AVAIL)


def _inverse(point_map: dict[int, int], l: int) -> int | None:
    hits = sorted(k for k, v in point_map.items() if v == l)
    return hits[0] if hits else None


def endangered_vars(base: Program, opt: Program, backward: dict[int, int] | None, l: int) -> frozenset[str]:
    """Variables live at base point ``l`` but not live at its optimized counterpart.

    ``backward`` maps optimized points to base points (identity when None).
    An unmapped point has no endangered variables.
    """
    backward = backward if backward is not None else {k: k for k in opt.points()}
    l_opt = _inverse(backward, l)
    if l_opt is None:
        return frozenset()
    return live_vars(base, l) - live_vars(opt, l_opt)


@dataclass(frozen=True)
class Snippet:
    """Assignments recovering one variable, and the dead values they read."""

    code: tuple[Instr, ...]
    keep: frozenset[str] = frozenset()

    def recover(self, var: str, opt_store: Store, opt_live: Iterable[str]) -> int | None:
        """Run the snippet on the readable part of ``opt_store`` and return ``var``."""
        env = dict(opt_store.restrict(set(opt_live) | self.keep).items())
        for instr in self.code:
            assert isinstance(instr, Assign)
            env[instr.target] = eval_expr(Store(env), instr.rhs)
        return env.get(var)


def recover_snippet(x: str, opt: Program, l_opt: int, base: Program, l: int,
                    mode: ReconstructMode, aliases: frozenset[int] = frozenset()) -> Snippet | None:
    """Per-variable reconstruction; avail mode falls back to the wider pool only when needed."""
    tries = [ReconstructMode.LIVE] if mode is ReconstructMode.LIVE else [ReconstructMode.LIVE, mode]
    for m in tries:
        state = ReconstructState()
        try:
            code = reconstruct(x, opt, l_opt, base, l, mode=m, aliases=aliases, state=state)
        except ReconstructFailed:
            continue
        return Snippet(code, frozenset(state.keep))
    return None


@dataclass(frozen=True)
class PointRecovery:
    point: int
    opt_point: int | None
    endangered: frozenset[str]
    snippets: dict[str, dict[str, Snippet]]

    def __hash__(self):
        return hash((self.point, self.opt_point, self.endangered))

    def recoverable(self, mode: ReconstructMode) -> frozenset[str]:
        return frozenset(self.snippets.get(mode.value, {}))

    def ratio(self, mode: ReconstructMode) -> float | None:
        if not self.endangered:
            return None
        return len(self.recoverable(mode)) / len(self.endangered)

    def keep(self, mode: ReconstructMode) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for snip in self.snippets.get(mode.value, {}).values():
            out |= snip.keep
        return out


def _mean(values) -> float:
    values = list(values)
    return statistics.fmean(values) if values else 0.0


def _pstdev(values) -> float:
    values = list(values)
    return statistics.pstdev(values) if len(values) > 1 else 0.0


def _r(x: float) -> float:
    return round(x, 6)


@dataclass(frozen=True)
class FunctionReport:
    name: str
    base: Program
    opt: Program
    points: tuple[PointRecovery, ...]
    modes: tuple[ReconstructMode, ...] = DEFAULT_MODES
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __hash__(self):
        return hash(self.name)

    @property
    def size(self) -> int:
        return len(self.base)

    @property
    def optimized(self) -> bool:
        return self.base != self.opt

    @property
    def affected(self) -> tuple[PointRecovery, ...]:
        return tuple(pr for pr in self.points if pr.endangered)

    @property
    def endangered_function(self) -> bool:
        return bool(self.affected)

    def affected_fraction(self) -> float:
        return len(self.affected) / len(self.points) if self.points else 0.0

    def endangered_counts(self) -> list[int]:
        return [len(pr.endangered) for pr in self.affected]

    def avg_ratio(self, mode: ReconstructMode) -> float:
        """Mean per-point ratio over affected points; 1.0 when nothing is endangered."""
        ratios = [pr.ratio(mode) for pr in self.affected]
        return _mean(ratios) if ratios else 1.0

    def keep_set(self, mode: ReconstructMode = ReconstructMode.AVAIL) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for pr in self.points:
            out |= pr.keep(mode)
        return out

    def to_json(self) -> dict:
        counts = self.endangered_counts()
        return {
            "name": self.name,
            "size": self.size,
            "optimized": self.optimized,
            "points": [
                {
                    "point": pr.point,
                    "opt_point": pr.opt_point,
                    "endangered": sorted(pr.endangered),
                    "recoverable": {m.value: sorted(pr.recoverable(m)) for m in self.modes},
                    "keep": sorted(pr.keep(ReconstructMode.AVAIL))
                    if ReconstructMode.AVAIL in self.modes else [],
                }
                for pr in self.points
            ],
            "affected_fraction": _r(self.affected_fraction()),
            "endangered_per_affected": {"mean": _r(_mean(counts)), "stdev": _r(_pstdev(counts)),
                                        "max": max(counts, default=0)},
            "avg_ratio": {m.value: _r(self.avg_ratio(m)) for m in self.modes},
            "keep": sorted(self.keep_set()) if ReconstructMode.AVAIL in self.modes else [],
        }


def recoverability_report(base: Program, opt: Program, backward: dict[int, int] | None = None,
                          modes: Sequence[ReconstructMode] = DEFAULT_MODES,
                          aliases: frozenset[int] = frozenset(), name: str = "") -> FunctionReport:
    """Endangered and recoverable variables at every base point.

    ``backward`` maps optimized points to base points (identity when None).
    """
    modes = tuple(modes)
    backward = backward if backward is not None else {k: k for k in opt.points()}
    rows = []
    for l in base.points():
        l_opt = _inverse(backward, l)
        endangered = endangered_vars(base, opt, backward, l)
        snippets: dict[str, dict[str, Snippet]] = {}
        for m in modes:
            found = {}
            for x in sorted(endangered):
                snip = recover_snippet(x, opt, l_opt, base, l, m, aliases)
                if snip is not None:
                    found[x] = snip
            snippets[m.value] = found
        rows.append(PointRecovery(l, l_opt, endangered, snippets))
    return FunctionReport(name, base, opt, tuple(rows), modes)


def report_for_pipeline(base: Program, pipeline, modes: Sequence[ReconstructMode] = DEFAULT_MODES,
                        name: str = "") -> FunctionReport:
    """Optimize ``base`` with ``pipeline`` and report on the result."""
    steps = as_steps(pipeline)
    res = do_passes(base, steps)
    rep = recoverability_report(base, res.program, res.point_map(forward=False), modes, res.aliases,
                                name or format_pipeline(steps))
    return FunctionReport(rep.name, rep.base, rep.opt, rep.points, rep.modes, res.diagnostics)


@dataclass(frozen=True)
class CorpusReport:
    """Aggregates over every function, mirroring the per-benchmark summary columns.

    Fractions, counts and ratios are computed over endangered functions only;
    weighted averages use the base program length as weight.
    """

    functions: tuple[FunctionReport, ...]
    modes: tuple[ReconstructMode, ...] = DEFAULT_MODES

    @property
    def endangered(self) -> tuple[FunctionReport, ...]:
        return tuple(f for f in self.functions if f.endangered_function)

    def affected_fraction(self, weighted: bool = False) -> float:
        fs = self.endangered
        if not fs:
            return 0.0
        if weighted:
            return sum(f.affected_fraction() * f.size for f in fs) / sum(f.size for f in fs)
        return _mean(f.affected_fraction() for f in fs)

    def endangered_counts(self) -> list[int]:
        return [c for f in self.endangered for c in f.endangered_counts()]

    def global_ratio(self, mode: ReconstructMode) -> float:
        """Size-weighted mean of per-function average ratios."""
        fs = self.endangered
        if not fs:
            return 1.0
        return sum(f.avg_ratio(mode) * f.size for f in fs) / sum(f.size for f in fs)

    def keep_sizes(self) -> list[int]:
        return [len(f.keep_set()) for f in self.endangered]

    def summary(self) -> dict:
        counts = self.endangered_counts()
        out = {
            "functions": len(self.functions),
            "optimized": sum(1 for f in self.functions if f.optimized),
            "endangered": len(self.endangered),
            "affected_fraction": {"avg_u": _r(self.affected_fraction()),
                                  "avg_w": _r(self.affected_fraction(weighted=True))},
            "endangered_per_affected": {"mean": _r(_mean(counts)), "stdev": _r(_pstdev(counts)),
                                        "max": max(counts, default=0)},
            "global_ratio": {m.value: _r(self.global_ratio(m)) for m in self.modes},
        }
        if ReconstructMode.AVAIL in self.modes:
            sizes = self.keep_sizes()
            out["keep"] = {
                "fraction_none": _r(sum(1 for k in sizes if k == 0) / len(sizes)) if sizes else 0.0,
                "avg": _r(_mean(sizes)),
                "stdev": _r(_pstdev(sizes)),
            }
        return out

    def to_json(self) -> dict:
        return {"modes": [m.value for m in self.modes],
                "functions": [f.to_json() for f in self.functions],
                "summary": self.summary()}

    def to_table(self) -> str:
        headers = ["function", "size", "opt", "affected", "mean", "stdev", "max"]
        headers += [f"ratio_{m.value}" for m in self.modes]
        if ReconstructMode.AVAIL in self.modes:
            headers.append("keep")
        rows = []
        for f in self.functions:
            counts = f.endangered_counts()
            row = [f.name, str(f.size), "yes" if f.optimized else "no",
                   f"{f.affected_fraction():.3f}", f"{_mean(counts):.2f}", f"{_pstdev(counts):.2f}",
                   str(max(counts, default=0))]
            row += [f"{f.avg_ratio(m):.3f}" for m in self.modes]
            if ReconstructMode.AVAIL in self.modes:
                row.append(str(len(f.keep_set())))
            rows.append(row)
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in
                            enumerate(zip(r, widths))) for r in rows]
        s = self.summary()
        lines.append("")
        lines.append(f"functions {s['functions']}, optimized {s['optimized']}, "
                     f"endangered {s['endangered']}")
        lines.append(f"affected fraction avg_u {s['affected_fraction']['avg_u']:.3f}, "
                     f"avg_w {s['affected_fraction']['avg_w']:.3f}")
        lines.append("global ratio " + ", ".join(f"{m} {v:.3f}" for m, v in
                                                  s["global_ratio"].items()))
        if "keep" in s:
            lines.append(f"keep: none {s['keep']['fraction_none']:.3f}, avg {s['keep']['avg']:.3f}, "
                         f"stdev {s['keep']['stdev']:.3f}")
        return "\n".join(lines) + "\n"


def corpus_report(entries, modes: Sequence[ReconstructMode] = DEFAULT_MODES,
                  pipelines: Sequence | None = None) -> CorpusReport:
    """One function report per (entry, pipeline); ``pipelines`` overrides the manifest's."""
    modes = tuple(modes)
    functions = []
    for e in entries:
        for pipeline in (pipelines if pipelines is not None else e.pipelines):
            label = f"{e.name}[{format_pipeline(as_steps(pipeline))}]"
            functions.append(report_for_pipeline(e.program, pipeline, modes, label))
    return CorpusReport(tuple(functions), modes)


__all__ = ["DEFAULT_MODES", "endangered_vars", "Snippet", "recover_snippet", "PointRecovery",
           "FunctionReport", "recoverability_report", "report_for_pipeline", "CorpusReport",
           "corpus_report"]
