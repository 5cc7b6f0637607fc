"""Multi-version programs: versions linked by OSR mappings, and their execution.

Execution starts in version 1 at point 1. At every state an oracle either
takes a normal step in the current version or fires an OSR along an outgoing
edge whose mapping covers the current point, running the compensation code
on the store and landing at the mapped point of the target version.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

from .errors import BudgetExceeded, InapplicableDecision, Stuck
from .ir.ast import Program
from .ir.interp import Completed, FuelExhausted, ProgState, RunOutcome, Store, run, step
from .osr.comp import ReconstructMode
from .osr.mapping import OsrMapping, do_passes
from .rewrite.pipeline import as_steps, format_pipeline


@dataclass(frozen=True)
class MultiProgram:
    """Versions are numbered from 1; version 1 is the base program."""

    versions: tuple[Program, ...]
    labels: dict[tuple[int, int], OsrMapping]
    names: tuple[str, ...] = ()
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for (p, q), mu in self.labels.items():
            if not (1 <= p <= len(self.versions) and 1 <= q <= len(self.versions)):
                raise ValueError(f"edge {(p, q)} refers to a missing version")
            if len(mu.src) != len(self.version(p)) or len(mu.dst) != len(self.version(q)):
                raise ValueError(f"mapping on edge {(p, q)} does not fit its versions")

    def __hash__(self):
        return id(self)

    def version(self, k: int) -> Program:
        return self.versions[k - 1]

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.labels)

    def with_label(self, edge: tuple[int, int], mapping: OsrMapping) -> "MultiProgram":
        labels = dict(self.labels)
        labels[edge] = mapping
        return replace(self, labels=labels)


def build_multiprogram(base: Program, pipelines: Sequence = (),
                       mode: ReconstructMode = ReconstructMode.LIVE) -> MultiProgram:
    """A star around ``base``: one derived version per pipeline, linked both ways."""
    versions, labels, names, notes = [base], {}, ["base"], []
    for pipeline in pipelines:
        steps = as_steps(pipeline)
        res = do_passes(base, steps, mode)
        versions.append(res.program)
        k = len(versions)
        labels[(1, k)] = res.forward
        labels[(k, 1)] = res.backward
        names.append(format_pipeline(steps))
        notes.extend(f"version {k}: {d}" for d in res.diagnostics)
    return MultiProgram(tuple(versions), labels, tuple(names), tuple(notes))


class MvState(NamedTuple):
    version: int
    store: Store
    point: int


class Norm(NamedTuple):
    def __str__(self):
        return "norm"


class Osr(NamedTuple):
    target: int

    def __str__(self):
        return f"osr {self.target}"


Decision = Norm | Osr


def initial_state(store) -> MvState:
    return MvState(1, Store(store), 1)


def is_terminal(mp: MultiProgram, s: MvState) -> bool:
    return s.point == len(mp.version(s.version)) + 1


def osr_options(mp: MultiProgram, s: MvState) -> list[int]:
    """Target versions an OSR may jump to from ``s``.

    Never offered at the entry point (the input header has not run yet, so
    no variable is live) nor at the terminal state.
    """
    if s.point <= 1 or is_terminal(mp, s):
        return []
    return sorted(q for (p, q), mu in mp.labels.items() if p == s.version and s.point in mu)


def mv_step(mp: MultiProgram, s: MvState, d: Decision) -> MvState:
    """One transition. Raises :class:`Stuck` when the program or compensation code gets stuck."""
    if isinstance(d, Osr):
        if d.target not in osr_options(mp, s):
            raise InapplicableDecision(
                f"no OSR from version {s.version} to {d.target} at point {s.point}")
        target_point, chi = mp.labels[(s.version, d.target)][s.point]
        outcome = run(chi.program, s.store.restrict(chi.in_vars), fuel=len(chi.program))
        if not isinstance(outcome, Completed):
            raise Stuck(outcome)
        return MvState(d.target, outcome.final, target_point)
    if is_terminal(mp, s):
        raise InapplicableDecision("execution already completed")
    nxt = step(mp.version(s.version), ProgState(s.store, s.point))
    return MvState(s.version, nxt.store, nxt.point)


# --- oracle policies ------------------------------------------------------------

@dataclass
class OraclePolicy:
    """Picks Norm or an OSR at each state; reproducible for a fixed policy text and seed."""

    kind: str
    decide: Callable[[MvState, list[int], int], Decision]
    text: str = ""

    def __str__(self):
        return self.text or self.kind


def never() -> OraclePolicy:
    return OraclePolicy("never", lambda s, opts, i: Norm(), "never")


def always_at(point: int, version: int) -> OraclePolicy:
    def decide(s, opts, i):
        return Osr(version) if s.point == point and version in opts else Norm()
    return OraclePolicy("always", decide, f"always@{point}>{version}")


def random_policy(prob: float, seed: int = 0) -> OraclePolicy:
    if not 0.0 <= prob <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    rng = random.Random(seed)

    def decide(s, opts, i):
        if opts and rng.random() < prob:
            return Osr(rng.choice(opts))
        return Norm()
    return OraclePolicy("random", decide, f"random:{prob}")


def scripted(decisions: Sequence[Decision]) -> OraclePolicy:
    """Decision ``i`` is used at step ``i``; afterwards Norm."""
    decisions = list(decisions)
    return OraclePolicy("scripted", lambda s, opts, i: decisions[i] if i < len(decisions) else Norm(),
                        "script:" + ",".join("n" if isinstance(d, Norm) else str(d.target)
                                             for d in decisions))


def parse_decision(text: str) -> Decision:
    text = text.strip()
    if text in ("n", "norm", "s"):
        return Norm()
    if text.startswith("osr"):
        text = text[3:].strip()
    return Osr(int(text))


def parse_policy(text: str, seed: int = 0) -> OraclePolicy:
    """``never``, ``always@POINT>VERSION``, ``random:PROB``, or ``script:n,n,2,...``."""
    text = text.strip()
    if text == "never":
        return never()
    if text.startswith("always@"):
        point, sep, version = text[len("always@"):].partition(">")
        if not sep:
            raise ValueError(f"bad policy {text!r}; expected always@POINT>VERSION")
        return always_at(int(point), int(version))
    if text.startswith("random:"):
        return random_policy(float(text[len("random:"):]), seed)
    if text.startswith("script:"):
        body = text[len("script:"):]
        return scripted([parse_decision(t) for t in body.split(",") if t.strip()])
    raise ValueError(f"unknown policy {text!r}")


# --- running ----------------------------------------------------------------------

class MvRunResult(NamedTuple):
    outcome: RunOutcome
    history: tuple[dict, ...]
    state: MvState
    steps: int

    @property
    def osr_count(self) -> int:
        return sum(1 for h in self.history if h["kind"] == "osr")


def mv_run(mp: MultiProgram, store, policy: OraclePolicy | None = None, fuel: int = 10_000,
           record_norm: bool = False) -> MvRunResult:
    """Run from ``(1, store, 1)``; every transition (OSR or normal step) consumes one unit of fuel.

    The history holds one record per OSR firing, plus normal steps when
    ``record_norm`` is set.
    """
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    policy = policy or never()
    s = initial_state(store)
    history: list[dict] = []
    steps = 0
    while not is_terminal(mp, s):
        if steps >= fuel:
            return MvRunResult(FuelExhausted(fuel), tuple(history), s, steps)
        d = policy.decide(s, osr_options(mp, s), steps)
        try:
            nxt = mv_step(mp, s, d)
        except Stuck as stuck:
            return MvRunResult(stuck.outcome, tuple(history), s, steps)
        if isinstance(d, Osr):
            history.append({"step": steps, "kind": "osr", "from": s.version, "to": d.target,
                            "point": s.point})
        elif record_norm:
            history.append({"step": steps, "kind": "norm", "from": s.version, "to": s.version,
                            "point": s.point})
        s = nxt
        steps += 1
    return MvRunResult(Completed(s.store), tuple(history), s, steps)


def history_jsonl(history) -> str:
    return "".join(json.dumps(h) + "\n" for h in history)


# --- determinism ------------------------------------------------------------------

@dataclass(frozen=True)
class DeterminismVerdict:
    """``kind`` is ``Deterministic``, ``Counterexample``, or ``Inconclusive`` (every run truncated).

    Runs cut off by the fuel bound are counted in ``truncated`` and never
    compared: a bounded search cannot tell a slow run from a divergent one.
    """

    kind: str
    outcome: RunOutcome | None
    witnesses: tuple = ()
    leaves: int = 0
    truncated: int = 0
    states: int = 0

    @property
    def deterministic(self) -> bool:
        return self.kind == "Deterministic"

    def __str__(self):
        head = f"{self.kind}"
        if self.kind == "Deterministic":
            head += f" {self.outcome}"
        elif self.kind == "Counterexample":
            (o1, h1), (o2, h2) = self.witnesses
            head += f": {o1} via {list(h1)} vs {o2} via {list(h2)}"
        return head + f" ({self.leaves} runs, {self.truncated} truncated, {self.states} states)"


def determinism_check(mp: MultiProgram, store, fuel: int = 64, max_osr: int = 2,
                      budget: int = 500_000) -> DeterminismVerdict:
    """Enumerate every oracle schedule with at most ``max_osr`` OSR firings within ``fuel`` steps.

    Shared sub-schedules are memoized on the full execution state, so the work
    is bounded by the number of distinct states rather than schedules.
    """
    truncated_key = FuelExhausted(fuel)
    memo: dict = {}
    leaves_total = 0

    def merge(acc, outcomes, event=None):
        for key, (count, example) in outcomes.items():
            if event is not None:
                example = (event,) + example
            if key in acc:
                acc[key] = (acc[key][0] + count, acc[key][1])
            else:
                acc[key] = (count, example)

    def explore(s: MvState, osr_left: int, steps: int):
        nonlocal leaves_total
        key = (s, osr_left, steps)
        if key in memo:
            return memo[key]
        if len(memo) >= budget:
            raise BudgetExceeded(len(memo), leaves_total)
        acc: dict = {}
        if is_terminal(mp, s):
            acc[Completed(s.store)] = (1, ())
            leaves_total += 1
        elif steps >= fuel:
            acc[truncated_key] = (1, ())
            leaves_total += 1
        else:
            try:
                merge(acc, explore(mv_step(mp, s, Norm()), osr_left, steps + 1))
            except Stuck as stuck:
                merge(acc, {stuck.outcome: (1, ())})
                leaves_total += 1
            if osr_left > 0:
                for q in osr_options(mp, s):
                    event = {"step": steps, "kind": "osr", "from": s.version, "to": q,
                             "point": s.point}
                    try:
                        child = explore(mv_step(mp, s, Osr(q)), osr_left - 1, steps + 1)
                    except Stuck as stuck:
                        child = {stuck.outcome: (1, ())}
                        leaves_total += 1
                    merge(acc, child, event)
        memo[key] = acc
        return acc

    outcomes = explore(initial_state(store), max_osr, 0)
    leaves = sum(c for c, _ in outcomes.values())
    truncated = outcomes.get(truncated_key, (0, ()))[0]
    finished = [(k, ex) for k, (c, ex) in outcomes.items() if k != truncated_key]
    if not finished:
        return DeterminismVerdict("Inconclusive", None, (), leaves, truncated, len(memo))
    if len(finished) == 1:
        return DeterminismVerdict("Deterministic", finished[0][0], (), leaves, truncated, len(memo))
    finished.sort(key=lambda kv: len(kv[1]))
    return DeterminismVerdict("Counterexample", None, (finished[0], finished[1]), leaves,
                              truncated, len(memo))


__all__ = [
    "MultiProgram", "build_multiprogram", "MvState", "Norm", "Osr", "Decision", "initial_state",
    "is_terminal", "osr_options", "mv_step", "OraclePolicy", "never", "always_at",
    "random_policy", "scripted", "parse_decision", "parse_policy", "MvRunResult", "mv_run",
    "history_jsonl", "DeterminismVerdict", "determinism_check",
]
