"""Interactive stepper over a multi-version program.

The user plays the oracle: ``s`` takes a normal step, ``osr V`` jumps to
version ``V``. Every accepted command is appended to a log that, fed back
through :func:`replay`, reproduces the same final state.
"""

from __future__ import annotations

import sys
from typing import Iterable, TextIO

from ..analysis.dataflow import live_vars
from ..errors import Stuck
from ..multiver import (MultiProgram, MvState, Norm, Osr, initial_state, is_terminal, mv_step,
                        osr_options)

HELP = """commands:
  s [N]      take N normal steps (default 1)
  osr V      fire an OSR to version V
  p          print the store and live sets at the current point
  l          list instructions around the current point
  where      show version and point
  help       this text
  q          quit"""

WINDOW = 3


class Stepper:
    def __init__(self, mp: MultiProgram, store, out: TextIO | None = None):
        self.mp = mp
        self.state: MvState = initial_state(store)
        self.out = out if out is not None else sys.stdout
        self.log: list[str] = []

    def say(self, text: str = ""):
        print(text, file=self.out)

    def where(self) -> str:
        s = self.state
        n = len(self.mp.version(s.version))
        if is_terminal(self.mp, s):
            return f"version {s.version}, completed (point {n + 1})"
        return f"version {s.version}, point {s.point}: {self.mp.version(s.version)[s.point]}"

    def execute(self, line: str) -> bool:
        """Run one command; False once the session should end."""
        words = line.split()
        if not words:
            return True
        cmd, args = words[0], words[1:]
        if cmd in ("q", "quit"):
            return False
        handler = {
            "s": self._step, "step": self._step, "osr": self._osr, "p": self._print,
            "l": self._list, "where": self._where, "help": self._help,
        }.get(cmd)
        if handler is None:
            self.say(f"unknown command {cmd!r}; try help")
            return True
        if handler(args):
            self.log.append(" ".join(words))
        return True

    def _step(self, args) -> bool:
        try:
            # "s s s" steps three times, like "s 3"
            count = 1 + len(args) if all(a == "s" for a in args) else int(args[0])
        except ValueError:
            self.say("usage: s [N]")
            return False
        done = 0
        for _ in range(count):
            if is_terminal(self.mp, self.state):
                self.say("execution already completed")
                break
            try:
                self.state = mv_step(self.mp, self.state, Norm())
            except Stuck as stuck:
                self.say(f"stuck: {stuck.outcome}")
                break
            done += 1
        if done:
            self.say(self.where())
            if is_terminal(self.mp, self.state):
                self.say(f"Completed {self.state.store}")
        return done > 0

    def _osr(self, args) -> bool:
        if len(args) != 1 or not args[0].isdigit():
            self.say("usage: osr VERSION")
            return False
        target = int(args[0])
        s = self.state
        mu = self.mp.labels.get((s.version, target))
        if mu is None:
            self.say(f"no OSR edge from version {s.version} to {target}")
            return False
        if target not in osr_options(self.mp, s):
            if is_terminal(self.mp, s):
                reason = "execution already completed"
            elif s.point not in mu:
                reason = "not in the mapping domain"
            else:
                reason = "OSR is not offered before the input header runs"
            self.say(f"cannot fire OSR at point {s.point}: {reason}")
            return False
        dst, chi = mu[s.point]
        self.say(f"compensation to version {target} point {dst}:")
        for text in chi.lines():
            self.say(f"  {text}")
        try:
            self.state = mv_step(self.mp, s, Osr(target))
        except Stuck as stuck:
            self.say(f"compensation code got stuck: {stuck.outcome}")
            return False
        self.say(self.where())
        return True

    def _print(self, args) -> bool:
        s = self.state
        self.say(f"store {s.store}")
        for k, prog in enumerate(self.mp.versions, start=1):
            if s.point <= len(prog):
                live = ", ".join(sorted(live_vars(prog, s.point)))
                self.say(f"  version {k} live at {s.point}: {{{live}}}")
        return False

    def _list(self, args) -> bool:
        s = self.state
        prog = self.mp.version(s.version)
        lo, hi = max(1, s.point - WINDOW), min(len(prog), s.point + WINDOW)
        for k in range(lo, hi + 1):
            marker = "=>" if k == s.point else "  "
            self.say(f"{marker} {k:3d}  {prog[k]}")
        return False

    def _where(self, args) -> bool:
        self.say(self.where())
        return False

    def _help(self, args) -> bool:
        self.say(HELP)
        return False


def replay(mp: MultiProgram, store, commands: Iterable[str], out: TextIO | None = None) -> Stepper:
    """Feed ``commands`` to a fresh stepper and return it."""
    stepper = Stepper(mp, store, out)
    for line in commands:
        if not stepper.execute(line):
            break
    return stepper


def interact(stepper: Stepper, stream: TextIO, prompt: str = "(osr) ") -> Stepper:
    interactive = stream.isatty()
    stepper.say(stepper.where())
    while True:
        if interactive:
            print(prompt, end="", file=stepper.out, flush=True)
        line = stream.readline()
        if not line:
            break
        if not stepper.execute(line.strip()):
            break
    return stepper


__all__ = ["Stepper", "replay", "interact", "HELP"]
