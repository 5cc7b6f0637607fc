"""Exception hierarchy shared by every osrlab module."""

from __future__ import annotations


class OsrError(Exception):
    """Base class for all domain errors raised by osrlab."""


class OsrSyntaxError(OsrError):
    """A line of `.osr` text (or a formula) could not be tokenized/parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class StructureError(OsrError):
    """A syntactically fine program violates the structural rules of the language."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class UndefinedVariable(OsrError):
    """Expression evaluation read an unbound variable."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"undefined variable {name}")


class Stuck(OsrError):
    """No transition rule applies; carries the RunOutcome describing why."""

    def __init__(self, outcome):
        self.outcome = outcome
        super().__init__(str(outcome))


class NotComposable(OsrError):
    def __init__(self, missing):
        self.missing = tuple(sorted(missing))
        super().__init__(f"not composable, missing: {' '.join(self.missing)}")


class UnboundMetaVariable(OsrError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound meta-variable ?{name}")


class NoMatch(OsrError):
    """A rewrite rule found no substitution satisfying pattern and side condition."""


class InvalidAction(OsrError):
    """An action log entry does not apply to the program it is replayed on."""


class ReconstructFailed(OsrError):
    def __init__(self, var: str, reason: str):
        self.var = var
        self.reason = reason
        super().__init__(f"cannot reconstruct {var}: {reason}")


class InapplicableDecision(OsrError):
    pass


class BudgetExceeded(OsrError):
    def __init__(self, explored: int, leaves: int):
        self.explored = explored
        self.leaves = leaves
        super().__init__(f"budget exceeded after {explored} states ({leaves} complete runs)")
