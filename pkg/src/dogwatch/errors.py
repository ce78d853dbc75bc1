"""Error types and structured diagnostics shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Diagnostic:
    """A single structured problem report.

    ``line`` and ``column`` are 1-based positions into the offending source
    text when known, ``label`` names the model element involved when known.
    """

    severity: str  # "error" or "warning"
    message: str
    line: int | None = None
    column: int | None = None
    label: str | None = None

    def to_json(self) -> dict:
        out: dict = {"severity": self.severity, "message": self.message}
        if self.line is not None:
            out["line"] = self.line
        if self.column is not None:
            out["column"] = self.column
        if self.label is not None:
            out["label"] = self.label
        return out

    def render(self) -> str:
        pos = f"{self.line}:{self.column}: " if self.line is not None else ""
        return f"{pos}{self.severity}: {self.message}"


class DogwatchError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.message = message
        self.diagnostics = diagnostics or [Diagnostic("error", message)]


class ParseError(DogwatchError):
    """Source text could not be parsed; carries positioned diagnostics."""


class ModelError(DogwatchError):
    """A structurally invalid model was supplied where a valid one is required."""


class QueryError(DogwatchError):
    """A well-formed query that cannot be evaluated (bad labels, evidence
    rule violations, mode/body mismatches, empty configuration sets)."""


class EmptyParticipationError(QueryError):
    """Ranking was requested for an object that participates in nothing."""


class CapacityError(DogwatchError):
    """An enumeration limit was exceeded; the query is legal but too large."""


@dataclass
class DiagnosticSink:
    """Collects diagnostics during parsing or validation."""

    items: list[Diagnostic] = field(default_factory=list)

    def error(self, message: str, line: int | None = None,
              column: int | None = None, label: str | None = None) -> None:
        self.items.append(Diagnostic("error", message, line, column, label))

    def warning(self, message: str, line: int | None = None,
                column: int | None = None, label: str | None = None) -> None:
        self.items.append(Diagnostic("warning", message, line, column, label))

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.items if d.severity == "error"]

    def raise_if_errors(self, exc: type[DogwatchError], summary: str) -> None:
        errs = self.errors
        if errs:
            raise exc(f"{summary}: {errs[0].message}", self.items)
