"""Error types shared across gatlab.

Every error can carry a source span; the CLI prints it as a ``file:line:col``
prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class SourceSpan:
    line: int
    col: int
    end_line: int
    end_col: int
    path: Optional[str] = None

    def __str__(self) -> str:
        where = f"{self.line}:{self.col}"
        return f"{self.path}:{where}" if self.path else where


class GatError(Exception):
    """Base class. ``span`` and ``trail`` are filled in as the error propagates."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(message)
        self.message = message
        self.span = span
        self.trail: list[str] = []

    def at(self, span: Optional[SourceSpan]) -> "GatError":
        if self.span is None and span is not None:
            self.span = span
        return self

    def within(self, where: str) -> "GatError":
        self.trail.insert(0, where)
        return self

    def __str__(self) -> str:
        parts = []
        if self.span is not None:
            parts.append(f"{self.span}: ")
        if self.trail:
            parts.append(" > ".join(self.trail) + ": ")
        parts.append(self.message)
        return "".join(parts)

    @property
    def tag(self) -> str:
        return type(self).__name__


class UnknownSymbol(GatError):
    pass


class ArityMismatch(GatError):
    pass


class IllFormedTelescope(GatError):
    def __init__(self, decl: str, position: int, cause: GatError):
        super().__init__(f"declaration {decl!r}, telescope entry {position}: {cause}")
        self.decl = decl
        self.position = position
        self.cause = cause


class EqualityUndecided(GatError):
    pass


class TypeMismatch(GatError):
    def __init__(self, message: str, expected: Any = None, actual: Any = None, verdict: Any = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual
        self.verdict = verdict


class DomainMismatch(GatError):
    pass


class RangeError(GatError):
    pass


class RuleMismatch(GatError):
    def __init__(self, rule: str, path: tuple[int, ...], message: str):
        loc = "/".join(map(str, path)) or "root"
        super().__init__(f"rule {rule} at node {loc}: {message}")
        self.rule = rule
        self.path = path


class ContextMismatch(GatError):
    def __init__(self, path: tuple[int, ...], message: str, rule: str = ""):
        loc = "/".join(map(str, path)) or "root"
        super().__init__(f"node {loc}: {message}")
        self.rule = rule
        self.path = path


class MissingTableEntry(GatError):
    pass


class ModelRejected(GatError):
    pass


class PreconditionUnmet(GatError):
    pass


class ParseError(GatError):
    pass


class EqualityRejected(ParseError):
    """A surface ``s = t`` that cannot be expressed through an Eq sort."""


class LawViolation(GatError):
    """A category or functor table breaks a unit, associativity or preservation law."""
