"""Exception hierarchy shared by every nmsem module."""

from __future__ import annotations

from typing import Any, Iterable


class NmsemError(Exception):
    """Base class for all library errors."""

    def details(self) -> dict[str, Any]:
        """Extra fields for JSON error reports."""
        return {}


class FormulaSyntaxError(NmsemError):
    """Raised by the formula parser.

    Attributes:
        text: the input that failed to parse
        offset: byte offset (UTF-8) of the offending token
        expected: names of the tokens that would have been accepted
    """

    def __init__(self, text: str, offset: int, expected: Iterable[str]):
        self.text = text
        self.offset = offset
        self.expected = frozenset(expected)
        listing = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {listing}")

    def details(self) -> dict[str, Any]:
        return {"offset": self.offset, "expected": sorted(self.expected)}


class UnboundAtomError(NmsemError, KeyError):
    """Evaluation met an atom the valuation does not assign."""

    def __init__(self, atom: str):
        self.atom = atom
        super().__init__(f"atom {atom!r} is not assigned by the valuation")

    def __str__(self) -> str:
        return self.args[0]

    def details(self) -> dict[str, Any]:
        return {"atom": self.atom}


class LanguageError(NmsemError):
    """A sentence lies outside the language it is used with."""


class DefinabilityError(NmsemError):
    """A set of worlds is not definable where definability is required."""


class PreconditionError(NmsemError):
    """A conditional construction was applied outside its hypotheses.

    Attributes:
        precondition: short name of the failed condition
        verdict: the failing verdict, when one was computed
    """

    def __init__(self, precondition: str, message: str | None = None, verdict: Any = None):
        self.precondition = precondition
        self.verdict = verdict
        super().__init__(message or f"precondition {precondition!r} does not hold")

    def details(self) -> dict[str, Any]:
        out: dict[str, Any] = {"precondition": self.precondition}
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_dict()
        return out


class SearchSpaceError(NmsemError):
    """Exhaustive mode was requested beyond its bound."""


class InputError(NmsemError):
    """A document or command line is malformed."""
