"""Exception hierarchy for parsing, checking and execution."""

from enum import Enum
from typing import Sequence

from gsp.schemas.diagnostic import Diagnostic


class GspError(Exception):
    """Base class for every error raised by the toolchain."""


class GspSyntaxError(GspError):
    """The source text could not be parsed into a well-formed program."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "syntax error"
        super().__init__(first)


class CheckError(GspError):
    """The program parsed but the checker reported static errors."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__(", ".join(d.code for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]


class UnknownClassError(GspError, LookupError):
    """A type mentions a class the environment does not declare."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown class '{name}'")


class RuntimeErrorKind(str, Enum):
    """The allowed run-time error classes."""

    CAST = "CastError"
    KEY = "KeyError"
    ATTRIBUTE = "AttributeError"
    DYN_CALL = "DynCallError"


class GspRuntimeError(GspError):
    """An allowed run-time error raised by an executing program."""

    kind: RuntimeErrorKind

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)

    def render(self) -> str:
        return f"{self.kind.value}: {self.message}"


class CastError(GspRuntimeError):
    kind = RuntimeErrorKind.CAST


class KeyLookupError(GspRuntimeError):
    kind = RuntimeErrorKind.KEY


class AttributeLookupError(GspRuntimeError):
    kind = RuntimeErrorKind.ATTRIBUTE


class DynCallError(GspRuntimeError):
    kind = RuntimeErrorKind.DYN_CALL


class BudgetExceeded(GspError):
    """Execution ran out of instruction budget or call depth."""


class InternalError(GspError):
    """A VM invariant failed; always a toolchain bug."""
