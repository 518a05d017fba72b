"""Core utilities shared by the toolchain stages."""

from gsp.core.errors import (
    GspError,
    GspSyntaxError,
    CheckError,
    GspRuntimeError,
    CastError,
    KeyLookupError,
    AttributeLookupError,
    DynCallError,
    BudgetExceeded,
    InternalError,
    RuntimeErrorKind,
    UnknownClassError,
)

__all__ = [
    "GspError",
    "GspSyntaxError",
    "CheckError",
    "GspRuntimeError",
    "CastError",
    "KeyLookupError",
    "AttributeLookupError",
    "DynCallError",
    "BudgetExceeded",
    "InternalError",
    "RuntimeErrorKind",
    "UnknownClassError",
]
