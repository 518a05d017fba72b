"""Diagnostic schema shared by the parser, the checker and the API."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

# Stable diagnostic codes.
E_SYNTAX = "E-SYNTAX"
E_UNKNOWN_CLASS = "E-UNKNOWN-CLASS"
E_DUP_NAME = "E-DUP-NAME"
E_TYPE_MISMATCH = "E-TYPE-MISMATCH"
E_UNKNOWN_MEMBER = "E-UNKNOWN-MEMBER"
E_ARITY = "E-ARITY"
E_IMPRECISE_OVERRIDE = "E-IMPRECISE-OVERRIDE"
E_INCOMPAT_OVERRIDE = "E-INCOMPAT-OVERRIDE"
E_IMPLICIT_NONE_RETURN = "E-IMPLICIT-NONE-RETURN"
E_IMMUTABLE_MODULE_VAR = "E-IMMUTABLE-MODULE-VAR"
E_DYNCLASS_PRECISE_ANN = "E-DYNCLASS-PRECISE-ANN"

ALL_CODES = (
    E_SYNTAX,
    E_UNKNOWN_CLASS,
    E_DUP_NAME,
    E_TYPE_MISMATCH,
    E_UNKNOWN_MEMBER,
    E_ARITY,
    E_IMPRECISE_OVERRIDE,
    E_INCOMPAT_OVERRIDE,
    E_IMPLICIT_NONE_RETURN,
    E_IMMUTABLE_MODULE_VAR,
    E_DYNCLASS_PRECISE_ANN,
)


class Diagnostic(BaseModel):
    """A single static error with its source position."""

    model_config = ConfigDict(frozen=True)

    code: str
    message: str
    line: int = Field(0, ge=0)
    col: int = Field(0, ge=0)
    severity: Literal["error"] = "error"

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.code} {self.message}"
