"""Types: evaluation types, normalization, retraction and the subtyping judgments."""

from gsp.types.env import ClassSig, FieldSig, FuncSig, MethodSig, TypeEnv
from gsp.types.evaluation import (
    BOOL,
    DICT,
    DYN,
    INT,
    NONE,
    OBJECT,
    STR,
    EvalType,
    TBool,
    TCheckedDict,
    TClass,
    TDict,
    TDyn,
    TInt,
    TNone,
    TOptional,
    TStr,
)
from gsp.types.normalize import embed, normalize, retract
from gsp.types.relations import is_consistent_subtype, is_subtype, materializes

__all__ = [
    "BOOL",
    "DICT",
    "DYN",
    "INT",
    "NONE",
    "OBJECT",
    "STR",
    "ClassSig",
    "EvalType",
    "FieldSig",
    "FuncSig",
    "MethodSig",
    "TBool",
    "TCheckedDict",
    "TClass",
    "TDict",
    "TDyn",
    "TInt",
    "TNone",
    "TOptional",
    "TStr",
    "TypeEnv",
    "embed",
    "is_consistent_subtype",
    "is_subtype",
    "materializes",
    "normalize",
    "retract",
]
