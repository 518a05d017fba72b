"""Evaluation types: the enforceable subset of surface types."""

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class TDyn:
    def __str__(self) -> str:
        return "dyn"


@dataclass(frozen=True)
class TNone:
    def __str__(self) -> str:
        return "None"


@dataclass(frozen=True)
class TInt:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class TBool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class TStr:
    def __str__(self) -> str:
        return "str"


@dataclass(frozen=True)
class TClass:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TDict:
    """Shallow dictionary type; parameters are erased."""

    def __str__(self) -> str:
        return "Dict"


@dataclass(frozen=True)
class TCheckedDict:
    key: "EvalType"
    value: "EvalType"

    def __str__(self) -> str:
        return f"CheckedDict[{self.key}, {self.value}]"


@dataclass(frozen=True)
class TOptional:
    inner: "EvalType"

    def __str__(self) -> str:
        return f"Optional[{self.inner}]"


EvalType = Union[TDyn, TNone, TInt, TBool, TStr, TClass, TDict, TCheckedDict, TOptional]

DYN = TDyn()
NONE = TNone()
INT = TInt()
BOOL = TBool()
STR = TStr()
DICT = TDict()
OBJECT = TClass("object")


def is_dyn(t: EvalType) -> bool:
    return isinstance(t, TDyn)


def is_precise(t: EvalType) -> bool:
    return not isinstance(t, TDyn)
