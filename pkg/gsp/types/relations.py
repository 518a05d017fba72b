"""Subtyping, consistent subtyping and materialization."""

from typing import Optional, Protocol

from gsp.core.errors import UnknownClassError
from gsp.types.evaluation import (
    EvalType,
    TBool,
    TCheckedDict,
    TClass,
    TDyn,
    TInt,
    TNone,
    TOptional,
)


class ClassHierarchy(Protocol):
    def has_class(self, name: str) -> bool: ...

    def parent_of(self, name: str) -> Optional[str]: ...


def _require(env: ClassHierarchy, t: EvalType) -> None:
    if isinstance(t, TClass) and not env.has_class(t.name):
        raise UnknownClassError(t.name)
    if isinstance(t, TOptional):
        _require(env, t.inner)
    if isinstance(t, TCheckedDict):
        _require(env, t.key)
        _require(env, t.value)


def _is_ancestor(env: ClassHierarchy, child: str, ancestor: str) -> bool:
    current: Optional[str] = child
    while current is not None:
        if current == ancestor:
            return True
        current = env.parent_of(current)
    return False


def _subtype(env: ClassHierarchy, t0: EvalType, t1: EvalType) -> bool:
    if t0 == t1:
        return True
    if isinstance(t0, TDyn) or isinstance(t1, TDyn):
        return False
    if t1 == TClass("object"):
        return True
    if isinstance(t0, TBool) and isinstance(t1, TInt):
        return True
    if isinstance(t1, TOptional):
        if isinstance(t0, TNone):
            return True
        if isinstance(t0, TOptional):
            return _subtype(env, t0.inner, t1.inner)
        return _subtype(env, t0, t1.inner)
    if isinstance(t0, TClass) and isinstance(t1, TClass):
        return _is_ancestor(env, t0.name, t1.name)
    return False


def is_subtype(env: ClassHierarchy, t0: EvalType, t1: EvalType) -> bool:
    """The strict relation: Dyn relates only to itself."""
    _require(env, t0)
    _require(env, t1)
    return _subtype(env, t0, t1)


def is_consistent_subtype(env: ClassHierarchy, t0: EvalType, t1: EvalType) -> bool:
    _require(env, t0)
    _require(env, t1)
    return isinstance(t1, TDyn) or _subtype(env, t0, t1)


def materializes(t0: EvalType, t1: EvalType) -> bool:
    return isinstance(t0, TDyn) and not isinstance(t1, TDyn)
