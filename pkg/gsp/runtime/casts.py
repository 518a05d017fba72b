"""The run-time check for each evaluation type.

A cast looks only at the value's outermost representation: it never visits
dictionary entries or object fields, and on success it returns the value it
was given.
"""

from typing import Optional

from gsp.core.errors import CastError
from gsp.runtime.registry import TypeRegistry, get_registry
from gsp.runtime.values import CheckedDictValue, Instance, Value, value_kind
from gsp.types.evaluation import (
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


def matches(v: Value, t: EvalType, registry: Optional[TypeRegistry] = None) -> bool:
    """Whether ``v`` passes the check for ``t``."""
    if isinstance(t, TDyn):
        return True
    if isinstance(t, TNone):
        return v is None
    if isinstance(t, TBool):
        return type(v) is bool
    if isinstance(t, TInt):
        return type(v) in (int, bool)
    if isinstance(t, TStr):
        return type(v) is str
    if isinstance(t, TDict):
        return type(v) is dict
    if isinstance(t, TCheckedDict):
        return isinstance(v, CheckedDictValue) and v.tag is (registry or get_registry()).intern(t)
    if isinstance(t, TOptional):
        return v is None or matches(v, t.inner, registry)
    if isinstance(t, TClass):
        if t.name == "object":
            return True
        return isinstance(v, Instance) and v.cls.is_subclass_of(t.name)
    raise TypeError(f"not an evaluation type: {t!r}")


def cast(v: Value, t: EvalType, registry: Optional[TypeRegistry] = None) -> Value:
    """Return ``v`` unchanged if it matches ``t``; raise CastError otherwise."""
    if matches(v, t, registry):
        return v
    raise CastError(f"{t} expected, got {value_kind(v)}")
