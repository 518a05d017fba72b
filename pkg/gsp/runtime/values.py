"""The run-time value model.

None, integers, booleans, strings and plain dictionaries are the host's own
objects. Checked dictionaries and instances are wrapped so they can carry a
type tag and a class.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Set, Tuple

from gsp.core.errors import KeyLookupError
from gsp.runtime.classes import ClassRuntime
from gsp.runtime.registry import TypeId
from gsp.syntax.unparse import quote

Value = Any


@dataclass(eq=False)
class CheckedDictValue:
    tag: TypeId
    entries: Dict[Value, Value] = field(default_factory=dict)

    def __repr__(self) -> str:
        return render_value(self)


@dataclass(eq=False)
class Instance:
    cls: ClassRuntime
    fields: list

    def __repr__(self) -> str:
        return f"<{self.cls.name} object>"


def is_mapping(v: Value) -> bool:
    return type(v) is dict or isinstance(v, CheckedDictValue)


def entries_of(v: Value) -> Dict[Value, Value]:
    return v if type(v) is dict else v.entries


def check_key(k: Value) -> Value:
    if k is None or type(k) in (int, bool, str):
        return k
    raise KeyLookupError(f"unhashable key of kind {value_kind(k)}")


def value_kind(v: Value) -> str:
    """Short description of a value's run-time kind, used in error messages."""
    if v is None:
        return "None"
    if type(v) is bool:
        return "bool"
    if type(v) is int:
        return "int"
    if type(v) is str:
        return "str"
    if type(v) is dict:
        return "Dict"
    if isinstance(v, CheckedDictValue):
        return str(v.tag.type)
    if isinstance(v, Instance):
        return v.cls.name
    return type(v).__name__


def render_value(v: Value, _seen: Optional[Set[int]] = None) -> str:
    if v is None:
        return "None"
    if type(v) is bool:
        return "True" if v else "False"
    if type(v) is int:
        return str(v)
    if type(v) is str:
        return quote(v)
    if isinstance(v, Instance):
        return f"<{v.cls.name} object>"
    if is_mapping(v):
        seen = set() if _seen is None else _seen
        if id(v) in seen:
            return "{...}"
        seen.add(id(v))
        body = ", ".join(f"{render_value(k, seen)}: {render_value(x, seen)}" for k, x in entries_of(v).items())
        seen.discard(id(v))
        text = "{" + body + "}"
        return text if type(v) is dict else f"{v.tag.type}({text})"
    raise TypeError(f"not a value: {v!r}")


def values_equal(a: Value, b: Value, _seen: Optional[Set[Tuple[int, int]]] = None) -> bool:
    """Structural equality for primitives and mappings, identity for instances."""
    if isinstance(a, Instance) or isinstance(b, Instance):
        return a is b
    if is_mapping(a) or is_mapping(b):
        if not (is_mapping(a) and is_mapping(b)) or type(a) is not type(b):
            return False
        if isinstance(a, CheckedDictValue) and a.tag is not b.tag:
            return False
        if a is b:
            return True
        seen = set() if _seen is None else _seen
        if (id(a), id(b)) in seen:
            return True
        seen.add((id(a), id(b)))
        ea, eb = entries_of(a), entries_of(b)
        if len(ea) != len(eb):
            return False
        return all(k in eb and values_equal(v, eb[k], seen) for k, v in ea.items())
    if type(a) is str or type(b) is str:
        return type(a) is type(b) and a == b
    if a is None or b is None:
        return a is b
    return a == b
