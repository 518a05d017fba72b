"""Run-time values, casts, checked dictionaries and class objects."""

from gsp.runtime.casts import cast, matches
from gsp.runtime.classes import ClassRuntime, MethodEntry, WrapperEntry, dispatch, lookup_method
from gsp.runtime.dicts import (
    checked_dict_new,
    checked_dict_set_guarded,
    dict_get,
    dict_set,
    dict_set_guarded,
)
from gsp.runtime.metrics import Metrics
from gsp.runtime.registry import TypeId, TypeRegistry, get_registry, intern
from gsp.runtime.values import CheckedDictValue, Instance, render_value, value_kind, values_equal

__all__ = [
    "CheckedDictValue",
    "ClassRuntime",
    "Instance",
    "MethodEntry",
    "Metrics",
    "TypeId",
    "TypeRegistry",
    "WrapperEntry",
    "cast",
    "checked_dict_new",
    "checked_dict_set_guarded",
    "dict_get",
    "dict_set",
    "dict_set_guarded",
    "dispatch",
    "get_registry",
    "intern",
    "lookup_method",
    "matches",
    "render_value",
    "value_kind",
    "values_equal",
]
