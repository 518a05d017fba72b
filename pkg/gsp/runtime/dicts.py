"""Dictionary and checked-dictionary operations."""

from typing import Optional

from gsp.core.errors import AttributeLookupError, KeyLookupError
from gsp.runtime.casts import cast
from gsp.runtime.metrics import Metrics
from gsp.runtime.registry import TypeRegistry, get_registry
from gsp.runtime.values import CheckedDictValue, Value, check_key, entries_of, is_mapping, render_value, value_kind
from gsp.types.evaluation import EvalType, TCheckedDict


def _count(metrics: Optional[Metrics], n: int) -> None:
    if metrics is not None:
        metrics.element_casts += n


def checked_dict_new(
    key_type: EvalType,
    val_type: EvalType,
    seed: dict,
    registry: Optional[TypeRegistry] = None,
    metrics: Optional[Metrics] = None,
) -> CheckedDictValue:
    """Build a tagged dictionary, checking every seed entry once."""
    registry = registry or get_registry()
    tag = registry.intern(TCheckedDict(key_type, val_type))
    entries = {}
    for k, v in seed.items():
        _count(metrics, 2)
        entries[cast(k, key_type, registry)] = cast(v, val_type, registry)
    return CheckedDictValue(tag, entries)


def checked_dict_set_guarded(
    cd: CheckedDictValue,
    k: Value,
    v: Value,
    registry: Optional[TypeRegistry] = None,
    metrics: Optional[Metrics] = None,
) -> None:
    """A write from untyped code: check the key and value against the tag, then store."""
    t = cd.tag.type
    _count(metrics, 2)
    key = cast(check_key(k), t.key, registry)
    cd.entries[key] = cast(v, t.value, registry)


def _require_mapping(d: Value, op: str) -> None:
    if not is_mapping(d):
        raise AttributeLookupError(f"{value_kind(d)} object does not support {op}")


def dict_get(d: Value, k: Value) -> Value:
    _require_mapping(d, "item access")
    entries = entries_of(d)
    key = check_key(k)
    if key not in entries:
        raise KeyLookupError(render_value(key))
    return entries[key]


def dict_set(d: Value, k: Value, v: Value) -> None:
    """Unguarded write; checked receivers rely on the caller's static checks."""
    _require_mapping(d, "item assignment")
    entries_of(d)[check_key(k)] = v


def dict_set_guarded(
    d: Value,
    k: Value,
    v: Value,
    registry: Optional[TypeRegistry] = None,
    metrics: Optional[Metrics] = None,
) -> None:
    """Write through a dyn receiver: checked dictionaries validate, plain ones do not."""
    if isinstance(d, CheckedDictValue):
        checked_dict_set_guarded(d, k, v, registry, metrics)
    else:
        dict_set(d, k, v)
