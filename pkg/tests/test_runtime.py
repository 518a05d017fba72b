"""Casts, the checked-dictionary registry, dictionary operations and dispatch."""

from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, strategies as st

from gsp.core.errors import AttributeLookupError, CastError, KeyLookupError
from gsp.runtime import (
    ClassRuntime,
    CheckedDictValue,
    Instance,
    MethodEntry,
    Metrics,
    TypeRegistry,
    WrapperEntry,
    cast,
    checked_dict_new,
    checked_dict_set_guarded,
    dict_get,
    dict_set,
    dict_set_guarded,
    dispatch,
    intern,
    lookup_method,
    matches,
    render_value,
    value_kind,
    values_equal,
)
from gsp.types import BOOL, DICT, DYN, INT, NONE, OBJECT, STR, TCheckedDict, TClass, TOptional


def _class(name, ancestry, parent=None):
    return ClassRuntime(
        name=name,
        parent=parent,
        ancestry=frozenset(ancestry),
        field_names=("x",),
        field_types=(INT,),
    )


A = _class("A", {"A", "object"})
B = _class("B", {"B", "A", "object"}, parent=A)


@pytest.fixture
def registry():
    return TypeRegistry()


def _cd(registry, k=STR, v=INT, seed=None):
    return checked_dict_new(k, v, seed or {}, registry=registry)


# Casts


@pytest.mark.parametrize(
    "value, target, ok",
    [
        (None, NONE, True),
        (0, NONE, False),
        (True, INT, True),
        (1, BOOL, False),
        (False, BOOL, True),
        ("s", STR, True),
        (1, STR, False),
        ({}, DICT, True),
        (None, TOptional(INT), True),
        ("s", TOptional(INT), False),
        (Instance(B, [0]), TClass("A"), True),
        (Instance(A, [0]), TClass("B"), False),
        ("anything", OBJECT, True),
        ({"a": 1}, DYN, True),
    ],
)
def test_cast_matrix(value, target, ok, registry):
    assert matches(value, target, registry) is ok
    if ok:
        assert cast(value, target, registry) is value
    else:
        with pytest.raises(CastError):
            cast(value, target, registry)


def test_cast_error_message_names_target_and_kind(registry):
    with pytest.raises(CastError) as info:
        cast(1, BOOL, registry)
    assert info.value.render() == "CastError: bool expected, got int"


def test_checked_dict_casts_compare_tags_exactly(registry):
    d = _cd(registry)
    assert matches(d, TCheckedDict(STR, INT), registry)
    assert not matches(d, TCheckedDict(STR, DYN), registry)
    assert not matches(d, DICT, registry)
    assert not matches({}, TCheckedDict(STR, INT), registry)
    with pytest.raises(CastError) as info:
        cast(d, TCheckedDict(STR, DYN), registry)
    assert str(info.value) == "CheckedDict[str, dyn] expected, got CheckedDict[str, int]"


def test_optional_checked_dict_accepts_none(registry):
    assert matches(None, TOptional(TCheckedDict(STR, INT)), registry)
    assert matches(_cd(registry), TOptional(TCheckedDict(STR, INT)), registry)


# Registry


def test_registry_interns_each_type_once(registry):
    first = registry.intern(TCheckedDict(STR, INT))
    again = registry.intern(TCheckedDict(STR, INT))
    other = registry.intern(TCheckedDict(STR, BOOL))
    assert first is again
    assert intern(registry, TCheckedDict(STR, INT)) is first
    assert first is not other
    assert len(registry) == 2
    assert TCheckedDict(STR, INT) in registry and TCheckedDict(DYN, DYN) not in registry


def test_concurrent_interning_hands_out_one_tag_per_type(registry):
    types = [TCheckedDict(k, v) for k in (STR, DYN) for v in (INT, BOOL, DYN, TOptional(STR))]
    work = types * 200
    with ThreadPoolExecutor(max_workers=8) as pool:
        tags = list(pool.map(registry.intern, work))
    for t, tag in zip(work, tags):
        assert tag is registry.intern(t)
        assert tag.type == t
    assert len(registry) == len(types)
    assert sorted(tag.index for tag in {id(tag): tag for tag in tags}.values()) == list(range(len(types)))


def test_registry_only_interns_checked_dicts(registry):
    with pytest.raises(TypeError):
        registry.intern(INT)


# Checked dictionaries


def test_checked_dict_new_checks_every_seed_entry(registry):
    metrics = Metrics()
    d = checked_dict_new(STR, INT, {"A": 1, "B": True}, registry=registry, metrics=metrics)
    assert d.entries == {"A": 1, "B": True}
    assert metrics.element_casts == 4
    with pytest.raises(CastError):
        checked_dict_new(STR, INT, {"A": "one"}, registry=registry)


def test_guarded_writes_check_against_the_tag(registry):
    metrics = Metrics()
    d = _cd(registry)
    checked_dict_set_guarded(d, "A", 2, registry=registry, metrics=metrics)
    assert d.entries == {"A": 2}
    assert metrics.element_casts == 2
    with pytest.raises(CastError) as info:
        dict_set_guarded(d, "B", "two", registry=registry)
    assert str(info.value) == "int expected, got str"
    assert "B" not in d.entries


def test_guarded_write_to_plain_dict_stores_anything(registry):
    metrics = Metrics()
    d = {}
    dict_set_guarded(d, "A", "two", registry=registry, metrics=metrics)
    assert d == {"A": "two"}
    assert metrics.element_casts == 0


def test_unguarded_write_skips_checks(registry):
    d = _cd(registry)
    dict_set(d, "A", 5)
    assert dict_get(d, "A") == 5


def test_dict_get_errors():
    with pytest.raises(KeyLookupError) as info:
        dict_get({"A": 1}, "B")
    assert info.value.render() == 'KeyError: "B"'
    with pytest.raises(AttributeLookupError) as info:
        dict_get(3, "A")
    assert str(info.value) == "int object does not support item access"
    with pytest.raises(AttributeLookupError):
        dict_set("s", "A", 1)


# Values


def test_rendering(registry):
    d = _cd(registry, seed={"A": 2})
    assert render_value(d) == 'CheckedDict[str, int]({"A": 2})'
    assert render_value({"k": None, 1: True}) == '{"k": None, 1: True}'
    assert render_value(Instance(A, [0])) == "<A object>"
    assert value_kind(d) == "CheckedDict[str, int]"
    assert value_kind({}) == "Dict"
    assert value_kind(True) == "bool"


def test_self_referential_dict_renders_finitely():
    d = {}
    d["me"] = d
    assert render_value(d) == '{"me": {...}}'


def test_values_equal(registry):
    assert values_equal({"a": {"b": 1}}, {"a": {"b": 1}})
    assert not values_equal("1", 1)
    assert not values_equal({}, _cd(registry))
    assert not values_equal(_cd(registry), _cd(registry, v=BOOL))
    assert values_equal(_cd(registry, seed={"A": 1}), _cd(registry, seed={"A": 1}))
    assert not values_equal(Instance(A, [0]), Instance(A, [0]))


# Dispatch


def test_dispatch_and_lookup_follow_the_vtable():
    own = MethodEntry("m", func_id=3, arity=0)
    wrapped = WrapperEntry(MethodEntry("n", func_id=4, arity=1), INT)
    cls = ClassRuntime(
        name="C",
        parent=A,
        ancestry=frozenset({"C", "A", "object"}),
        field_names=("x",),
        field_types=(INT,),
        vtable=[own, wrapped],
        method_index={"m": 0, "n": 1},
    )
    obj = Instance(cls, [0])
    assert dispatch(obj, 0) is own
    assert dispatch(obj, 1) is wrapped
    assert wrapped.name == "n" and wrapped.func_id == 4 and wrapped.arity == 1
    assert lookup_method(obj, "n") is wrapped
    assert lookup_method(obj, "missing") is None
    assert cls.field_slot("x") == 0 and cls.field_slot("y") is None


class _Untouchable(dict):
    def _refuse(self, *args, **kwargs):
        raise AssertionError("cast visited an entry")

    __iter__ = __getitem__ = __contains__ = items = keys = values = get = _refuse


@pytest.mark.parametrize("size", [0, 10, 10_000])
def test_casts_never_visit_entries(size, registry):
    tag = registry.intern(TCheckedDict(STR, INT))
    entries = {f"k{i}": i for i in range(size)}
    shallow = dict(entries)
    checked = CheckedDictValue(tag, _Untouchable(entries))
    assert cast(shallow, DICT, registry) is shallow
    assert cast(checked, TCheckedDict(STR, INT), registry) is checked
    assert cast(checked, TOptional(TCheckedDict(STR, INT)), registry) is checked
    with pytest.raises(CastError):
        cast(checked, DICT, registry)


_keys = st.one_of(st.sampled_from(["A", "B", "C"]), st.integers(0, 2), st.none())
_values = st.one_of(st.integers(-3, 3), st.booleans(), st.text(max_size=2), st.none())


@given(ops=st.lists(st.tuples(st.booleans(), _keys, _values), max_size=40))
def test_checked_dict_entries_always_match_the_tag(ops):
    registry = TypeRegistry()
    d = checked_dict_new(STR, INT, {"A": 0}, registry=registry)
    for guarded, k, v in ops:
        if guarded:
            try:
                checked_dict_set_guarded(d, k, v, registry=registry)
            except CastError:
                pass
        elif matches(k, STR, registry) and matches(v, INT, registry):
            dict_set(d, k, v)
    for k, v in d.entries.items():
        assert matches(k, STR, registry) and matches(v, INT, registry)
