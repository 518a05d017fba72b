"""Property tests for normalization, retraction and the subtyping relations."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gsp.checker import Coercion, build_env, coerce
from gsp.core.errors import UnknownClassError
from gsp.syntax import parse
from gsp.syntax.nodes import SBool, SCheckedDict, SClass, SDict, SDyn, SInt, SNone, SOptional, SStr, SUnion
from gsp.types import (
    BOOL,
    DICT,
    DYN,
    INT,
    NONE,
    OBJECT,
    STR,
    TCheckedDict,
    TClass,
    TOptional,
    embed,
    is_consistent_subtype,
    is_subtype,
    materializes,
    normalize,
    retract,
)
from gsp.types.evaluation import is_precise

pytestmark = pytest.mark.property

ENV, _ = build_env(
    parse(
        "class A:\n    a: int = 0\n\n"
        "class B(A):\n    b: int = 0\n\n"
        "class C(A):\n    c: int = 0\n"
    )
)

CLASSES = [TClass("A"), TClass("B"), TClass("C"), OBJECT]
ATOMS = [NONE, INT, BOOL, STR, DICT] + CLASSES
CHECKED = [TCheckedDict(k, v) for k in (STR, DYN) for v in (INT, DYN)]
OPTIONALS = [TOptional(t) for t in [INT, BOOL, STR, DICT, TClass("A"), TClass("B")] + CHECKED[:1]]
UNIVERSE = ATOMS + CHECKED + OPTIONALS + [DYN]

eval_types = st.sampled_from(UNIVERSE)


def _closure():
    """Reflexive-transitive closure of the one-step subtyping rules over the universe."""
    rel = set()
    for t in UNIVERSE:
        rel.add((t, t))
        if t != DYN:
            rel.add((t, OBJECT))
    rel.add((BOOL, INT))
    rel.add((TClass("B"), TClass("A")))
    rel.add((TClass("C"), TClass("A")))
    for o in OPTIONALS:
        rel.add((NONE, o))
        rel.add((o.inner, o))
    changed = True
    while changed:
        changed = False
        for o0, o1 in itertools.product(OPTIONALS, repeat=2):
            if (o0.inner, o1.inner) in rel and (o0, o1) not in rel:
                rel.add((o0, o1))
                changed = True
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


ORACLE = _closure()


surface_atoms = st.sampled_from([SDyn(), SNone(), SInt(), SBool(), SStr(), SClass("A"), SClass("B")])
surface_types = st.recursive(
    surface_atoms,
    lambda inner: st.one_of(
        st.builds(SOptional, inner),
        st.builds(lambda ms: SUnion(tuple(ms)), st.lists(inner, min_size=2, max_size=3)),
        st.builds(SDict, inner, inner),
        st.builds(SCheckedDict, inner, inner),
    ),
    max_leaves=6,
)


# Normalization and retraction


@settings(max_examples=1000, deadline=None)
@given(s=surface_types)
def test_normalize_is_idempotent(s):
    once = normalize(s)
    assert normalize(once) == once


@settings(max_examples=1000, deadline=None)
@given(members=st.lists(surface_types, min_size=2, max_size=4), data=st.data())
def test_union_normalization_ignores_order(members, data):
    shuffled = data.draw(st.permutations(members))
    assert normalize(SUnion(tuple(members))) == normalize(SUnion(tuple(shuffled)))


@settings(max_examples=1000, deadline=None)
@given(t=eval_types)
def test_retract_inverts_embed(t):
    assert retract(embed(t)) == t


def test_retraction_examples():
    assert retract(SDict(SStr(), SInt())) == DICT
    assert retract(SUnion((SInt(), SStr()))) == DYN
    assert retract(SUnion((SNone(), SInt()))) == TOptional(INT)
    assert retract(SUnion((SInt(), SNone(), SInt()))) == TOptional(INT)
    assert retract(SUnion((SNone(), SDyn()))) == DYN
    assert retract(SCheckedDict(SStr(), SUnion((SInt(), SStr())))) == TCheckedDict(STR, DYN)
    assert normalize(SUnion((SStr(), SNone(), SBool()))) == SUnion((SNone(), SBool(), SStr()))


# Subtyping


@settings(max_examples=1000, deadline=None)
@given(t0=eval_types, t1=eval_types)
def test_subtyping_matches_closure_oracle(t0, t1):
    assert is_subtype(ENV, t0, t1) == ((t0, t1) in ORACLE)


def test_subtyping_agrees_with_oracle_exhaustively():
    for t0, t1 in itertools.product(UNIVERSE, repeat=2):
        assert is_subtype(ENV, t0, t1) == ((t0, t1) in ORACLE), (t0, t1)


@settings(max_examples=1000, deadline=None)
@given(t=eval_types)
def test_subtyping_is_reflexive(t):
    assert is_subtype(ENV, t, t)
    assert is_consistent_subtype(ENV, t, t)


@settings(max_examples=1000, deadline=None)
@given(t0=eval_types, t1=eval_types, t2=eval_types)
def test_subtyping_is_transitive(t0, t1, t2):
    if is_subtype(ENV, t0, t1) and is_subtype(ENV, t1, t2):
        assert is_subtype(ENV, t0, t2)


def test_checked_dicts_are_invariant_and_exact():
    assert not is_subtype(ENV, TCheckedDict(STR, INT), TCheckedDict(STR, DYN))
    assert not is_subtype(ENV, TCheckedDict(STR, BOOL), TCheckedDict(STR, INT))
    assert not is_consistent_subtype(ENV, TCheckedDict(STR, INT), TCheckedDict(STR, DYN))


# Consistent subtyping and materialization


@settings(max_examples=1000, deadline=None)
@given(t=eval_types)
def test_everything_flows_into_dyn(t):
    assert is_consistent_subtype(ENV, t, DYN)


@settings(max_examples=1000, deadline=None)
@given(t=eval_types)
def test_dyn_flows_out_only_by_materialization(t):
    assert is_consistent_subtype(ENV, DYN, t) == (t == DYN)
    assert materializes(DYN, t) == is_precise(t)


@settings(max_examples=1000, deadline=None)
@given(t0=eval_types, t1=eval_types)
def test_subtyping_implies_consistent_subtyping(t0, t1):
    if is_subtype(ENV, t0, t1):
        assert is_consistent_subtype(ENV, t0, t1)


@settings(max_examples=1000, deadline=None)
@given(t0=eval_types, t1=eval_types)
def test_coercion_classification(t0, t1):
    outcome = coerce(ENV, t0, t1)
    if is_consistent_subtype(ENV, t0, t1):
        assert outcome is Coercion.ACCEPT
    elif t0 == DYN:
        assert outcome is Coercion.INSERT_CAST
    else:
        assert outcome is Coercion.REJECT
    if is_precise(t0):
        assert not materializes(t0, t1)


def test_coercion_examples():
    assert coerce(ENV, BOOL, INT) is Coercion.ACCEPT
    assert coerce(ENV, INT, BOOL) is Coercion.REJECT
    assert coerce(ENV, DYN, STR) is Coercion.INSERT_CAST
    assert coerce(ENV, TClass("B"), TOptional(TClass("A"))) is Coercion.ACCEPT
    assert coerce(ENV, TClass("B"), TClass("C")) is Coercion.REJECT


def test_unknown_class_raises():
    with pytest.raises(UnknownClassError):
        is_subtype(ENV, TClass("Missing"), OBJECT)
    with pytest.raises(UnknownClassError):
        is_consistent_subtype(ENV, INT, TOptional(TClass("Missing")))
