"""Parser, resolver and unparser tests."""

import pytest
from hypothesis import given, settings, strategies as st

from gsp.core.errors import GspSyntaxError
from gsp.harness.generator import GenConfig, generate_program
from gsp.syntax import parse, unparse
from gsp.syntax.nodes import (
    Assign,
    Break,
    Call,
    ChkDictLit,
    ClassDef,
    ExprStmt,
    FuncDef,
    If,
    IntLit,
    IsNone,
    LocalDef,
    New,
    Not,
    SCheckedDict,
    SDict,
    SDyn,
    SInt,
    SNone,
    SStr,
    SUnion,
    SubscriptSet,
    VarDef,
    While,
)


def _syntax_messages(source: str) -> list:
    with pytest.raises(GspSyntaxError) as info:
        parse(source)
    assert all(d.code == "E-SYNTAX" for d in info.value.diagnostics)
    return [d.message for d in info.value.diagnostics]


def test_function_annotations_default_to_dyn():
    program = parse("def f(x):\n    return x\n")
    (f,) = program.stmts
    assert isinstance(f, FuncDef)
    assert f.param.ann == SDyn()
    assert f.ret == SDyn()


def test_type_constructors():
    program = parse(
        "a: Optional[str] = None\n"
        "b: Dict = {}\n"
        "c: Dict[str, int] = {}\n"
        "d: CheckedDict[str, int] = CheckedDict[str, int]({})\n"
    )
    a, b, c, d = program.stmts
    assert a.ann == SUnion((SNone(), SStr()))
    assert b.ann == SDict(SDyn(), SDyn())
    assert c.ann == SDict(SStr(), SInt())
    assert d.ann == SCheckedDict(SStr(), SInt())
    assert isinstance(d.init, ChkDictLit)


def test_call_of_class_name_is_new():
    program = parse("class A:\n    x: int = 0\n\nA(1)\nA()\n")
    _, first, second = program.stmts
    assert first.expr == New("A", IntLit(1))
    assert isinstance(second.expr, New) and second.expr.arg is None


def test_unannotated_assignment_defines_then_assigns():
    program = parse("def f():\n    x = 1\n    x = 2\n    return x\n")
    body = program.stmts[0].body
    assert isinstance(body[0], LocalDef) and body[0].ann is None
    assert isinstance(body[1], Assign)


def test_top_level_reassignment_parses_as_assign():
    program = parse("x: int = 1\nx = 2\n")
    assert isinstance(program.stmts[1], Assign)


def test_subscript_assignment_is_an_expression_statement():
    program = parse("d: Dict = {}\nd[\"A\"] = 1\n")
    stmt = program.stmts[1]
    assert isinstance(stmt, ExprStmt) and isinstance(stmt.expr, SubscriptSet)


def test_is_not_none_is_negated_test():
    program = parse("def f(x):\n    return x is not None\n")
    ret = program.stmts[0].body[0]
    assert isinstance(ret.value, Not) and isinstance(ret.value.operand, IsNone)


def test_elif_is_nested_if():
    source = (
        "def f(x):\n"
        "    if x == 1:\n"
        "        return 1\n"
        "    elif x == 2:\n"
        "        return 2\n"
        "    else:\n"
        "        return 3\n"
    )
    nested = (
        "def f(x):\n"
        "    if x == 1:\n"
        "        return 1\n"
        "    else:\n"
        "        if x == 2:\n"
        "            return 2\n"
        "        else:\n"
        "            return 3\n"
    )
    program = parse(source)
    assert program == parse(nested)
    stmt = program.stmts[0].body[0]
    assert isinstance(stmt, If) and isinstance(stmt.orelse[0], If)


def test_while_and_break():
    program = parse("def f():\n    while True:\n        break\n    return None\n")
    loop = program.stmts[0].body[0]
    assert isinstance(loop, While) and loop.body == (Break(),)


def test_class_flags_and_parent():
    program = parse("class A:\n    x: int = 0\n\ndyn class B(A):\n    y: dyn = 1\n")
    a, b = program.stmts
    assert isinstance(a, ClassDef) and a.parent == "object" and not a.dynamic
    assert b.parent == "A" and b.dynamic


def test_spans_survive_parsing():
    program = parse("x: int = 1\n\ny: int = 2\n")
    assert program.stmts[1].span.line == 3


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("def f(:\n    return 1\n", "unexpected"),
        ("x: int = 1\nx: int = 2\n", "duplicate top-level name 'x'"),
        ("y: int = f()\ndef f() -> int:\n    return 1\n", "used before its declaration"),
        ("x: int = 99999999999999999999\n", "64-bit"),
        ("def f():\n    break\n", "break outside loop"),
        ("def f():\n    x: int = 1\n    x: int = 2\n", "already defined"),
        ("x = 1\n", "needs a type annotation"),
        ("def f(a, b):\n    return a\n", "at most one parameter"),
        ("class A:\n    def m(self):\n        return 1\n", "exactly one field"),
        ("def f():\n    return y\n    y = 1\n", "referenced before definition"),
        ('x: str = "\\t"\n', "escape"),
        ("def f():\n        x = 1\n    return x\n", "unindent does not match"),
    ],
)
def test_malformed_programs_are_syntax_errors(source, fragment):
    messages = _syntax_messages(source)
    assert any(fragment in m for m in messages), messages


def test_unparse_round_trips_corpus(corpus_dir):
    for path in sorted(corpus_dir.glob("*.gsp")):
        source = path.read_text(encoding="utf-8")
        try:
            program = parse(source)
        except GspSyntaxError:
            continue
        assert parse(unparse(program)) == program, path.name


def test_unparse_is_canonical():
    program = parse("def f(x: Optional[int]):\n    return x\n")
    text = unparse(program)
    assert text.startswith("def f(x: Union[None, int]) -> dyn:")
    assert unparse(parse(text)) == text


def test_recursive_function_may_name_itself():
    program = parse("def f(x):\n    return f(x)\n")
    assert isinstance(program.stmts[0].body[0].value, Call)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32), dyn_bias=st.sampled_from([0.0, 0.3, 1.0]))
def test_generated_programs_round_trip(seed, dyn_bias):
    program = generate_program(GenConfig(seed=seed, dyn_bias=dyn_bias))
    assert parse(unparse(program)) == program


def test_var_def_keeps_annotation():
    (v,) = parse("x: int = 1\n").stmts
    assert isinstance(v, VarDef) and v.ann == SInt()
