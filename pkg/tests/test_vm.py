"""Compiler, optimizer, interpreter and bytecode listing tests."""

import pytest

from gsp.core.errors import GspSyntaxError, CheckError
from gsp.core.pipeline import build, run_module, run_source
from gsp.vm import Entry, Op, dump_module, execute, optimize

SHALLOW_READ = 'def f(x: Dict[str, int]) -> int:\n    return x["A"]\n\nf({"A": 1})\n'

CHAIN = (
    "def f(x: int) -> int:\n"
    "    return x\n"
    "\n"
    "def g(y: int) -> int:\n"
    "    a: int = f(y)\n"
    "    b: int = f(a)\n"
    "    c: int = f(b)\n"
    "    return c\n"
    "\n"
    "g(1)\n"
)

WRAPPED = (
    "class A:\n"
    "    x: int = 0\n"
    "    def m(self) -> int:\n"
    "        return 1\n"
    "\n"
    "dyn class B(A):\n"
    "    y: dyn = 0\n"
    "    def m(self):\n"
    "        return {result}\n"
    "\n"
    "def call(a: A) -> int:\n"
    "    return a.m()\n"
    "\n"
    "call(B())\n"
)


def _reads(container: str, n: int) -> str:
    lines = [f"def f(d: {container}) -> int:", "    x: int = 0"]
    lines += ['    x = d["A"]'] * n
    lines += ["    return x", ""]
    init = "{\"A\": 1}" if container.startswith("Dict") else f'{container}({{"A": 1}})'
    lines += [f"d: {container} = {init}", "f(d)", ""]
    return "\n".join(lines)


def _writes(param: str, n: int, init: str) -> str:
    lines = [f"def put({param}):"]
    lines += ['    d["A"] = 1'] * n
    lines += ["    return None", "", f"put({init})", ""]
    return "\n".join(lines)


def _both(source: str, **kwargs):
    return run_source(source, optimized=False, **kwargs), run_source(source, optimized=True, **kwargs)


# Execution


def test_shallow_dict_program_prints_one_after_a_cast():
    result = run_source(SHALLOW_READ)
    assert result.outcome == "ok"
    assert result.output == ["1"]
    assert result.metrics.casts_executed == 1


def test_empty_module_counts_nothing():
    result = run_source("")
    assert result.output == []
    assert all(v == 0 for v in result.metrics.as_dict().values())


def test_checked_dict_exact_match_through_dyn():
    source = (
        "def f(x: CheckedDict[str, dyn]) -> dyn:\n"
        '    return x["A"]\n'
        "\n"
        'd: CheckedDict[str, int] = CheckedDict[str, int]({"A": 1})\n'
        "d2: dyn = d\n"
        "f(d2)\n"
    )
    result = run_source(source)
    assert result.outcome == "runtime"
    assert result.error.render() == "CastError: CheckedDict[str, dyn] expected, got CheckedDict[str, int]"


def test_dynamic_attribute_and_call_errors():
    attr = run_source("class A:\n    x: int = 0\n\ndef g(o):\n    return o.y\n\ng(A())\n")
    assert attr.error.render() == "AttributeError: A object has no field 'y'"
    call = run_source("def f(x):\n    return x\n\ndef h():\n    return f()\n\nh()\n")
    assert call.error.render() == "DynCallError: 'f' takes 1 argument(s), 0 given"


def test_dyn_field_write_is_checked_against_the_slot():
    source = (
        "class A:\n    x: int = 0\n\n"
        "def poke(o):\n    o.x = \"s\"\n    return o.x\n\n"
        "poke(A())\n"
    )
    result = run_source(source)
    assert result.error.render() == "CastError: int expected, got str"


def test_outputs_render_checked_dicts_and_instances():
    source = (
        'd: CheckedDict[str, int] = CheckedDict[str, int]({"A": 2})\n'
        "class A:\n    x: int = 0\n\n"
        "d\n"
        "A(3).x\n"
        "A()\n"
    )
    assert run_source(source).output == ['CheckedDict[str, int]({"A": 2})', "3", "<A object>"]


def test_step_budget_turns_loops_into_timeouts():
    source = "def spin() -> int:\n    while True:\n        pass\n\nspin()\n"
    result = run_source(source, step_budget=100)
    assert result.outcome == "timeout"
    assert result.steps == 101


# Dictionary cost profile


@pytest.mark.parametrize("n", [10, 1000])
def test_shallow_reads_cast_once_each(n):
    result = run_source(_reads("Dict[str, int]", n))
    assert result.output == ["1"]
    assert result.metrics.casts_executed == n
    assert result.metrics.element_casts == 0


@pytest.mark.parametrize("n", [10, 1000])
def test_checked_reads_never_cast(n):
    result = run_source(_reads("CheckedDict[str, int]", n))
    assert result.output == ["1"]
    assert result.metrics.casts_executed == 0
    assert result.metrics.element_casts == 2


@pytest.mark.parametrize("n", [10, 1000])
def test_guarded_writes_cast_key_and_value(n):
    result = run_source(_writes("d", n, "CheckedDict[str, int]({})"))
    assert result.outcome == "ok"
    assert result.metrics.element_casts == 2 * n


@pytest.mark.parametrize("n", [10, 1000])
def test_plain_dict_writes_are_free(n):
    result = run_source(_writes("d: Dict", n, "{}"))
    assert result.outcome == "ok"
    assert result.metrics.element_casts == 0
    assert result.metrics.casts_executed == 0


# Entry points and the optimizer


def test_strict_edges_skip_argument_checks_when_optimized():
    plain, fast = _both(CHAIN)
    assert plain.output == fast.output == ["1"]
    assert plain.metrics.direct_calls == fast.metrics.direct_calls == 4
    assert plain.metrics.arg_casts_executed == 4
    assert fast.metrics.arg_casts_executed == 0
    assert fast.metrics.check_args_executed == 0


def test_dynamic_callers_always_hit_the_prologue():
    source = "def f(x: int) -> int:\n    return x\n\ndef h(z):\n    return f(z)\n\nh(3)\n"
    for result in _both(source):
        assert result.output == ["3"]
        assert result.metrics.dynamic_calls == 1
        assert result.metrics.check_args_executed == 1
        assert result.metrics.arg_casts_executed == 1


def test_dynamic_callers_get_cast_errors_from_the_prologue():
    source = 'def f(x: int) -> int:\n    return x\n\ndef h(z):\n    return f(z)\n\nh("s")\n'
    for result in _both(source):
        assert result.error.render() == "CastError: int expected, got str"


def test_optimize_returns_a_new_module():
    module = build(CHAIN, optimized=False)
    fast = optimize(module)
    assert fast is not module and fast.optimized and not module.optimized
    entries = [ins.args[2] for code in module.functions for ins in code.code if ins.op is Op.INVOKE_FUNCTION]
    assert entries == [Entry.CHECKED] * 4
    entries = [ins.args[2] for code in fast.functions for ins in code.code if ins.op is Op.INVOKE_FUNCTION]
    assert entries == [Entry.FAST] * 4


def test_lenient_edges_stay_on_the_checked_entry():
    module = build("def f(x: int) -> int:\n    return x\n\nd: dyn = 1\nf(d)\n")
    (call,) = [ins for ins in module.function("<module>").code if ins.op is Op.INVOKE_FUNCTION]
    assert call.args[2] is Entry.CHECKED


def test_optimizer_preserves_corpus_behaviour(corpus_dir):
    for path in sorted(corpus_dir.glob("*.gsp")):
        try:
            module = build(path.read_text(encoding="utf-8"), optimized=False)
        except (GspSyntaxError, CheckError):
            continue
        plain = run_module(module, debug=True)
        fast = run_module(optimize(module), debug=True)
        assert plain.outcome != "internal", (path.name, plain.error)
        assert (plain.outcome, plain.output) == (fast.outcome, fast.output), path.name
        assert type(plain.error) is type(fast.error), path.name


# Untyped overrides


def test_untyped_override_result_is_checked_by_the_wrapper():
    result = run_source(WRAPPED.format(result='"s"'))
    assert result.error.render() == "CastError: int expected, got str"
    assert result.metrics.wrapper_result_checks == 1


def test_untyped_override_with_a_good_result_passes():
    result = run_source(WRAPPED.format(result="7"))
    assert result.output == ["7"]
    assert result.metrics.wrapper_result_checks == 1
    assert result.metrics.vtable_calls == 1


# Listings


def test_dump_format():
    source = "def f(x: int) -> int:\n    return x\n\nf(1)\n"
    expected = (
        "def <module> nlocals=0 fast=0\n"
        "0: LOAD_CONST 1\n"
        "1: INVOKE_FUNCTION f {entry}\n"
        "2: PRINT_EXPR int\n"
        "3: LOAD_CONST None\n"
        "4: RETURN_VALUE\n"
        "\n"
        "def f nlocals=1 fast=1\n"
        "0: CHECK_ARGS (0, int)\n"
        "1: LOAD_LOCAL 0 (x)\n"
        "2: RETURN_VALUE\n"
    )
    assert dump_module(build(source, optimized=False)) == expected.format(entry="checked")
    assert dump_module(build(source)) == expected.format(entry="fast")


def test_debug_mode_accepts_well_typed_execution():
    module = build(CHAIN)
    result = execute(module, debug=True)
    assert result.outcome == "ok" and result.output == ["1"]


def test_listings_are_deterministic(corpus_dir):
    for path in sorted(corpus_dir.glob("*.gsp")):
        source = path.read_text(encoding="utf-8")
        try:
            first = dump_module(build(source))
        except (GspSyntaxError, CheckError):
            continue
        assert dump_module(build(source)) == first, path.name


# Method names and dynamic dispatch


def test_method_named_like_an_initializer_is_an_ordinary_method():
    source = (
        "class A:\n"
        "    x: int = 0\n"
        "    def __init0__(self) -> int:\n"
        "        return 7\n"
        "\n"
        "def f(a: A) -> int:\n"
        "    return a.__init0__()\n"
        "\n"
        "f(A())\n"
    )
    module = build(source)
    assert module.func_ids["A.__init0__"] != module.func_ids["A.<init0>"]
    for result in _both(source):
        assert result.output == ["7"]


def test_dynamic_method_calls_bypass_the_override_wrapper():
    source = WRAPPED.replace("def call(a: A) -> int:", "def call(a):").format(result='"s"')
    result = run_source(source)
    assert result.outcome == "ok"
    assert result.output == ['"s"']
    assert result.metrics.dynamic_calls == 1
    assert result.metrics.wrapper_result_checks == 0
