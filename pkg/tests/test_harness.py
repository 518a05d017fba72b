"""Program generation, soundness verdicts, the regression corpus and fuzz campaigns."""

import pytest
from hypothesis import given, settings, strategies as st

from gsp.harness import (
    AllowedError,
    CorpusError,
    GenConfig,
    SoundnessViolation,
    StaticReject,
    Timeout,
    WellTypedValue,
    erase,
    fuzz,
    generate_program,
    program_seed,
    run_corpus,
    soundness_verdict,
)
from gsp.harness.corpus import Expectation, parse_expectation, satisfies
from gsp.harness.verdicts import uses_checked_dicts
from gsp.syntax import parse, unparse
from gsp.checker import check_program
from gsp.runtime import WrapperEntry
from gsp.syntax.nodes import ClassDef, FuncDef, If, Pass, Return, SDyn, VarDef
from gsp.types.evaluation import is_dyn
from gsp.vm import compile_program

BUDGET = 20_000


def verdict(source: str):
    return soundness_verdict(parse(source), BUDGET)


def _annotations(program):
    for s in program.stmts:
        if isinstance(s, VarDef):
            yield s.ann
        elif isinstance(s, FuncDef):
            yield s.ret
            if s.param is not None:
                yield s.param.ann
        elif isinstance(s, ClassDef):
            yield s.field.ann
            for m in s.methods:
                yield m.ret
                if m.param is not None:
                    yield m.param.ann


# Generation


def test_generation_is_deterministic():
    cfg = GenConfig(seed=42, dyn_bias=0.3)
    assert unparse(generate_program(cfg)) == unparse(generate_program(GenConfig(seed=42, dyn_bias=0.3)))
    assert unparse(generate_program(cfg)) != unparse(generate_program(GenConfig(seed=43, dyn_bias=0.3)))


def test_full_dyn_bias_generates_only_dyn_annotations():
    for seed in range(20):
        program = generate_program(GenConfig(seed=seed, dyn_bias=1.0))
        assert all(ann == SDyn() for ann in _annotations(program)), seed


def test_generator_produces_untyped_overrides_of_typed_methods():
    found = False
    for seed in range(200):
        program = generate_program(GenConfig(seed=seed, dyn_bias=0.5))
        classes = {s.name: s for s in program.stmts if isinstance(s, ClassDef)}
        for c in classes.values():
            parent = classes.get(c.parent)
            if c.dynamic and parent is not None and not parent.dynamic:
                if {m.name for m in c.methods} & {m.name for m in parent.methods}:
                    found = True
    assert found


def _blocks(node):
    if isinstance(node, tuple):
        for item in node:
            yield from _blocks(item)
    elif isinstance(node, ClassDef):
        yield from _blocks(node.methods)
    elif hasattr(node, "body") and isinstance(node.body, tuple):
        yield node.body
        yield from _blocks(node.body)
    elif isinstance(node, If):
        yield node.then
        yield node.orelse
        yield from _blocks(node.then)
        yield from _blocks(node.orelse)


def test_generator_covers_pass_elif_and_early_returns():
    seen = set()
    for seed in range(300):
        for block in _blocks(generate_program(GenConfig(seed=seed)).stmts):
            for i, s in enumerate(block):
                if isinstance(s, Pass):
                    seen.add("pass")
                elif isinstance(s, Return):
                    if s.value is None:
                        seen.add("bare return")
                    if i < len(block) - 1:
                        seen.add("early return")
                elif isinstance(s, If) and len(s.orelse) == 1 and isinstance(s.orelse[0], If):
                    seen.add("elif")
    assert seen == {"pass", "bare return", "early return", "elif"}


def test_compiled_vtables_wrap_exactly_the_flagged_slots():
    wrapped = 0
    for seed in range(150):
        result = check_program(generate_program(GenConfig(seed=seed, dyn_bias=0.5)))
        if not result.ok:
            continue
        module = compile_program(result.program)
        env = result.program.env
        for ec in result.program.classes:
            entries = module.classes[ec.name].vtable
            assert len(entries) == len(ec.vtable)
            for slot, entry in zip(ec.vtable, entries):
                typed = env.ancestor_method(slot.impl_class, slot.name, typed_only=True)
                needed = env.classes[slot.impl_class].dynamic and typed is not None and not is_dyn(typed.ret)
                assert slot.wrapper_needed is needed, (seed, ec.name, slot.name)
                assert isinstance(entry, WrapperEntry) is needed, (seed, ec.name, slot.name)
                if needed:
                    assert entry.result_type == typed.ret
                    wrapped += 1
    assert wrapped > 0


def test_config_is_validated():
    with pytest.raises(ValueError):
        GenConfig(seed=0, dyn_bias=1.5)
    with pytest.raises(ValueError):
        GenConfig(seed=0, max_top_stmts=0)


def test_program_seeds_do_not_collide_across_campaigns():
    assert program_seed(0, 5) != program_seed(1, 5)
    assert len({program_seed(s, i) for s in range(3) for i in range(100)}) == 300


# Verdicts


def test_value_verdict_carries_static_type():
    assert verdict('def f(x: Dict[str, int]) -> int:\n    return x["A"]\n\nf({"A": 1})\n') == WellTypedValue("1", "int")


def test_program_without_output_yields_none():
    assert verdict("x: int = 1\n") == WellTypedValue("None", "None")


@pytest.mark.parametrize("name", ["__init0__", "__init1__"])
def test_methods_named_like_initializers_stay_sound(name):
    source = (
        "class A:\n"
        "    x: int = 0\n"
        f"    def {name}(self) -> int:\n"
        "        return 7\n"
        "\n"
        "def f(a: A) -> int:\n"
        f"    return a.{name}()\n"
        "\n"
        "f(A())\n"
    )
    assert verdict(source) == WellTypedValue("7", "int")


def test_static_rejection_lists_codes():
    assert verdict('x: int = "a"\n') == StaticReject(("E-TYPE-MISMATCH",))


def test_allowed_errors_are_reported_by_kind():
    v = verdict('def f(x: Dict[str, int]) -> int:\n    return x["A"]\n\nf({"A": "one"})\n')
    assert v == AllowedError("CastError", "int expected, got str")


def test_non_terminating_program_times_out():
    v = soundness_verdict(parse("def spin() -> int:\n    while True:\n        pass\n\nspin()\n"), 200)
    assert isinstance(v, Timeout)


def test_erasure_keeps_structure_but_drops_types():
    program = parse("class A:\n    x: int = 0\n\ndef f(a: A) -> int:\n    y: int = a.x\n    return y\n")
    erased = erase(program)
    cls, f = erased.stmts
    assert cls.dynamic and cls.field.ann == SDyn()
    assert f.param.ann == SDyn() and f.ret == SDyn() and f.body[0].ann == SDyn()
    assert not uses_checked_dicts(program)
    assert uses_checked_dicts(parse("d: dyn = CheckedDict[str, int]({})\n"))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**40), dyn_bias=st.sampled_from([0.0, 0.3, 0.7, 1.0]))
def test_generated_programs_are_never_unsound(seed, dyn_bias):
    v = soundness_verdict(generate_program(GenConfig(seed=seed, dyn_bias=dyn_bias)), BUDGET)
    assert not isinstance(v, SoundnessViolation), v.detail


# Corpus


def test_expectation_headers():
    assert parse_expectation("# note\n# expect: value 1\nf()\n", "x") == Expectation("value", "1")
    with pytest.raises(CorpusError):
        parse_expectation("f()\n# expect: value 1\n", "x")
    runtime = Expectation("runtime", "CastError int expected")
    assert satisfies(AllowedError("CastError", "int expected, got str"), runtime)
    assert not satisfies(AllowedError("KeyError", "int expected"), runtime)
    assert satisfies(StaticReject(("E-ARITY", "E-TYPE-MISMATCH")), Expectation("static", "E-ARITY"))


def test_bundled_corpus_passes(corpus_dir):
    report = run_corpus(corpus_dir)
    assert report.ok, report.render()
    assert report.passed == len(list(corpus_dir.glob("*.gsp")))


def test_empty_corpus(tmp_path):
    report = run_corpus(tmp_path)
    assert report.ok
    assert report.summary() == "0 tests, 0 passed, 0 failed"


def test_failing_case_is_reported(write_source):
    path = write_source("# expect: value 2\n1\n", "wrong.gsp")
    report = run_corpus(path.parent)
    assert not report.ok
    assert "FAIL wrong.gsp: expected value 2, got value 1" in report.render()


def test_missing_directory_is_an_error(tmp_path):
    with pytest.raises(CorpusError):
        run_corpus(tmp_path / "nope")


# Fuzzing


def test_small_campaign_finds_no_violations():
    report = fuzz(60, seed=7, dyn_bias=0.3, workers=2)
    assert report.ok, [v.source for v in report.violations]
    assert sum(report.counts.values()) == 60
    assert report.summary().startswith("60 programs (seed=7, dyn_bias=0.3)")


def test_campaigns_are_reproducible():
    first = fuzz(25, seed=3, workers=1)
    second = fuzz(25, seed=3, workers=4)
    assert first.counts == second.counts
