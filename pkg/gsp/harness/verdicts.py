"""Classify one program run as a soundness verdict."""

import logging
from dataclasses import dataclass, replace
from typing import Any, List, Optional, Tuple, Union

from gsp.checker import audit_casts, check_program
from gsp.core.errors import GspError, GspRuntimeError
from gsp.runtime.casts import matches
from gsp.syntax.nodes import (
    ChkDictLit,
    ClassDef,
    FuncDef,
    If,
    LocalDef,
    Param,
    Program,
    SDyn,
    VarDef,
    While,
)
from gsp.vm import ExecutionResult, compile_program, execute, optimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WellTypedValue:
    rendered: str
    type: str
    kind = "value"


@dataclass(frozen=True)
class AllowedError:
    error_kind: str
    message: str
    kind = "runtime"


@dataclass(frozen=True)
class StaticReject:
    codes: Tuple[str, ...]
    kind = "static"


@dataclass(frozen=True)
class Timeout:
    kind = "timeout"


@dataclass(frozen=True)
class SoundnessViolation:
    detail: str
    kind = "violation"


Verdict = Union[WellTypedValue, AllowedError, StaticReject, Timeout, SoundnessViolation]


# Erasure


def _erase_block(body) -> tuple:
    out = []
    for s in body:
        if isinstance(s, LocalDef) and s.ann is not None:
            s = replace(s, ann=SDyn())
        elif isinstance(s, If):
            s = replace(s, then=_erase_block(s.then), orelse=_erase_block(s.orelse))
        elif isinstance(s, While):
            s = replace(s, body=_erase_block(s.body))
        out.append(s)
    return tuple(out)


def _erase_param(p: Optional[Param]) -> Optional[Param]:
    return None if p is None else replace(p, ann=SDyn())


def erase(program: Program) -> Program:
    """Replace every annotation with ``dyn`` and make every class dynamic."""
    stmts = []
    for s in program.stmts:
        if isinstance(s, VarDef):
            s = replace(s, ann=SDyn())
        elif isinstance(s, FuncDef):
            s = replace(s, param=_erase_param(s.param), ret=SDyn(), body=_erase_block(s.body))
        elif isinstance(s, ClassDef):
            methods = tuple(
                replace(m, param=_erase_param(m.param), ret=SDyn(), body=_erase_block(m.body)) for m in s.methods
            )
            s = replace(s, dynamic=True, field=replace(s.field, ann=SDyn()), methods=methods)
        stmts.append(s)
    return Program(tuple(stmts))


def _exprs_of(node: Any):
    if isinstance(node, (tuple, list)):
        for item in node:
            yield from _exprs_of(item)
        return
    if not hasattr(node, "__dataclass_fields__"):
        return
    yield node
    for name in node.__dataclass_fields__:
        if name != "span":
            yield from _exprs_of(getattr(node, name))


def uses_checked_dicts(program: Program) -> bool:
    """Checked-dict tags legitimately change behaviour under erasure."""
    return any(isinstance(n, ChkDictLit) for n in _exprs_of(program.stmts))


# Verdicts


def _describe(result: ExecutionResult) -> Tuple[str, List[str], Optional[str]]:
    error = None
    if isinstance(result.error, GspRuntimeError):
        error = result.error.render()
    elif result.error is not None:
        error = f"{type(result.error).__name__}: {result.error}"
    return result.outcome, list(result.output), error


def _run_both(module, step_budget: int) -> Tuple[ExecutionResult, ExecutionResult]:
    plain = execute(module, step_budget=step_budget, debug=True)
    fast = execute(optimize(module), step_budget=step_budget, debug=True)
    return plain, fast


def _erasure_differential(program: Program, original: ExecutionResult, step_budget: int) -> Optional[str]:
    checked = check_program(erase(program))
    if not checked.ok:
        return "erased program rejected: " + ", ".join(d.code for d in checked.diagnostics)
    erased = execute(optimize(compile_program(checked.program)), step_budget=step_budget, debug=True)
    if erased.outcome == "timeout":
        return None
    if erased.outcome != "ok":
        return f"erased program failed with {_describe(erased)[2]}"
    if erased.output != original.output:
        return f"erasure changed output: {original.output!r} vs {erased.output!r}"
    return None


def soundness_verdict(program: Program, step_budget: int) -> Verdict:
    """Check, compile and run ``program`` twice (unoptimized and optimized) and classify it."""
    checked = check_program(program)
    if not checked.ok:
        return StaticReject(tuple(d.code for d in checked.diagnostics))

    findings = audit_casts(checked.program)
    if findings:
        return SoundnessViolation("missing cast: " + findings[0])

    try:
        module = compile_program(checked.program)
        plain, fast = _run_both(module, step_budget)
    except GspError as exc:
        return SoundnessViolation(f"compilation failed: {exc}")

    for label, result in (("unoptimized", plain), ("optimized", fast)):
        if result.outcome == "internal":
            return SoundnessViolation(f"{label} run: {result.error}")
    if plain.outcome == "timeout" or fast.outcome == "timeout":
        return Timeout()
    if _describe(plain) != _describe(fast):
        return SoundnessViolation(f"optimizer changed behaviour: {_describe(plain)!r} vs {_describe(fast)!r}")

    for value, t, rendered in zip(fast.values, fast.output_types, fast.output):
        if not matches(value, t, module.registry):
            return SoundnessViolation(f"printed value {rendered} does not inhabit {t}")

    if fast.outcome == "ok" and not uses_checked_dicts(program):
        problem = _erasure_differential(program, fast, step_budget)
        if problem is not None:
            return SoundnessViolation(problem)

    if isinstance(fast.error, GspRuntimeError):
        return AllowedError(fast.error.kind.value, fast.error.message)
    if not fast.output:
        return WellTypedValue("None", "None")
    return WellTypedValue(fast.output[-1], str(fast.output_types[-1]))


__all__ = [
    "AllowedError",
    "SoundnessViolation",
    "StaticReject",
    "Timeout",
    "Verdict",
    "WellTypedValue",
    "erase",
    "soundness_verdict",
    "uses_checked_dicts",
]
