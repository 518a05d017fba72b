"""Source-to-result plumbing shared by the CLI, the API and the harness."""

import logging
from typing import Optional

from gsp.checker import ElabProgram, check_program
from gsp.config import get_settings
from gsp.core.errors import CheckError
from gsp.syntax import parse
from gsp.syntax.nodes import Program
from gsp.vm import BytecodeModule, ExecutionResult, compile_program, execute, optimize

logger = logging.getLogger(__name__)


def check(program: Program) -> ElabProgram:
    """Check a parsed program; raises ``CheckError`` on static errors."""
    result = check_program(program)
    if not result.ok:
        raise CheckError(result.diagnostics)
    return result.program


def parse_and_check(source: str) -> ElabProgram:
    """Parse and check; raises ``GspSyntaxError`` or ``CheckError``."""
    return check(parse(source))


def build_program(program: Program, optimized: bool = True) -> BytecodeModule:
    module = compile_program(check(program))
    return optimize(module) if optimized else module


def build(source: str, optimized: bool = True) -> BytecodeModule:
    """Source text to a runnable module."""
    return build_program(parse(source), optimized)


def run_module(
    module: BytecodeModule,
    step_budget: Optional[int] = None,
    debug: Optional[bool] = None,
) -> ExecutionResult:
    settings = get_settings()
    return execute(
        module,
        step_budget=step_budget if step_budget is not None else settings.step_budget,
        max_call_depth=settings.max_call_depth,
        debug=settings.debug if debug is None else debug,
    )


def run_source(
    source: str,
    optimized: bool = True,
    step_budget: Optional[int] = None,
    debug: Optional[bool] = None,
) -> ExecutionResult:
    """Parse, check, compile and execute; static errors are raised, run-time ones reported."""
    module = build(source, optimized)
    result = run_module(module, step_budget, debug)
    logger.debug("run finished: %s after %d steps", result.outcome, result.steps)
    return result
