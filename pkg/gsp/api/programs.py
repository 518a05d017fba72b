"""Program checking, execution and disassembly endpoints."""

from typing import List

from fastapi import APIRouter, HTTPException
from starlette.concurrency import run_in_threadpool

from gsp.checker import check_program
from gsp.core.errors import CheckError, GspRuntimeError, GspSyntaxError
from gsp.core.pipeline import build, run_source
from gsp.schemas.diagnostic import Diagnostic
from gsp.schemas.execution import (
    BytecodeRequest,
    BytecodeResponse,
    CheckResponse,
    ProgramRequest,
    RunRequest,
    RunResponse,
    RuntimeErrorInfo,
)
from gsp.syntax import parse
from gsp.vm import ExecutionResult, dump_module

router = APIRouter(prefix="/api/v1/programs", tags=["programs"])


def _diagnostics(source: str) -> List[Diagnostic]:
    try:
        program = parse(source)
    except GspSyntaxError as exc:
        return exc.diagnostics
    return check_program(program).diagnostics


def _rejected(diagnostics: List[Diagnostic]) -> HTTPException:
    return HTTPException(
        status_code=422,
        detail={"diagnostics": [d.model_dump() for d in diagnostics]},
    )


def to_response(result: ExecutionResult) -> RunResponse:
    error = None
    if isinstance(result.error, GspRuntimeError):
        error = RuntimeErrorInfo(kind=result.error.kind.value, message=result.error.message)
    elif result.error is not None:
        error = RuntimeErrorInfo(kind=type(result.error).__name__, message=str(result.error))
    return RunResponse(
        outcome=result.outcome,
        output=result.output,
        error=error,
        metrics=result.metrics.as_dict(),
        steps=result.steps,
    )


@router.post("/check", response_model=CheckResponse)
async def check_source(request: ProgramRequest) -> CheckResponse:
    """Report static errors; an empty list means the program is well-typed."""
    diagnostics = await run_in_threadpool(_diagnostics, request.source)
    return CheckResponse(ok=not diagnostics, diagnostics=diagnostics)


@router.post("/run", response_model=RunResponse)
async def run_program(request: RunRequest) -> RunResponse:
    """
    Check, compile and execute a program.

    - Static errors are answered with 422 and the diagnostics
    - Run-time errors and budget exhaustion are part of a normal response
    """
    try:
        result = await run_in_threadpool(
            run_source, request.source, request.optimized, request.step_budget
        )
    except (GspSyntaxError, CheckError) as exc:
        raise _rejected(exc.diagnostics)
    return to_response(result)


@router.post("/bytecode", response_model=BytecodeResponse)
async def disassemble(request: BytecodeRequest) -> BytecodeResponse:
    """Return the ``dump-bc`` listing of a well-typed program."""
    try:
        module = await run_in_threadpool(build, request.source, request.optimized)
    except (GspSyntaxError, CheckError) as exc:
        raise _rejected(exc.diagnostics)
    return BytecodeResponse(listing=dump_module(module), optimized=request.optimized)
