"""Fuzz campaign endpoint."""

from dataclasses import asdict

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from gsp.harness.fuzz import fuzz
from gsp.schemas.harness import CounterexampleResponse, FuzzRequest, FuzzResponse

router = APIRouter(prefix="/api/v1/fuzz", tags=["fuzz"])


@router.post("", response_model=FuzzResponse)
async def run_fuzz(request: FuzzRequest) -> FuzzResponse:
    """Run a bounded soundness campaign and report verdict counts."""
    report = await run_in_threadpool(fuzz, request.count, request.seed, request.dyn_bias)
    return FuzzResponse(
        count=report.count,
        seed=report.seed,
        dyn_bias=report.dyn_bias,
        counts=report.counts,
        violations=[CounterexampleResponse(**asdict(v)) for v in report.violations],
        ok=report.ok,
    )
