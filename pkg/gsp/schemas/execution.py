"""Program request/response schemas."""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from gsp.schemas.diagnostic import Diagnostic

MAX_SOURCE_LENGTH = 200_000


class ProgramRequest(BaseModel):
    """Source text submitted for checking."""

    source: str = Field(..., min_length=1, max_length=MAX_SOURCE_LENGTH)


class RunRequest(ProgramRequest):
    """Source text submitted for execution."""

    optimized: bool = True
    step_budget: Optional[int] = Field(None, gt=0, le=10_000_000)


class BytecodeRequest(ProgramRequest):
    optimized: bool = True


class CheckResponse(BaseModel):
    ok: bool
    diagnostics: List[Diagnostic] = []


class RuntimeErrorInfo(BaseModel):
    kind: str
    message: str


class RunResponse(BaseModel):
    """Outcome of one execution."""

    outcome: Literal["ok", "runtime", "timeout", "internal"]
    output: List[str]
    error: Optional[RuntimeErrorInfo] = None
    metrics: Dict[str, int]
    steps: int


class BytecodeResponse(BaseModel):
    listing: str
    optimized: bool
