"""Fuzz campaign schemas."""

from typing import Dict, List

from pydantic import BaseModel, Field

MAX_FUZZ_COUNT = 500


class FuzzRequest(BaseModel):
    """A small synchronous fuzz campaign."""

    count: int = Field(50, ge=1, le=MAX_FUZZ_COUNT)
    seed: int = Field(0, ge=0)
    dyn_bias: float = Field(0.3, ge=0.0, le=1.0)


class CounterexampleResponse(BaseModel):
    index: int
    seed: int
    detail: str
    source: str


class FuzzResponse(BaseModel):
    count: int
    seed: int
    dyn_bias: float
    counts: Dict[str, int]
    violations: List[CounterexampleResponse] = []
    ok: bool
