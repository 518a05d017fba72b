"""Execution counters."""

from dataclasses import asdict, dataclass
from typing import Dict


@dataclass
class Metrics:
    casts_executed: int = 0
    check_args_executed: int = 0
    arg_casts_executed: int = 0
    element_casts: int = 0
    direct_calls: int = 0
    vtable_calls: int = 0
    dynamic_calls: int = 0
    wrapper_result_checks: int = 0

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)
