"""Soundness fuzz campaigns over generated programs."""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from gsp.config import get_settings
from gsp.harness.generator import GenConfig, generate_program
from gsp.harness.verdicts import SoundnessViolation, Verdict, soundness_verdict
from gsp.syntax import unparse

logger = logging.getLogger(__name__)

SEED_STRIDE = 1_000_003
VERDICT_KINDS = ("value", "runtime", "static", "timeout", "violation")


def program_seed(seed: int, index: int) -> int:
    return seed * SEED_STRIDE + index


@dataclass(frozen=True)
class Counterexample:
    index: int
    seed: int
    detail: str
    source: str


@dataclass
class FuzzReport:
    seed: int
    count: int
    dyn_bias: float
    counts: Dict[str, int] = field(default_factory=lambda: {k: 0 for k in VERDICT_KINDS})
    violations: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        parts = ", ".join(f"{k}={self.counts[k]}" for k in VERDICT_KINDS)
        return f"{self.count} programs (seed={self.seed}, dyn_bias={self.dyn_bias}): {parts}"


def _one(cfg: GenConfig, step_budget: int) -> Verdict:
    return soundness_verdict(generate_program(cfg), step_budget)


def fuzz(
    count: int,
    seed: int = 0,
    dyn_bias: float = 0.3,
    *,
    workers: Optional[int] = None,
    step_budget: Optional[int] = None,
) -> FuzzReport:
    """Generate and judge ``count`` programs; results are merged in seed order."""
    settings = get_settings()
    budget = step_budget or settings.fuzz_step_budget
    configs = [
        GenConfig(
            seed=program_seed(seed, index),
            max_top_stmts=settings.fuzz_max_top_stmts,
            max_expr_depth=settings.fuzz_max_expr_depth,
            max_classes=settings.fuzz_max_classes,
            dyn_bias=dyn_bias,
        )
        for index in range(count)
    ]
    with ThreadPoolExecutor(max_workers=workers or settings.fuzz_workers) as pool:
        verdicts = list(pool.map(lambda cfg: _one(cfg, budget), configs))

    report = FuzzReport(seed=seed, count=count, dyn_bias=dyn_bias)
    report.counts.update(Counter(v.kind for v in verdicts))
    for index, (cfg, verdict) in enumerate(zip(configs, verdicts)):
        if isinstance(verdict, SoundnessViolation):
            source = unparse(generate_program(cfg))
            logger.error("soundness violation at index %d (seed %d): %s", index, cfg.seed, verdict.detail)
            report.violations.append(Counterexample(index, cfg.seed, verdict.detail, source))
    logger.info(report.summary())
    return report
