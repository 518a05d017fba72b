"""Golden-expectation regression corpus.

Each ``*.gsp`` file starts with a header comment naming what it must do::

    # expect: value 1
    # expect: static E-IMPLICIT-NONE-RETURN
    # expect: runtime CastError CheckedDict[str, dyn]

A ``value`` expectation is compared with the last printed top-level value. A
``runtime`` expectation may add text that must occur in the error message.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from gsp.config import get_settings
from gsp.core.errors import GspSyntaxError
from gsp.harness.verdicts import AllowedError, StaticReject, Verdict, WellTypedValue, soundness_verdict
from gsp.syntax import parse

logger = logging.getLogger(__name__)

EXPECT_RE = re.compile(r"^#\s*expect:\s*(value|static|runtime)\s*(.*?)\s*$")


class CorpusError(Exception):
    """A corpus file is missing or malformed."""


@dataclass(frozen=True)
class Expectation:
    kind: str
    detail: str


@dataclass(frozen=True)
class CaseResult:
    path: Path
    expected: Expectation
    actual: str
    passed: bool


@dataclass
class CorpusReport:
    cases: List[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.passed)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"{len(self.cases)} tests, {self.passed} passed, {self.failed} failed"

    def render(self) -> str:
        lines = []
        for c in self.cases:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status} {c.path.name}"
            if not c.passed:
                line += f": expected {c.expected.kind} {c.expected.detail}, got {c.actual}"
            lines.append(line)
        lines.append(self.summary())
        return "\n".join(lines)


def parse_expectation(source: str, path: Path) -> Expectation:
    for line in source.splitlines():
        if not line.strip():
            continue
        m = EXPECT_RE.match(line.strip())
        if m:
            return Expectation(m.group(1), m.group(2))
        if not line.lstrip().startswith("#"):
            break
    raise CorpusError(f"{path}: missing '# expect:' header")


def describe(verdict: Verdict) -> str:
    if isinstance(verdict, WellTypedValue):
        return f"value {verdict.rendered}"
    if isinstance(verdict, StaticReject):
        return "static " + " ".join(verdict.codes)
    if isinstance(verdict, AllowedError):
        return f"runtime {verdict.error_kind}: {verdict.message}"
    return verdict.kind + (f" ({verdict.detail})" if hasattr(verdict, "detail") else "")


def satisfies(verdict: Verdict, expected: Expectation) -> bool:
    if expected.kind == "value":
        return isinstance(verdict, WellTypedValue) and verdict.rendered == expected.detail
    if expected.kind == "static":
        return isinstance(verdict, StaticReject) and expected.detail in verdict.codes
    if not isinstance(verdict, AllowedError):
        return False
    kind, _, text = expected.detail.partition(" ")
    return verdict.error_kind == kind and text in verdict.message


def run_case(path: Path, step_budget: Optional[int] = None) -> CaseResult:
    source = path.read_text(encoding="utf-8")
    expected = parse_expectation(source, path)
    try:
        verdict: Verdict = soundness_verdict(parse(source), step_budget or get_settings().step_budget)
    except GspSyntaxError as exc:
        verdict = StaticReject(tuple(d.code for d in exc.diagnostics))
    actual = describe(verdict)
    return CaseResult(path, expected, actual, satisfies(verdict, expected))


def run_corpus(directory: Path, step_budget: Optional[int] = None) -> CorpusReport:
    """Run every ``*.gsp`` file under ``directory`` in name order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"{directory}: not a directory")
    report = CorpusReport()
    for path in sorted(directory.glob("*.gsp")):
        result = run_case(path, step_budget)
        if not result.passed:
            logger.warning("corpus case %s failed: %s", path.name, result.actual)
        report.cases.append(result)
    return report
