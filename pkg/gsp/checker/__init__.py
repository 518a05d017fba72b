"""Static checking: environments, cast insertion, narrowing and overrides."""

from gsp.checker.audit import audit_casts
from gsp.checker.coercion import Coercion, coerce
from gsp.checker.elab import CallKind, ElabProgram
from gsp.checker.environment import build_env
from gsp.checker.expressions import type_expr
from gsp.checker.overrides import check_override
from gsp.checker.program import CheckResult, check_program
from gsp.checker.statements import check_body, narrow

__all__ = [
    "CallKind",
    "CheckResult",
    "Coercion",
    "ElabProgram",
    "audit_casts",
    "build_env",
    "check_body",
    "check_override",
    "check_program",
    "coerce",
    "narrow",
    "type_expr",
]
