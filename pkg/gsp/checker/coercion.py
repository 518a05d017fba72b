"""The single-step coercion applied at every elimination position."""

from enum import Enum

from gsp.types.env import TypeEnv
from gsp.types.evaluation import EvalType
from gsp.types.relations import is_consistent_subtype, materializes


class Coercion(str, Enum):
    ACCEPT = "Accept"
    INSERT_CAST = "InsertCast"
    REJECT = "Reject"


def coerce(env: TypeEnv, actual: EvalType, expected: EvalType) -> Coercion:
    """Accept, insert one cast, or reject; coercions never chain."""
    if is_consistent_subtype(env, actual, expected):
        return Coercion.ACCEPT
    if materializes(actual, expected):
        return Coercion.INSERT_CAST
    return Coercion.REJECT
