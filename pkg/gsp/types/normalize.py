"""Surface-type normalization and the surface-to-evaluation retraction."""

from typing import List, Tuple

from gsp.syntax.nodes import (
    SBool,
    SCheckedDict,
    SClass,
    SDict,
    SDyn,
    SInt,
    SNone,
    SOptional,
    SStr,
    SUnion,
    SurfaceType,
)
from gsp.syntax.unparse import render_surface
from gsp.types.evaluation import (
    BOOL,
    DICT,
    DYN,
    INT,
    NONE,
    STR,
    EvalType,
    TBool,
    TCheckedDict,
    TClass,
    TDict,
    TDyn,
    TInt,
    TNone,
    TOptional,
    TStr,
)

_RANK = {SNone: 0, SBool: 1, SInt: 2, SStr: 3, SClass: 4, SDict: 5, SCheckedDict: 6}


def _order_key(t: SurfaceType) -> Tuple[int, str]:
    return (_RANK[type(t)], render_surface(t))


def _flatten(members, out: List[SurfaceType]) -> None:
    for m in members:
        if isinstance(m, SUnion):
            _flatten(m.members, out)
        elif isinstance(m, SOptional):
            _flatten((SNone(), m.inner), out)
        else:
            out.append(m)


def normalize(s: SurfaceType) -> SurfaceType:
    """Flatten, deduplicate and order unions; collapse Dyn and Optional forms."""
    if isinstance(s, SDict):
        return SDict(normalize(s.key), normalize(s.value))
    if isinstance(s, SCheckedDict):
        return SCheckedDict(normalize(s.key), normalize(s.value))
    if isinstance(s, SOptional):
        return normalize(SUnion((SNone(), s.inner)))
    if not isinstance(s, SUnion):
        return s

    flat: List[SurfaceType] = []
    _flatten((normalize(m) for m in s.members), flat)
    if any(isinstance(m, SDyn) for m in flat):
        return SDyn()
    unique = sorted(set(flat), key=_order_key)
    if len(unique) == 1:
        return unique[0]
    if len(unique) == 2 and isinstance(unique[0], SNone):
        return SOptional(unique[1])
    return SUnion(tuple(unique))


def retract(s: SurfaceType) -> EvalType:
    """Map a surface type to the evaluation type enforced at run time."""
    s = normalize(s)
    if isinstance(s, SDyn):
        return DYN
    if isinstance(s, SNone):
        return NONE
    if isinstance(s, SInt):
        return INT
    if isinstance(s, SBool):
        return BOOL
    if isinstance(s, SStr):
        return STR
    if isinstance(s, SClass):
        return TClass(s.name)
    if isinstance(s, SDict):
        return DICT
    if isinstance(s, SCheckedDict):
        return TCheckedDict(retract(s.key), retract(s.value))
    if isinstance(s, SOptional):
        return TOptional(retract(s.inner))
    return DYN


def embed(t: EvalType) -> SurfaceType:
    """Inject an evaluation type back into the surface grammar."""
    if isinstance(t, TDyn):
        return SDyn()
    if isinstance(t, TNone):
        return SNone()
    if isinstance(t, TInt):
        return SInt()
    if isinstance(t, TBool):
        return SBool()
    if isinstance(t, TStr):
        return SStr()
    if isinstance(t, TClass):
        return SClass(t.name)
    if isinstance(t, TDict):
        return SDict(SDyn(), SDyn())
    if isinstance(t, TCheckedDict):
        return SCheckedDict(embed(t.key), embed(t.value))
    if isinstance(t, TOptional):
        return SOptional(embed(t.inner))
    raise TypeError(f"not an evaluation type: {t!r}")
