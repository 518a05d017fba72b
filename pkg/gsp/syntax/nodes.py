"""Abstract syntax for surface programs.

Every node is an immutable dataclass. Source positions are carried in a
``span`` field that does not take part in equality, so two programs compare
equal exactly when they are structurally identical.
"""

from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional, Tuple, Union


class Span(NamedTuple):
    line: int = 0
    col: int = 0


NO_SPAN = Span()


def _span() -> Any:
    return field(default=NO_SPAN, compare=False, repr=False)


# Surface types


@dataclass(frozen=True)
class SDyn:
    pass


@dataclass(frozen=True)
class SNone:
    pass


@dataclass(frozen=True)
class SInt:
    pass


@dataclass(frozen=True)
class SBool:
    pass


@dataclass(frozen=True)
class SStr:
    pass


@dataclass(frozen=True)
class SClass:
    name: str


@dataclass(frozen=True)
class SDict:
    key: "SurfaceType"
    value: "SurfaceType"


@dataclass(frozen=True)
class SCheckedDict:
    key: "SurfaceType"
    value: "SurfaceType"


@dataclass(frozen=True)
class SUnion:
    members: Tuple["SurfaceType", ...]


@dataclass(frozen=True)
class SOptional:
    """Only produced by normalization; the parser desugars ``Optional``."""

    inner: "SurfaceType"


SurfaceType = Union[SDyn, SNone, SInt, SBool, SStr, SClass, SDict, SCheckedDict, SUnion, SOptional]


# Expressions


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class NoneLit:
    span: Span = _span()


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Span = _span()


@dataclass(frozen=True)
class StrLit:
    value: str
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    fname: str
    arg: Optional["Expr"]
    span: Span = _span()


@dataclass(frozen=True)
class DictLit:
    entries: Tuple[Tuple["Expr", "Expr"], ...]
    span: Span = _span()


@dataclass(frozen=True)
class ChkDictLit:
    key_ann: SurfaceType
    val_ann: SurfaceType
    entries: Tuple[Tuple["Expr", "Expr"], ...]
    span: Span = _span()


@dataclass(frozen=True)
class Subscript:
    target: "Expr"
    key: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class SubscriptSet:
    target: "Expr"
    key: "Expr"
    value: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class New:
    class_name: str
    arg: Optional["Expr"]
    span: Span = _span()


@dataclass(frozen=True)
class FieldGet:
    target: "Expr"
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class FieldSet:
    target: "Expr"
    name: str
    value: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class MethodCall:
    target: "Expr"
    name: str
    arg: Optional["Expr"]
    span: Span = _span()


@dataclass(frozen=True)
class IsNone:
    operand: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    span: Span = _span()


Expr = Union[
    Var, NoneLit, IntLit, BoolLit, StrLit, Call, DictLit, ChkDictLit, Subscript,
    SubscriptSet, New, FieldGet, FieldSet, MethodCall, IsNone, Eq, Not,
]


# Body statements


@dataclass(frozen=True)
class LocalDef:
    name: str
    ann: Optional[SurfaceType]
    init: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Block"
    orelse: "Block"
    span: Span = _span()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: "Block"
    span: Span = _span()


@dataclass(frozen=True)
class Break:
    span: Span = _span()


@dataclass(frozen=True)
class Pass:
    span: Span = _span()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    span: Span = _span()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: Span = _span()


BodyStmt = Union[LocalDef, Assign, If, While, Break, Pass, Return, ExprStmt]
Block = Tuple[BodyStmt, ...]


# Top-level statements


@dataclass(frozen=True)
class Param:
    name: str
    ann: SurfaceType
    span: Span = _span()


@dataclass(frozen=True)
class VarDef:
    name: str
    ann: SurfaceType
    init: Expr
    span: Span = _span()


@dataclass(frozen=True)
class FuncDef:
    name: str
    param: Optional[Param]
    ret: SurfaceType
    body: Block
    span: Span = _span()


@dataclass(frozen=True)
class MethodDef:
    """A method; the receiver ``self`` is implicit and never annotated."""

    name: str
    param: Optional[Param]
    ret: SurfaceType
    body: Block
    span: Span = _span()


@dataclass(frozen=True)
class FieldDecl:
    name: str
    ann: SurfaceType
    default: Expr
    span: Span = _span()


@dataclass(frozen=True)
class ClassDef:
    name: str
    parent: str
    dynamic: bool
    field: FieldDecl
    methods: Tuple[MethodDef, ...]
    span: Span = _span()


TopStmt = Union[VarDef, FuncDef, ClassDef, ExprStmt, Assign]


@dataclass(frozen=True)
class Program:
    stmts: Tuple[TopStmt, ...] = ()


OBJECT_CLASS = "object"
