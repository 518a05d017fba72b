"""Cast-annotated intermediate program produced by the checker.

Every expression node records its static evaluation type. Materialization
sites are explicit ``ECast`` nodes, and every call edge carries a
``CallKind``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Tuple, Union

from gsp.types.evaluation import BOOL, DICT, NONE, EvalType
from gsp.types.env import TypeEnv


class CallKind(str, Enum):
    STATIC_STRICT = "StaticStrict"
    STATIC_LENIENT = "StaticLenient"
    DYNAMIC = "Dynamic"


# Expressions


@dataclass(frozen=True)
class EConst:
    value: Any
    type: EvalType


@dataclass(frozen=True)
class ELocal:
    slot: int
    name: str
    type: EvalType


@dataclass(frozen=True)
class EGlobal:
    name: str
    type: EvalType


@dataclass(frozen=True)
class ECast:
    target: EvalType
    inner: "ElabExpr"

    @property
    def type(self) -> EvalType:
        return self.target


@dataclass(frozen=True)
class ECall:
    kind: CallKind
    fname: str
    arg: Optional["ElabExpr"]
    type: EvalType


@dataclass(frozen=True)
class EDict:
    entries: Tuple[Tuple["ElabExpr", "ElabExpr"], ...]
    type: EvalType = DICT


@dataclass(frozen=True)
class EChkDict:
    key_type: EvalType
    val_type: EvalType
    entries: Tuple[Tuple["ElabExpr", "ElabExpr"], ...]
    type: EvalType


@dataclass(frozen=True)
class EGet:
    target: "ElabExpr"
    key: "ElabExpr"
    type: EvalType


@dataclass(frozen=True)
class ESet:
    """Subscript write; ``guarded`` when the receiver's static type is Dyn."""

    target: "ElabExpr"
    key: "ElabExpr"
    value: "ElabExpr"
    guarded: bool
    type: EvalType = NONE


@dataclass(frozen=True)
class ENew:
    class_name: str
    arg: Optional["ElabExpr"]
    type: EvalType


@dataclass(frozen=True)
class EFieldGet:
    target: "ElabExpr"
    class_name: str
    slot: int
    name: str
    type: EvalType


@dataclass(frozen=True)
class EFieldSet:
    target: "ElabExpr"
    class_name: str
    slot: int
    name: str
    value: "ElabExpr"
    type: EvalType = NONE


@dataclass(frozen=True)
class EAttrGet:
    target: "ElabExpr"
    name: str
    type: EvalType


@dataclass(frozen=True)
class EAttrSet:
    target: "ElabExpr"
    name: str
    value: "ElabExpr"
    type: EvalType = NONE


@dataclass(frozen=True)
class EMethodCall:
    """A method call; Dynamic calls look the method up by name at run time."""

    kind: CallKind
    target: "ElabExpr"
    class_name: Optional[str]
    slot: int
    name: str
    arg: Optional["ElabExpr"]
    type: EvalType


@dataclass(frozen=True)
class EIsNone:
    operand: "ElabExpr"
    type: EvalType = BOOL


@dataclass(frozen=True)
class EEq:
    left: "ElabExpr"
    right: "ElabExpr"
    type: EvalType = BOOL


@dataclass(frozen=True)
class ENot:
    operand: "ElabExpr"
    type: EvalType = BOOL


ElabExpr = Union[
    EConst, ELocal, EGlobal, ECast, ECall, EDict, EChkDict, EGet, ESet, ENew,
    EFieldGet, EFieldSet, EAttrGet, EAttrSet, EMethodCall, EIsNone, EEq, ENot,
]


# Statements


@dataclass(frozen=True)
class SStore:
    """Local definition or assignment; ``declared`` is the slot's declared type."""

    slot: int
    name: str
    declared: EvalType
    value: ElabExpr


@dataclass(frozen=True)
class SIf:
    cond: ElabExpr
    then: Tuple["ElabStmt", ...]
    orelse: Tuple["ElabStmt", ...]


@dataclass(frozen=True)
class SWhile:
    cond: ElabExpr
    body: Tuple["ElabStmt", ...]


@dataclass(frozen=True)
class SBreak:
    pass


@dataclass(frozen=True)
class SReturn:
    value: ElabExpr


@dataclass(frozen=True)
class SExpr:
    expr: ElabExpr


ElabStmt = Union[SStore, SIf, SWhile, SBreak, SReturn, SExpr]


# Declarations


@dataclass(frozen=True)
class ElabFunction:
    """A function, method or synthesized initializer.

    ``check_args`` lists the (slot, type) pairs of precise-typed parameters;
    the compiler turns it into the CHECK_ARGS prologue.
    """

    name: str
    arity: int
    nlocals: int
    param_types: Tuple[EvalType, ...]
    ret: EvalType
    is_typed: bool
    body: Tuple[ElabStmt, ...]
    check_args: Tuple[Tuple[int, EvalType], ...] = ()
    receiver: Optional[str] = None


@dataclass(frozen=True)
class MethodSlot:
    """A vtable slot: the implementing class and the wrapper result type, if any."""

    name: str
    impl_class: str
    wrapper_result: Optional[EvalType] = None

    @property
    def wrapper_needed(self) -> bool:
        return self.wrapper_result is not None


@dataclass(frozen=True)
class FieldSlot:
    name: str
    type: EvalType
    declaring_class: str


@dataclass(frozen=True)
class ElabClass:
    name: str
    parent: Optional[str]
    dynamic: bool
    fields: Tuple[FieldSlot, ...]
    own_field_slot: int
    vtable: Tuple[MethodSlot, ...]
    methods: Tuple[ElabFunction, ...]
    init0: ElabFunction
    init1: ElabFunction


@dataclass(frozen=True)
class ElabVarDef:
    name: str
    type: EvalType
    value: ElabExpr


@dataclass(frozen=True)
class ElabExprStmt:
    expr: ElabExpr


@dataclass(frozen=True)
class ElabProgram:
    env: TypeEnv = field(compare=False)
    functions: Tuple[ElabFunction, ...]
    classes: Tuple[ElabClass, ...]
    module: Tuple[Union[ElabVarDef, ElabExprStmt], ...]
