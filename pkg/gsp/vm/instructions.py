"""Bytecode instructions."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Tuple

from gsp.runtime.values import render_value


class Op(str, Enum):
    LOAD_CONST = "LOAD_CONST"
    LOAD_LOCAL = "LOAD_LOCAL"
    STORE_LOCAL = "STORE_LOCAL"
    LOAD_GLOBAL = "LOAD_GLOBAL"
    STORE_GLOBAL = "STORE_GLOBAL"
    CAST = "CAST"
    CHECK_ARGS = "CHECK_ARGS"
    BUILD_MAP = "BUILD_MAP"
    BUILD_CHECKED_MAP = "BUILD_CHECKED_MAP"
    TP_ALLOC = "TP_ALLOC"
    INVOKE_FUNCTION = "INVOKE_FUNCTION"
    INVOKE_METHOD = "INVOKE_METHOD"
    CALL_DYNAMIC = "CALL_DYNAMIC"
    CALL_METHOD_DYN = "CALL_METHOD_DYN"
    DICT_GET = "DICT_GET"
    DICT_SET = "DICT_SET"
    DICT_SET_GUARDED = "DICT_SET_GUARDED"
    LOAD_FIELD = "LOAD_FIELD"
    STORE_FIELD = "STORE_FIELD"
    LOAD_ATTR_DYN = "LOAD_ATTR_DYN"
    STORE_ATTR_DYN = "STORE_ATTR_DYN"
    IS_NONE = "IS_NONE"
    EQ = "EQ"
    NOT = "NOT"
    JUMP = "JUMP"
    POP_JUMP_IF_FALSE = "POP_JUMP_IF_FALSE"
    POP = "POP"
    RETURN_VALUE = "RETURN_VALUE"
    PRINT_EXPR = "PRINT_EXPR"


class Entry(str, Enum):
    CHECKED = "checked"
    FAST = "fast"


@dataclass(frozen=True)
class Instr:
    """One instruction. Argument layout per opcode:

    - LOAD_CONST (value,)
    - LOAD_LOCAL (slot, name) / STORE_LOCAL (slot, name, type)
    - LOAD_GLOBAL (name,) / STORE_GLOBAL (name, type)
    - CAST (type,) / CHECK_ARGS (((slot, type), ...),)
    - BUILD_MAP (n,) / BUILD_CHECKED_MAP (tag, n)
    - TP_ALLOC (class, argc)
    - INVOKE_FUNCTION (func_id, name, entry, strict)
    - INVOKE_METHOD (class, name, slot, argc, entry, strict)
    - CALL_DYNAMIC (name, argc) / CALL_METHOD_DYN (name, argc)
    - LOAD_FIELD (class, slot, name) / STORE_FIELD (class, slot, name, type)
    - LOAD_ATTR_DYN (name,) / STORE_ATTR_DYN (name,)
    - JUMP (target,) / POP_JUMP_IF_FALSE (target,)
    - PRINT_EXPR (type,)
    """

    op: Op
    args: Tuple[Any, ...] = ()

    def __str__(self) -> str:
        return f"{self.op.value} {render_args(self)}".rstrip()


def render_args(ins: Instr) -> str:
    op, a = ins.op, ins.args
    if op is Op.LOAD_CONST:
        return render_value(a[0])
    if op is Op.LOAD_LOCAL:
        return f"{a[0]} ({a[1]})"
    if op is Op.STORE_LOCAL:
        return f"{a[0]} ({a[1]}: {a[2]})"
    if op is Op.STORE_GLOBAL:
        return f"{a[0]}: {a[1]}"
    if op is Op.CHECK_ARGS:
        return " ".join(f"({slot}, {t})" for slot, t in a[0])
    if op is Op.BUILD_CHECKED_MAP:
        return f"{a[0].type} {a[1]}"
    if op is Op.INVOKE_FUNCTION:
        return f"{a[1]} {a[2].value}"
    if op is Op.INVOKE_METHOD:
        return f"{a[0]}.{a[1]} slot={a[2]} argc={a[3]} {a[4].value}"
    if op is Op.LOAD_FIELD:
        return f"{a[0]}.{a[2]} slot={a[1]}"
    if op is Op.STORE_FIELD:
        return f"{a[0]}.{a[2]} slot={a[1]} {a[3]}"
    return " ".join(str(x) for x in a)
