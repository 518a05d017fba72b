"""Render syntax trees back to canonical source text."""

from typing import List, Optional

from gsp.syntax.nodes import (
    Assign,
    BoolLit,
    Break,
    Call,
    ChkDictLit,
    ClassDef,
    DictLit,
    Eq,
    Expr,
    ExprStmt,
    FieldGet,
    FieldSet,
    FuncDef,
    If,
    IntLit,
    IsNone,
    LocalDef,
    MethodCall,
    MethodDef,
    New,
    NoneLit,
    Not,
    Param,
    Pass,
    Program,
    Return,
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
    StrLit,
    Subscript,
    SubscriptSet,
    SurfaceType,
    Var,
    VarDef,
    While,
)

INDENT = "    "

# Binding strength: not < comparison < postfix.
_NOT, _CMP, _POSTFIX = 1, 2, 3


def render_surface(t: SurfaceType) -> str:
    if isinstance(t, SDyn):
        return "dyn"
    if isinstance(t, SNone):
        return "None"
    if isinstance(t, SInt):
        return "int"
    if isinstance(t, SBool):
        return "bool"
    if isinstance(t, SStr):
        return "str"
    if isinstance(t, SClass):
        return t.name
    if isinstance(t, SDict):
        return f"Dict[{render_surface(t.key)}, {render_surface(t.value)}]"
    if isinstance(t, SCheckedDict):
        return f"CheckedDict[{render_surface(t.key)}, {render_surface(t.value)}]"
    if isinstance(t, SUnion):
        return "Union[" + ", ".join(render_surface(m) for m in t.members) + "]"
    if isinstance(t, SOptional):
        return f"Optional[{render_surface(t.inner)}]"
    raise TypeError(f"not a surface type: {t!r}")


def quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def _precedence(e: Expr) -> int:
    if isinstance(e, Not):
        return _NOT
    if isinstance(e, (Eq, IsNone)):
        return _CMP
    return _POSTFIX


def _wrap(e: Expr, minimum: int) -> str:
    text = unparse_expr(e)
    return f"({text})" if _precedence(e) < minimum else text


def _arg(arg: Optional[Expr]) -> str:
    return unparse_expr(arg) if arg is not None else ""


def _entries(entries) -> str:
    return "{" + ", ".join(f"{unparse_expr(k)}: {unparse_expr(v)}" for k, v in entries) + "}"


def unparse_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, NoneLit):
        return "None"
    if isinstance(e, BoolLit):
        return "True" if e.value else "False"
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, StrLit):
        return quote(e.value)
    if isinstance(e, Call):
        return f"{e.fname}({_arg(e.arg)})"
    if isinstance(e, New):
        return f"{e.class_name}({_arg(e.arg)})"
    if isinstance(e, DictLit):
        return _entries(e.entries)
    if isinstance(e, ChkDictLit):
        return (
            f"CheckedDict[{render_surface(e.key_ann)}, {render_surface(e.val_ann)}]"
            f"({_entries(e.entries)})"
        )
    if isinstance(e, Subscript):
        return f"{_wrap(e.target, _POSTFIX)}[{unparse_expr(e.key)}]"
    if isinstance(e, SubscriptSet):
        return f"{_wrap(e.target, _POSTFIX)}[{unparse_expr(e.key)}] = {unparse_expr(e.value)}"
    if isinstance(e, FieldGet):
        return f"{_wrap(e.target, _POSTFIX)}.{e.name}"
    if isinstance(e, FieldSet):
        return f"{_wrap(e.target, _POSTFIX)}.{e.name} = {unparse_expr(e.value)}"
    if isinstance(e, MethodCall):
        return f"{_wrap(e.target, _POSTFIX)}.{e.name}({_arg(e.arg)})"
    if isinstance(e, IsNone):
        return f"{_wrap(e.operand, _POSTFIX)} is None"
    if isinstance(e, Eq):
        return f"{_wrap(e.left, _POSTFIX)} == {_wrap(e.right, _POSTFIX)}"
    if isinstance(e, Not):
        return f"not {_wrap(e.operand, _NOT)}"
    raise TypeError(f"not an expression: {e!r}")


def _block(body, depth: int, out: List[str]) -> None:
    if not body:
        out.append(INDENT * depth + "pass")
        return
    for stmt in body:
        _stmt(stmt, depth, out)


def _stmt(stmt, depth: int, out: List[str]) -> None:
    pad = INDENT * depth
    if isinstance(stmt, LocalDef):
        if stmt.ann is None:
            out.append(f"{pad}{stmt.name} = {unparse_expr(stmt.init)}")
        else:
            out.append(f"{pad}{stmt.name}: {render_surface(stmt.ann)} = {unparse_expr(stmt.init)}")
    elif isinstance(stmt, Assign):
        out.append(f"{pad}{stmt.name} = {unparse_expr(stmt.value)}")
    elif isinstance(stmt, If):
        out.append(f"{pad}if {unparse_expr(stmt.cond)}:")
        _block(stmt.then, depth + 1, out)
        if stmt.orelse:
            out.append(f"{pad}else:")
            _block(stmt.orelse, depth + 1, out)
    elif isinstance(stmt, While):
        out.append(f"{pad}while {unparse_expr(stmt.cond)}:")
        _block(stmt.body, depth + 1, out)
    elif isinstance(stmt, Break):
        out.append(f"{pad}break")
    elif isinstance(stmt, Pass):
        out.append(f"{pad}pass")
    elif isinstance(stmt, Return):
        out.append(f"{pad}return" if stmt.value is None else f"{pad}return {unparse_expr(stmt.value)}")
    elif isinstance(stmt, ExprStmt):
        out.append(f"{pad}{unparse_expr(stmt.expr)}")
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def _params(receiver: bool, param: Optional[Param]) -> str:
    parts = ["self"] if receiver else []
    if param is not None:
        parts.append(f"{param.name}: {render_surface(param.ann)}")
    return ", ".join(parts)


def _def(d, depth: int, out: List[str]) -> None:
    receiver = isinstance(d, MethodDef)
    pad = INDENT * depth
    out.append(f"{pad}def {d.name}({_params(receiver, d.param)}) -> {render_surface(d.ret)}:")
    _block(d.body, depth + 1, out)


def unparse(program: Program) -> str:
    """Canonical source text; ``parse(unparse(p)) == p``."""
    out: List[str] = []
    for stmt in program.stmts:
        if isinstance(stmt, VarDef):
            out.append(f"{stmt.name}: {render_surface(stmt.ann)} = {unparse_expr(stmt.init)}")
        elif isinstance(stmt, FuncDef):
            _def(stmt, 0, out)
        elif isinstance(stmt, ClassDef):
            prefix = "dyn class" if stmt.dynamic else "class"
            out.append(f"{prefix} {stmt.name}({stmt.parent}):")
            f = stmt.field
            out.append(f"{INDENT}{f.name}: {render_surface(f.ann)} = {unparse_expr(f.default)}")
            for method in stmt.methods:
                _def(method, 1, out)
        elif isinstance(stmt, ExprStmt):
            out.append(unparse_expr(stmt.expr))
        elif isinstance(stmt, Assign):
            out.append(f"{stmt.name} = {unparse_expr(stmt.value)}")
        else:
            raise TypeError(f"not a top-level statement: {stmt!r}")
    return "\n".join(out) + ("\n" if out else "")
