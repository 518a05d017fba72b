"""Expression synthesis and cast insertion."""

import dataclasses
from typing import Mapping, Optional, Tuple

from gsp.checker.coercion import Coercion, coerce
from gsp.checker.context import Context
from gsp.checker.elab import (
    CallKind,
    EAttrGet,
    EAttrSet,
    ECall,
    ECast,
    EChkDict,
    EConst,
    EDict,
    EEq,
    EFieldGet,
    EFieldSet,
    EGet,
    EGlobal,
    EIsNone,
    ELocal,
    ElabExpr,
    EMethodCall,
    ENew,
    ENot,
    ESet,
)
from gsp.core.errors import CheckError
from gsp.schemas.diagnostic import (
    E_ARITY,
    E_TYPE_MISMATCH,
    E_UNKNOWN_CLASS,
    E_UNKNOWN_MEMBER,
)
from gsp.syntax.nodes import (
    BoolLit,
    Call,
    ChkDictLit,
    DictLit,
    Eq,
    Expr,
    FieldGet,
    FieldSet,
    IntLit,
    IsNone,
    MethodCall,
    New,
    NoneLit,
    Not,
    Span,
    StrLit,
    Subscript,
    SubscriptSet,
    Var,
)
from gsp.types.env import TypeEnv
from gsp.types.evaluation import (
    BOOL,
    DYN,
    INT,
    NONE,
    STR,
    EvalType,
    TCheckedDict,
    TClass,
    TDict,
    TDyn,
    is_dyn,
)
from gsp.types.relations import is_subtype

_PLACEHOLDER = EConst(None, DYN)


def apply_coercion(ctx: Context, e: ElabExpr, expected: EvalType, span: Span, what: str) -> ElabExpr:
    """Coerce ``e`` to ``expected``, wrapping it in a cast when it materializes."""
    decision = coerce(ctx.env, e.type, expected)
    if decision is Coercion.ACCEPT:
        return e
    if decision is Coercion.INSERT_CAST:
        return ECast(expected, e)
    ctx.error(E_TYPE_MISMATCH, f"{what}: expected {expected}, got {e.type}", span)
    return e


def _erase_to_dyn(e: ElabExpr) -> ElabExpr:
    if isinstance(e, ECast) or is_dyn(e.type):
        return e
    return dataclasses.replace(e, type=DYN)


def elaborate_expr(ctx: Context, e: Expr) -> ElabExpr:
    """Synthesize the type of ``e``; untyped bodies see every result as dyn."""
    out = _synthesize(ctx, e)
    return out if ctx.typed else _erase_to_dyn(out)


def _arg(ctx: Context, arg: Optional[Expr]) -> Optional[ElabExpr]:
    return elaborate_expr(ctx, arg) if arg is not None else None


def _strict(ctx: Context, arg: Optional[ElabExpr], param: Optional[EvalType]) -> bool:
    return arg is None or param is None or is_subtype(ctx.env, arg.type, param)


def _var(ctx: Context, e: Var) -> ElabExpr:
    info = ctx.lookup(e.name)
    if info is not None:
        return ELocal(info.slot, info.name, ctx.current_type(info))
    env = ctx.env
    if e.name in env.var_types:
        return EGlobal(e.name, env.var_types[e.name])
    if e.name in env.funcs or e.name in env.classes:
        ctx.error(E_UNKNOWN_MEMBER, f"'{e.name}' is not a variable", e.span)
    else:
        ctx.error(E_UNKNOWN_MEMBER, f"unknown name '{e.name}'", e.span)
    return _PLACEHOLDER


def _call(ctx: Context, e: Call) -> ElabExpr:
    env = ctx.env
    sig = env.funcs.get(e.fname)
    if sig is not None:
        if not ctx.typed:
            return ECall(CallKind.DYNAMIC, e.fname, _arg(ctx, e.arg), DYN)
        given = 0 if e.arg is None else 1
        arg = _arg(ctx, e.arg)
        if given != sig.arity:
            ctx.error(E_ARITY, f"'{e.fname}' takes {sig.arity} argument(s), {given} given", e.span)
            return ECall(CallKind.STATIC_LENIENT, e.fname, arg, sig.ret)
        if arg is not None and sig.param is not None:
            strict = sig.is_typed and _strict(ctx, arg, sig.param)
            arg = apply_coercion(ctx, arg, sig.param, e.span, f"argument of '{e.fname}'")
        else:
            strict = sig.is_typed
        kind = CallKind.STATIC_STRICT if strict else CallKind.STATIC_LENIENT
        return ECall(kind, e.fname, arg, sig.ret)
    if ctx.lookup(e.fname) is not None:
        ctx.error(E_TYPE_MISMATCH, f"local '{e.fname}' is not callable", e.span)
        return _PLACEHOLDER
    if e.fname in env.var_types:
        t = env.var_types[e.fname]
        if isinstance(t, TDyn):
            return ECall(CallKind.DYNAMIC, e.fname, _arg(ctx, e.arg), DYN)
        ctx.error(E_TYPE_MISMATCH, f"'{e.fname}' of type {t} is not callable", e.span)
        return _PLACEHOLDER
    ctx.error(E_UNKNOWN_MEMBER, f"unknown function '{e.fname}'", e.span)
    return _PLACEHOLDER


def _entries(ctx: Context, entries, key_t: EvalType, val_t: EvalType, span: Span):
    out = []
    for k, v in entries:
        ek = apply_coercion(ctx, elaborate_expr(ctx, k), key_t, span, "dictionary key")
        ev = apply_coercion(ctx, elaborate_expr(ctx, v), val_t, span, "dictionary value")
        out.append((ek, ev))
    return tuple(out)


def _subscript(ctx: Context, e: Subscript) -> ElabExpr:
    target = elaborate_expr(ctx, e.target)
    t = target.type
    key = elaborate_expr(ctx, e.key)
    if isinstance(t, (TDict, TDyn)):
        return EGet(target, key, DYN)
    if isinstance(t, TCheckedDict):
        return EGet(target, apply_coercion(ctx, key, t.key, e.span, "key"), t.value)
    ctx.error(E_TYPE_MISMATCH, f"'{t}' is not subscriptable", e.span)
    return _PLACEHOLDER


def _subscript_set(ctx: Context, e: SubscriptSet) -> ElabExpr:
    target = elaborate_expr(ctx, e.target)
    t = target.type
    key = elaborate_expr(ctx, e.key)
    value = elaborate_expr(ctx, e.value)
    if isinstance(t, TDict):
        return ESet(target, key, value, guarded=False)
    if isinstance(t, TDyn):
        return ESet(target, key, value, guarded=True)
    if isinstance(t, TCheckedDict):
        key = apply_coercion(ctx, key, t.key, e.span, "key")
        value = apply_coercion(ctx, value, t.value, e.span, "value")
        return ESet(target, key, value, guarded=False)
    ctx.error(E_TYPE_MISMATCH, f"'{t}' does not support item assignment", e.span)
    return _PLACEHOLDER


def _new(ctx: Context, e: New) -> ElabExpr:
    env = ctx.env
    if not env.has_class(e.class_name):
        ctx.error(E_UNKNOWN_CLASS, f"unknown class '{e.class_name}'", e.span)
        return _PLACEHOLDER
    arg = _arg(ctx, e.arg)
    own = env.classes[e.class_name].field_name
    if arg is not None:
        found = env.lookup_field(e.class_name, own) if own is not None else None
        if found is None:
            ctx.error(E_ARITY, f"'{e.class_name}' takes no constructor argument", e.span)
        else:
            arg = apply_coercion(ctx, arg, found[1].type, e.span, f"argument of '{e.class_name}'")
    return ENew(e.class_name, arg, TClass(e.class_name))


def _no_member(ctx: Context, t: EvalType, kind: str, name: str, span: Span) -> ElabExpr:
    ctx.error(E_UNKNOWN_MEMBER, f"'{t}' has no {kind} '{name}'", span)
    return _PLACEHOLDER


def _field_get(ctx: Context, e: FieldGet) -> ElabExpr:
    target = elaborate_expr(ctx, e.target)
    t = target.type
    if isinstance(t, TDyn):
        return EAttrGet(target, e.name, DYN)
    if isinstance(t, TClass):
        found = ctx.env.lookup_field(t.name, e.name)
        if found is not None:
            slot, sig = found
            return EFieldGet(target, t.name, slot, e.name, sig.type)
    return _no_member(ctx, t, "field", e.name, e.span)


def _field_set(ctx: Context, e: FieldSet) -> ElabExpr:
    target = elaborate_expr(ctx, e.target)
    t = target.type
    value = elaborate_expr(ctx, e.value)
    if isinstance(t, TDyn):
        return EAttrSet(target, e.name, value)
    if isinstance(t, TClass):
        found = ctx.env.lookup_field(t.name, e.name)
        if found is not None:
            slot, sig = found
            value = apply_coercion(ctx, value, sig.type, e.span, f"field '{e.name}'")
            return EFieldSet(target, t.name, slot, e.name, value)
    return _no_member(ctx, t, "field", e.name, e.span)


def _method_call(ctx: Context, e: MethodCall) -> ElabExpr:
    target = elaborate_expr(ctx, e.target)
    t = target.type
    arg = _arg(ctx, e.arg)
    if isinstance(t, TDyn) or not ctx.typed:
        return EMethodCall(CallKind.DYNAMIC, target, None, -1, e.name, arg, DYN)
    if not isinstance(t, TClass):
        return _no_member(ctx, t, "method", e.name, e.span)
    env = ctx.env
    sig = env.method(t.name, e.name)
    if sig is None:
        return _no_member(ctx, t, "method", e.name, e.span)
    slot = env.method_slots(t.name).index(e.name)
    given = 0 if arg is None else 1
    if given != sig.arity:
        ctx.error(E_ARITY, f"'{t.name}.{e.name}' takes {sig.arity} argument(s), {given} given", e.span)
        return EMethodCall(CallKind.STATIC_LENIENT, target, t.name, slot, e.name, arg, sig.ret)
    strict = not sig.dynamic
    if arg is not None and sig.param is not None:
        strict = strict and _strict(ctx, arg, sig.param)
        arg = apply_coercion(ctx, arg, sig.param, e.span, f"argument of '{e.name}'")
    kind = CallKind.STATIC_STRICT if strict else CallKind.STATIC_LENIENT
    return EMethodCall(kind, target, t.name, slot, e.name, arg, sig.ret)


def _synthesize(ctx: Context, e: Expr) -> ElabExpr:
    if isinstance(e, Var):
        return _var(ctx, e)
    if isinstance(e, NoneLit):
        return EConst(None, NONE)
    if isinstance(e, BoolLit):
        return EConst(e.value, BOOL)
    if isinstance(e, IntLit):
        return EConst(e.value, INT)
    if isinstance(e, StrLit):
        return EConst(e.value, STR)
    if isinstance(e, Call):
        return _call(ctx, e)
    if isinstance(e, DictLit):
        return EDict(_entries(ctx, e.entries, DYN, DYN, e.span))
    if isinstance(e, ChkDictLit):
        k = ctx.resolve(e.key_ann, e.span)
        v = ctx.resolve(e.val_ann, e.span)
        return EChkDict(k, v, _entries(ctx, e.entries, k, v, e.span), TCheckedDict(k, v))
    if isinstance(e, Subscript):
        return _subscript(ctx, e)
    if isinstance(e, SubscriptSet):
        return _subscript_set(ctx, e)
    if isinstance(e, New):
        return _new(ctx, e)
    if isinstance(e, FieldGet):
        return _field_get(ctx, e)
    if isinstance(e, FieldSet):
        return _field_set(ctx, e)
    if isinstance(e, MethodCall):
        return _method_call(ctx, e)
    if isinstance(e, IsNone):
        return EIsNone(elaborate_expr(ctx, e.operand))
    if isinstance(e, Eq):
        return EEq(elaborate_expr(ctx, e.left), elaborate_expr(ctx, e.right))
    if isinstance(e, Not):
        operand = elaborate_expr(ctx, e.operand)
        return ENot(apply_coercion(ctx, operand, BOOL, e.span, "operand of 'not'"))
    raise TypeError(f"not an expression: {e!r}")


def type_expr(env: TypeEnv, locals: Mapping[str, EvalType], e: Expr) -> Tuple[EvalType, ElabExpr]:
    """Type one expression in a typed context with the given locals in scope."""
    ctx = Context(env=env, diagnostics=[])
    for name, t in locals.items():
        ctx.define(name, t)
    out = elaborate_expr(ctx, e)
    if ctx.diagnostics:
        raise CheckError(ctx.diagnostics)
    return out.type, out
