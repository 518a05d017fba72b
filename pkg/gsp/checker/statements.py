"""Statement checking, flow-sensitive narrowing and reachability."""

from typing import Dict, List, Mapping, Optional, Set, Tuple

from gsp.checker.coercion import Coercion, coerce
from gsp.checker.context import Context, FlowState
from gsp.checker.elab import (
    ElabFunction,
    ElabStmt,
    EConst,
    SBreak,
    SExpr,
    SIf,
    SReturn,
    SStore,
    SWhile,
)
from gsp.checker.environment import is_dyn_annotation
from gsp.checker.expressions import apply_coercion, elaborate_expr
from gsp.schemas.diagnostic import (
    E_DYNCLASS_PRECISE_ANN,
    E_IMMUTABLE_MODULE_VAR,
    E_IMPLICIT_NONE_RETURN,
    E_TYPE_MISMATCH,
    E_UNKNOWN_MEMBER,
)
from gsp.syntax.nodes import (
    Assign,
    Block,
    BoolLit,
    Break,
    Expr,
    ExprStmt,
    FuncDef,
    If,
    IsNone,
    LocalDef,
    MethodDef,
    Not,
    Pass,
    Return,
    Var,
    While,
)
from gsp.types.env import TypeEnv
from gsp.types.evaluation import BOOL, DYN, NONE, EvalType, TClass, TOptional

# ``None`` as a flow state marks code that cannot fall through.
Outcome = Optional[FlowState]


def _narrow_state(ctx: Context, cond: Expr, state: FlowState) -> Tuple[FlowState, FlowState]:
    if isinstance(cond, Not):
        on_true, on_false = _narrow_state(ctx, cond.operand, state)
        return on_false, on_true
    if isinstance(cond, IsNone) and isinstance(cond.operand, Var):
        info = ctx.lookup(cond.operand.name)
        if info is not None:
            current = state.get(info.slot, info.declared)
            if isinstance(current, TOptional):
                return {**state, info.slot: NONE}, {**state, info.slot: current.inner}
    return dict(state), dict(state)


def narrow(
    env: TypeEnv, locals: Mapping[str, EvalType], cond: Expr
) -> Tuple[Dict[str, EvalType], Dict[str, EvalType]]:
    """Local types on the true and false branches of ``cond``."""
    ctx = Context(env=env, diagnostics=[])
    for name, t in locals.items():
        ctx.define(name, t)
    on_true, on_false = _narrow_state(ctx, cond, ctx.state)
    names = {ctx.lookup(name).slot: name for name in locals}
    return (
        {names[slot]: t for slot, t in on_true.items()},
        {names[slot]: t for slot, t in on_false.items()},
    )


def join(ctx: Context, *outcomes: Outcome) -> Outcome:
    """Merge fall-through states; disagreeing locals revert to their declared type."""
    live = [o for o in outcomes if o is not None]
    if not live:
        return None
    merged: FlowState = {}
    for slot, declared in ctx.visible_slots():
        types = {o.get(slot, declared) for o in live}
        merged[slot] = types.pop() if len(types) == 1 else declared
    return merged


def _assigned(body: Block) -> Set[str]:
    names: Set[str] = set()
    for stmt in body:
        if isinstance(stmt, Assign):
            names.add(stmt.name)
        elif isinstance(stmt, If):
            names |= _assigned(stmt.then) | _assigned(stmt.orelse)
        elif isinstance(stmt, While):
            names |= _assigned(stmt.body)
    return names


def _has_break(body: Block) -> bool:
    for stmt in body:
        if isinstance(stmt, Break):
            return True
        if isinstance(stmt, If) and (_has_break(stmt.then) or _has_break(stmt.orelse)):
            return True
    return False


def _condition(ctx: Context, cond: Expr):
    return apply_coercion(ctx, elaborate_expr(ctx, cond), BOOL, cond.span, "condition")


def _local_def(ctx: Context, stmt: LocalDef) -> ElabStmt:
    value = elaborate_expr(ctx, stmt.init)
    if stmt.ann is not None:
        if ctx.dynamic_class and not is_dyn_annotation(stmt.ann):
            ctx.error(E_DYNCLASS_PRECISE_ANN, f"local '{stmt.name}' in a dyn class must be dyn", stmt.span)
        declared = ctx.resolve(stmt.ann, stmt.span)
        if not ctx.typed:
            declared = DYN
        value = apply_coercion(ctx, value, declared, stmt.span, f"local '{stmt.name}'")
    else:
        declared = value.type
    info = ctx.define(stmt.name, declared)
    return SStore(info.slot, info.name, declared, value)


def _assign(ctx: Context, stmt: Assign) -> Optional[ElabStmt]:
    value = elaborate_expr(ctx, stmt.value)
    info = ctx.lookup(stmt.name)
    if info is None:
        env = ctx.env
        if stmt.name in env.var_types or stmt.name in env.funcs or stmt.name in env.classes:
            ctx.error(E_IMMUTABLE_MODULE_VAR, f"module-level '{stmt.name}' cannot be reassigned", stmt.span)
        else:
            ctx.error(E_UNKNOWN_MEMBER, f"unknown name '{stmt.name}'", stmt.span)
        return SExpr(value)
    value = apply_coercion(ctx, value, info.declared, stmt.span, f"local '{stmt.name}'")
    ctx.state[info.slot] = info.declared
    return SStore(info.slot, info.name, info.declared, value)


def _return(ctx: Context, stmt: Return) -> ElabStmt:
    if stmt.value is None:
        if coerce(ctx.env, NONE, ctx.ret) is Coercion.REJECT:
            ctx.error(E_TYPE_MISMATCH, f"bare return in a function returning {ctx.ret}", stmt.span)
        return SReturn(EConst(None, NONE))
    value = elaborate_expr(ctx, stmt.value)
    return SReturn(apply_coercion(ctx, value, ctx.ret, stmt.span, "return value"))


def check_block(ctx: Context, body: Block) -> Tuple[Tuple[ElabStmt, ...], bool]:
    """Check ``body`` in a fresh scope; returns the statements and whether it falls through.

    The flow state in ``ctx`` is left at the join of every fall-through path.
    Statements after one that cannot fall through are still checked, against
    the state that reached that statement.
    """
    out: List[ElabStmt] = []
    falls = True
    ctx.push()
    try:
        for stmt in body:
            before = dict(ctx.state)
            elab, reaches_end = _statement(ctx, stmt)
            out.append(elab)
            if not reaches_end:
                falls = False
                ctx.state = before
    finally:
        ctx.pop()
    return tuple(out), falls


def _statement(ctx: Context, stmt) -> Tuple[ElabStmt, bool]:
    if isinstance(stmt, LocalDef):
        return _local_def(ctx, stmt), True
    if isinstance(stmt, Assign):
        return _assign(ctx, stmt), True
    if isinstance(stmt, ExprStmt):
        return SExpr(elaborate_expr(ctx, stmt.expr)), True
    if isinstance(stmt, Pass):
        return SExpr(EConst(None, NONE)), True
    if isinstance(stmt, Return):
        return _return(ctx, stmt), False
    if isinstance(stmt, Break):
        ctx.breaks[-1].append(dict(ctx.state))
        return SBreak(), False
    if isinstance(stmt, If):
        return _if(ctx, stmt)
    if isinstance(stmt, While):
        return _while(ctx, stmt)
    raise TypeError(f"not a statement: {stmt!r}")


def _if(ctx: Context, stmt: If) -> Tuple[ElabStmt, bool]:
    cond = _condition(ctx, stmt.cond)
    on_true, on_false = _narrow_state(ctx, stmt.cond, ctx.state)
    ctx.state = on_true
    then, then_falls = check_block(ctx, stmt.then)
    then_out = ctx.state if then_falls else None
    ctx.state = on_false
    orelse, else_falls = check_block(ctx, stmt.orelse)
    else_out = ctx.state if else_falls else None
    merged = join(ctx, then_out, else_out)
    if merged is not None:
        ctx.state = merged
    return SIf(cond, then, orelse), merged is not None


def _while(ctx: Context, stmt: While) -> Tuple[ElabStmt, bool]:
    for name in _assigned(stmt.body):
        info = ctx.lookup(name)
        if info is not None:
            ctx.state[info.slot] = info.declared
    entry = dict(ctx.state)
    cond = _condition(ctx, stmt.cond)
    on_true, on_false = _narrow_state(ctx, stmt.cond, entry)
    forever = isinstance(stmt.cond, BoolLit) and stmt.cond.value
    ctx.state = on_true
    ctx.breaks.append([])
    try:
        body, _ = check_block(ctx, stmt.body)
    finally:
        exits = ctx.breaks.pop()
    if forever and not _has_break(stmt.body):
        ctx.state = entry
        return SWhile(cond, body), False
    merged = join(ctx, *([] if forever else [on_false]), *exits)
    ctx.state = merged if merged is not None else entry
    return SWhile(cond, body), True


def _finish(ctx: Context, name: str, body: Block, span) -> Tuple[ElabStmt, ...]:
    stmts, falls = check_block(ctx, body)
    if falls:
        if coerce(ctx.env, NONE, ctx.ret) is Coercion.REJECT:
            ctx.error(
                E_IMPLICIT_NONE_RETURN,
                f"'{name}' may reach the end of its body without returning {ctx.ret}",
                span,
            )
        stmts = stmts + (SReturn(EConst(None, NONE)),)
    return stmts


def check_function(ctx: Context, f: FuncDef) -> ElabFunction:
    sig = ctx.env.funcs[f.name]
    ctx.typed = sig.is_typed
    ctx.ret = sig.ret if sig.is_typed else DYN
    param_types: Tuple[EvalType, ...] = ()
    check_args: Tuple[Tuple[int, EvalType], ...] = ()
    if f.param is not None:
        t = sig.param if sig.is_typed else DYN
        ctx.define(f.param.name, t)
        param_types = (t,)
        if t != DYN:
            check_args = ((0, t),)
    body = _finish(ctx, f.name, f.body, f.span)
    return ElabFunction(
        name=f.name,
        arity=sig.arity,
        nlocals=ctx.nlocals,
        param_types=param_types,
        ret=ctx.ret,
        is_typed=sig.is_typed,
        body=body,
        check_args=check_args,
    )


def check_method(ctx: Context, class_name: str, m: MethodDef) -> ElabFunction:
    sig = ctx.env.classes[class_name].methods[m.name]
    typed = not sig.dynamic
    ctx.typed = typed
    ctx.owner = class_name
    ctx.dynamic_class = sig.dynamic
    ctx.ret = sig.ret if typed else DYN
    ctx.define("self", TClass(class_name) if typed else DYN)
    param_types: Tuple[EvalType, ...] = ()
    check_args: Tuple[Tuple[int, EvalType], ...] = ()
    if m.param is not None:
        t = sig.param if typed else DYN
        ctx.define(m.param.name, t)
        param_types = (t,)
        if t != DYN:
            check_args = ((1, t),)
    body = _finish(ctx, f"{class_name}.{m.name}", m.body, m.span)
    return ElabFunction(
        name=f"{class_name}.{m.name}",
        arity=sig.arity,
        nlocals=ctx.nlocals,
        param_types=param_types,
        ret=ctx.ret,
        is_typed=typed,
        body=body,
        check_args=check_args,
        receiver=class_name,
    )


def check_body(env: TypeEnv, definition, class_name: Optional[str] = None):
    """Check one function or method body; returns its elaboration and diagnostics."""
    ctx = Context(env=env, diagnostics=[])
    if isinstance(definition, MethodDef):
        if class_name is None:
            raise ValueError("a method body needs its class name")
        elab = check_method(ctx, class_name, definition)
    else:
        elab = check_function(ctx, definition)
    return elab, ctx.diagnostics


__all__ = ["check_block", "check_body", "check_function", "check_method", "join", "narrow"]
