"""Whole-program checking and elaboration."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from gsp.checker.context import Context
from gsp.checker.elab import (
    EFieldSet,
    ELocal,
    ElabClass,
    ElabExpr,
    ElabExprStmt,
    ElabFunction,
    ElabProgram,
    ElabVarDef,
    FieldSlot,
    SExpr,
    SReturn,
)
from gsp.checker.environment import build_env
from gsp.checker.expressions import apply_coercion, elaborate_expr
from gsp.checker.overrides import check_override
from gsp.checker.statements import check_function, check_method
from gsp.schemas.diagnostic import E_IMMUTABLE_MODULE_VAR, Diagnostic
from gsp.syntax.nodes import Assign, ClassDef, ExprStmt, FuncDef, Program, VarDef
from gsp.types.env import TypeEnv
from gsp.types.evaluation import TClass

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    program: Optional[ElabProgram]
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def _field_default(env: TypeEnv, c: ClassDef, diagnostics: List[Diagnostic]) -> ElabExpr:
    """Elaborate a class's field default with only globals in scope."""
    sig = env.classes[c.name]
    ctx = Context(env=env, diagnostics=diagnostics, typed=not sig.dynamic, owner=c.name, dynamic_class=sig.dynamic)
    value = elaborate_expr(ctx, c.field.default)
    _, slot = env.lookup_field(c.name, c.field.name)
    return apply_coercion(ctx, value, slot.type, c.field.span, f"default of field '{c.field.name}'")


def _initializer(
    env: TypeEnv, class_name: str, fields: Tuple[FieldSlot, ...], defaults: Dict[str, ElabExpr], with_arg: bool
) -> ElabFunction:
    """``<init0>``/``<init1>``: fill every slot, then return the receiver."""
    receiver = ELocal(0, "self", TClass(class_name))
    own = env.classes[class_name].field_name
    body = []
    for slot, f in enumerate(fields):
        if with_arg and f.name == own:
            value: ElabExpr = ELocal(1, "value", f.type)
        else:
            source = next(c for c in env.ancestors(class_name) if env.classes[c].field_name == f.name)
            value = defaults[source]
        body.append(SExpr(EFieldSet(receiver, class_name, slot, f.name, value)))
    body.append(SReturn(receiver))
    suffix = "<init1>" if with_arg else "<init0>"
    return ElabFunction(
        name=f"{class_name}.{suffix}",
        arity=1 if with_arg else 0,
        nlocals=2 if with_arg else 1,
        param_types=(env.lookup_field(class_name, own)[1].type,) if with_arg else (),
        ret=TClass(class_name),
        is_typed=False,
        body=tuple(body),
        receiver=class_name,
    )


def check_program(program: Program) -> CheckResult:
    """Type-check ``program`` and elaborate it with casts, call kinds and vtables."""
    env, diagnostics = build_env(program)

    classes = []
    seen = set()
    for stmt in program.stmts:
        if isinstance(stmt, ClassDef) and stmt.name not in seen and stmt.name in env.classes:
            seen.add(stmt.name)
            classes.append(stmt)

    defaults: Dict[str, ElabExpr] = {}
    for c in classes:
        defaults[c.name] = _field_default(env, c, diagnostics)

    elab_classes = []
    for c in classes:
        override_diags, table = check_override(env, c)
        diagnostics.extend(override_diags)
        sig = env.classes[c.name]
        methods = []
        for m in c.methods:
            declared = sig.methods.get(m.name)
            if declared is None or declared.declaring_class != c.name or any(x.name == f"{c.name}.{m.name}" for x in methods):
                continue
            ctx = Context(env=env, diagnostics=diagnostics)
            methods.append(check_method(ctx, c.name, m))
        fields = tuple(FieldSlot(f.name, f.type, f.declaring_class) for f in env.fields(c.name))
        own_slot, _ = env.lookup_field(c.name, sig.field_name)
        elab_classes.append(
            ElabClass(
                name=c.name,
                parent=sig.parent,
                dynamic=sig.dynamic,
                fields=fields,
                own_field_slot=own_slot,
                vtable=table,
                methods=tuple(methods),
                init0=_initializer(env, c.name, fields, defaults, with_arg=False),
                init1=_initializer(env, c.name, fields, defaults, with_arg=True),
            )
        )

    functions = []
    module = []
    for stmt in program.stmts:
        if isinstance(stmt, FuncDef):
            if env.funcs.get(stmt.name) is None or any(f.name == stmt.name for f in functions):
                continue
            functions.append(check_function(Context(env=env, diagnostics=diagnostics), stmt))
        elif isinstance(stmt, VarDef):
            ctx = Context(env=env, diagnostics=diagnostics)
            value = elaborate_expr(ctx, stmt.init)
            declared = env.var_types.get(stmt.name)
            if declared is None:
                continue
            value = apply_coercion(ctx, value, declared, stmt.span, f"module variable '{stmt.name}'")
            module.append(ElabVarDef(stmt.name, declared, value))
        elif isinstance(stmt, ExprStmt):
            ctx = Context(env=env, diagnostics=diagnostics)
            module.append(ElabExprStmt(elaborate_expr(ctx, stmt.expr)))
        elif isinstance(stmt, Assign):
            diagnostics.append(
                Diagnostic(
                    code=E_IMMUTABLE_MODULE_VAR,
                    message=f"module-level '{stmt.name}' cannot be reassigned",
                    line=stmt.span.line,
                    col=stmt.span.col,
                )
            )

    if diagnostics:
        logger.info("check failed with %d diagnostic(s)", len(diagnostics))
        return CheckResult(None, diagnostics)
    elab = ElabProgram(env=env, functions=tuple(functions), classes=tuple(elab_classes), module=tuple(module))
    return CheckResult(elab, [])
