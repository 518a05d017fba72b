"""Override compatibility and vtable layout."""

from typing import List, Tuple

from gsp.checker.elab import MethodSlot
from gsp.schemas.diagnostic import E_IMPRECISE_OVERRIDE, E_INCOMPAT_OVERRIDE, Diagnostic
from gsp.syntax.nodes import ClassDef
from gsp.types.env import MethodSig, TypeEnv
from gsp.types.evaluation import EvalType, is_dyn
from gsp.types.relations import is_subtype


def _variance(env: TypeEnv, narrower: EvalType, wider: EvalType, child: EvalType, parent: EvalType) -> str:
    """``ok`` when narrower <: wider, else which override error applies."""
    if is_subtype(env, narrower, wider):
        return "ok"
    if is_dyn(child) and not is_dyn(parent):
        return E_IMPRECISE_OVERRIDE
    return E_INCOMPAT_OVERRIDE


def override_problem(env: TypeEnv, child: MethodSig, parent: MethodSig) -> Tuple[str, str]:
    """The first incompatibility between ``child`` and the declaration it overrides."""
    where = f"'{child.declaring_class}.{child.name}' overriding '{parent.declaring_class}.{child.name}'"
    if child.arity != parent.arity:
        return E_INCOMPAT_OVERRIDE, f"{where}: takes {child.arity} argument(s), expected {parent.arity}"
    verdict = _variance(env, child.ret, parent.ret, child.ret, parent.ret)
    if verdict != "ok":
        return verdict, f"{where}: returns {child.ret}, expected {parent.ret}"
    if child.param is not None and parent.param is not None:
        verdict = _variance(env, parent.param, child.param, child.param, parent.param)
        if verdict != "ok":
            return verdict, f"{where}: parameter {child.param} does not accept {parent.param}"
    return "ok", ""


def check_override(env: TypeEnv, c: ClassDef) -> Tuple[List[Diagnostic], Tuple[MethodSlot, ...]]:
    """Check each method of ``c`` against the nearest typed declaration it overrides.

    Methods of a dyn class are never rejected; the vtable gives them a result
    wrapper instead.
    """
    sig = env.classes[c.name]
    diagnostics: List[Diagnostic] = []
    for m in () if sig.dynamic else c.methods:
        child = sig.methods.get(m.name)
        if child is None or child.declaring_class != c.name:
            continue
        parent = env.ancestor_method(c.name, m.name, typed_only=True)
        if parent is None:
            continue
        code, message = override_problem(env, child, parent)
        if code != "ok":
            diagnostics.append(Diagnostic(code=code, message=message, line=m.span.line, col=m.span.col))
    return diagnostics, vtable(env, c.name)


def vtable(env: TypeEnv, class_name: str) -> Tuple[MethodSlot, ...]:
    """One slot per visible method name, in inheritance order."""
    slots: List[MethodSlot] = []
    for name in env.method_slots(class_name):
        impl = env.method(class_name, name)
        wrapper = None
        if impl.dynamic:
            typed = env.ancestor_method(impl.declaring_class, name, typed_only=True)
            if typed is not None and not is_dyn(typed.ret):
                wrapper = typed.ret
        slots.append(MethodSlot(name, impl.declaring_class, wrapper))
    return tuple(slots)
