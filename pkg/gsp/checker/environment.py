"""Build the type environment from a program's top-level declarations."""

import logging
from typing import List, Optional, Tuple

from gsp.checker.context import resolve_type
from gsp.schemas.diagnostic import (
    E_DUP_NAME,
    E_DYNCLASS_PRECISE_ANN,
    E_IMPRECISE_OVERRIDE,
    E_INCOMPAT_OVERRIDE,
    E_UNKNOWN_CLASS,
    Diagnostic,
)
from gsp.syntax.nodes import (
    OBJECT_CLASS,
    Block,
    ClassDef,
    FuncDef,
    If,
    LocalDef,
    MethodDef,
    Program,
    SDyn,
    Span,
    SurfaceType,
    VarDef,
    While,
)
from gsp.types.env import ClassSig, FuncSig, MethodSig, TypeEnv
from gsp.types.evaluation import DYN, EvalType, is_dyn
from gsp.types.normalize import normalize

logger = logging.getLogger(__name__)


def _diag(code: str, message: str, span: Span) -> Diagnostic:
    return Diagnostic(code=code, message=message, line=span.line, col=span.col)


def is_dyn_annotation(s: SurfaceType) -> bool:
    return isinstance(normalize(s), SDyn)


def local_annotations(body: Block) -> List[Tuple[SurfaceType, Span]]:
    """Annotations on local definitions anywhere in ``body``."""
    found: List[Tuple[SurfaceType, Span]] = []
    for stmt in body:
        if isinstance(stmt, LocalDef) and stmt.ann is not None:
            found.append((stmt.ann, stmt.span))
        elif isinstance(stmt, If):
            found.extend(local_annotations(stmt.then))
            found.extend(local_annotations(stmt.orelse))
        elif isinstance(stmt, While):
            found.extend(local_annotations(stmt.body))
    return found


def is_typed_function(f: FuncDef) -> bool:
    """A function is typed unless every annotation it carries is ``dyn``."""
    anns = [f.ret] + ([f.param.ann] if f.param is not None else [])
    anns.extend(ann for ann, _ in local_annotations(f.body))
    return not all(is_dyn_annotation(a) for a in anns)


class _Builder:
    def __init__(self) -> None:
        self.env = TypeEnv()
        self.diagnostics: List[Diagnostic] = []

    def error(self, code: str, message: str, span: Span) -> None:
        self.diagnostics.append(_diag(code, message, span))

    def resolve(self, s: SurfaceType, span: Span) -> EvalType:
        return resolve_type(self.env, s, span, self.diagnostics)

    def taken(self, name: str) -> bool:
        env = self.env
        return name in env.classes or name in env.funcs or name in env.var_types

    def declare_class(self, c: ClassDef) -> bool:
        if self.taken(c.name):
            self.error(E_DUP_NAME, f"'{c.name}' is already defined", c.span)
            return False
        self.env.classes[c.name] = ClassSig(c.name, c.parent or OBJECT_CLASS, c.dynamic)
        return True

    def check_parent(self, c: ClassDef) -> None:
        sig = self.env.classes[c.name]
        if sig.parent not in self.env.classes or c.name in self.env.ancestors(sig.parent):
            self.error(E_UNKNOWN_CLASS, f"unknown class '{sig.parent}'", c.span)
            sig.parent = OBJECT_CLASS

    def require_dyn(self, c: ClassDef, s: SurfaceType, span: Span, what: str) -> None:
        if c.dynamic and not is_dyn_annotation(s):
            self.error(E_DYNCLASS_PRECISE_ANN, f"{what} in dyn class '{c.name}' must be dyn", span)

    def declare_field(self, c: ClassDef) -> None:
        sig = self.env.classes[c.name]
        decl = c.field
        self.require_dyn(c, decl.ann, decl.span, f"field '{decl.name}'")
        own = self.resolve(decl.ann, decl.span)
        if sig.parent is not None and self.env.method(sig.parent, decl.name) is not None:
            self.error(E_DUP_NAME, f"field '{decl.name}' clashes with an inherited method", decl.span)
        inherited = self.env.lookup_field(sig.parent, decl.name) if sig.parent else None
        if inherited is not None and not c.dynamic:
            root = inherited[1].type
            if own != root:
                code = E_IMPRECISE_OVERRIDE if is_dyn(own) else E_INCOMPAT_OVERRIDE
                self.error(code, f"field '{decl.name}' redeclared as {own}, inherited as {root}", decl.span)
        sig.field_name = decl.name
        sig.field_type = own

    def declare_methods(self, c: ClassDef) -> None:
        sig = self.env.classes[c.name]
        fresh = 0
        for m in c.methods:
            if m.name in sig.methods:
                self.error(E_DUP_NAME, f"method '{m.name}' is defined twice in '{c.name}'", m.span)
                continue
            if self.env.lookup_field(c.name, m.name) is not None:
                self.error(E_DUP_NAME, f"method '{m.name}' clashes with a field", m.span)
                continue
            if sig.parent is None or self.env.method(sig.parent, m.name) is None:
                fresh += 1
                if fresh > 1:
                    self.error(E_DUP_NAME, f"class '{c.name}' introduces more than one new method", m.span)
                    continue
            sig.methods[m.name] = self.method_sig(c, m)

    def method_sig(self, c: ClassDef, m: MethodDef) -> MethodSig:
        param: Optional[EvalType] = None
        if m.param is not None:
            self.require_dyn(c, m.param.ann, m.param.span, f"parameter '{m.param.name}'")
            param = self.resolve(m.param.ann, m.param.span)
        self.require_dyn(c, m.ret, m.span, f"return type of '{m.name}'")
        for ann, span in local_annotations(m.body):
            self.require_dyn(c, ann, span, "local annotation")
        ret = self.resolve(m.ret, m.span)
        return MethodSig(m.name, param, ret, c.name, c.dynamic)

    def declare_function(self, f: FuncDef) -> None:
        if self.taken(f.name):
            self.error(E_DUP_NAME, f"'{f.name}' is already defined", f.span)
            return
        param = self.resolve(f.param.ann, f.param.span) if f.param is not None else None
        ret = self.resolve(f.ret, f.span)
        self.env.funcs[f.name] = FuncSig(f.name, param, ret, is_typed_function(f))

    def declare_var(self, v: VarDef) -> None:
        if self.taken(v.name):
            self.error(E_DUP_NAME, f"'{v.name}' is already defined", v.span)
            return
        self.env.vars[v.name] = v.ann
        self.env.var_types[v.name] = self.resolve(v.ann, v.span)


def build_env(program: Program) -> Tuple[TypeEnv, List[Diagnostic]]:
    """Collect every top-level signature; classes are visible to all annotations."""
    b = _Builder()
    classes = [s for s in program.stmts if isinstance(s, ClassDef)]
    declared = [c for c in classes if b.declare_class(c)]
    for c in declared:
        b.check_parent(c)
    for c in declared:
        b.declare_field(c)
    for c in declared:
        b.declare_methods(c)
    for stmt in program.stmts:
        if isinstance(stmt, FuncDef):
            b.declare_function(stmt)
        elif isinstance(stmt, VarDef):
            b.declare_var(stmt)
    logger.debug(
        "environment: %d classes, %d functions, %d variables",
        len(b.env.classes) - 1, len(b.env.funcs), len(b.env.var_types),
    )
    return b.env, b.diagnostics
