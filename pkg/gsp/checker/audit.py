"""Post-elaboration audit: every dyn value entering a precise position is cast."""

from typing import List, Optional

from gsp.checker.elab import (
    CallKind,
    EAttrGet,
    EAttrSet,
    ECall,
    ECast,
    EChkDict,
    EDict,
    EEq,
    EFieldGet,
    EFieldSet,
    EGet,
    EIsNone,
    ElabExpr,
    ElabFunction,
    ElabProgram,
    ElabVarDef,
    EMethodCall,
    ENew,
    ENot,
    ESet,
    SExpr,
    SIf,
    SReturn,
    SStore,
    SWhile,
)
from gsp.types.evaluation import BOOL, EvalType, TCheckedDict, is_dyn


class _Auditor:
    def __init__(self, program: ElabProgram):
        self.program = program
        self.env = program.env
        self.findings: List[str] = []
        self.where = "<module>"

    def flow(self, expected: Optional[EvalType], e: ElabExpr, what: str) -> None:
        if expected is not None and not is_dyn(expected) and is_dyn(e.type) and not isinstance(e, ECast):
            self.findings.append(f"{self.where}: dyn {what} reaches {expected} without a cast")
        self.expr(e)

    def expr(self, e: Optional[ElabExpr]) -> None:
        if e is None:
            return
        if isinstance(e, ECast):
            self.expr(e.inner)
        elif isinstance(e, ECall):
            sig = self.env.funcs.get(e.fname)
            param = sig.param if sig is not None and sig.is_typed and e.kind is not CallKind.DYNAMIC else None
            if e.arg is not None:
                self.flow(param, e.arg, f"argument of '{e.fname}'")
        elif isinstance(e, EDict):
            for k, v in e.entries:
                self.expr(k)
                self.expr(v)
        elif isinstance(e, EChkDict):
            for k, v in e.entries:
                self.flow(e.key_type, k, "checked-dict key")
                self.flow(e.val_type, v, "checked-dict value")
        elif isinstance(e, EGet):
            self.expr(e.target)
            key_t = e.target.type.key if isinstance(e.target.type, TCheckedDict) else None
            self.flow(key_t, e.key, "key")
        elif isinstance(e, ESet):
            self.expr(e.target)
            t = e.target.type
            if isinstance(t, TCheckedDict) and not e.guarded:
                self.flow(t.key, e.key, "key")
                self.flow(t.value, e.value, "value")
            else:
                self.expr(e.key)
                self.expr(e.value)
        elif isinstance(e, ENew):
            if e.arg is not None:
                sig = self.env.classes[e.class_name]
                _, slot = self.env.lookup_field(e.class_name, sig.field_name)
                self.flow(slot.type, e.arg, f"argument of '{e.class_name}'")
        elif isinstance(e, EFieldGet):
            self.expr(e.target)
        elif isinstance(e, EFieldSet):
            self.expr(e.target)
            slot = self.env.fields(e.class_name)[e.slot]
            self.flow(slot.type, e.value, f"field '{e.name}'")
        elif isinstance(e, EAttrGet):
            self.expr(e.target)
        elif isinstance(e, EAttrSet):
            self.expr(e.target)
            self.expr(e.value)
        elif isinstance(e, EMethodCall):
            self.expr(e.target)
            param = None
            if e.kind is not CallKind.DYNAMIC and e.class_name is not None:
                sig = self.env.method(e.class_name, e.name)
                param = sig.param if sig is not None and not sig.dynamic else None
            if e.arg is not None:
                self.flow(param, e.arg, f"argument of '{e.name}'")
        elif isinstance(e, EIsNone):
            self.expr(e.operand)
        elif isinstance(e, EEq):
            self.expr(e.left)
            self.expr(e.right)
        elif isinstance(e, ENot):
            self.flow(BOOL, e.operand, "operand of 'not'")

    def block(self, stmts, ret: EvalType) -> None:
        for s in stmts:
            if isinstance(s, SStore):
                self.flow(s.declared, s.value, f"value of '{s.name}'")
            elif isinstance(s, SIf):
                self.flow(BOOL, s.cond, "condition")
                self.block(s.then, ret)
                self.block(s.orelse, ret)
            elif isinstance(s, SWhile):
                self.flow(BOOL, s.cond, "condition")
                self.block(s.body, ret)
            elif isinstance(s, SReturn):
                self.flow(ret, s.value, "return value")
            elif isinstance(s, SExpr):
                self.expr(s.expr)

    def function(self, f: ElabFunction) -> None:
        self.where = f.name
        self.block(f.body, f.ret)

    def run(self) -> List[str]:
        for f in self.program.functions:
            self.function(f)
        for c in self.program.classes:
            for m in c.methods:
                self.function(m)
            self.function(c.init0)
            self.function(c.init1)
        self.where = "<module>"
        for item in self.program.module:
            if isinstance(item, ElabVarDef):
                self.flow(item.type, item.value, f"value of '{item.name}'")
            else:
                self.expr(item.expr)
        return self.findings


def audit_casts(program: ElabProgram) -> List[str]:
    """Describe every dyn-to-precise flow that bypasses a cast; empty when sound."""
    return _Auditor(program).run()
