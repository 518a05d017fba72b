"""Lower elaborated programs to bytecode."""

import logging
from typing import Dict, List, Optional

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
    ElabExprStmt,
    ElabFunction,
    ElabProgram,
    ElabVarDef,
    EMethodCall,
    ENew,
    ENot,
    ESet,
    SBreak,
    SExpr,
    SIf,
    SReturn,
    SStore,
    SWhile,
)
from gsp.core.errors import InternalError
from gsp.runtime.classes import ClassRuntime, MethodEntry, WrapperEntry
from gsp.runtime.registry import TypeRegistry, get_registry
from gsp.types.evaluation import NONE, TCheckedDict
from gsp.vm.instructions import Entry, Instr, Op
from gsp.vm.module import BytecodeModule, CodeObject

logger = logging.getLogger(__name__)

MODULE_NAME = "<module>"


class _FunctionCompiler:
    def __init__(self, module: BytecodeModule):
        self.module = module
        self.code: List[Instr] = []
        self.loops: List[List[int]] = []

    def emit(self, op: Op, *args) -> int:
        self.code.append(Instr(op, tuple(args)))
        return len(self.code) - 1

    def patch(self, index: int, target: int) -> None:
        ins = self.code[index]
        self.code[index] = Instr(ins.op, (target,))

    def here(self) -> int:
        return len(self.code)

    def expr(self, e: ElabExpr) -> None:
        if isinstance(e, EConst):
            self.emit(Op.LOAD_CONST, e.value)
        elif isinstance(e, ELocal):
            self.emit(Op.LOAD_LOCAL, e.slot, e.name)
        elif isinstance(e, EGlobal):
            self.emit(Op.LOAD_GLOBAL, e.name)
        elif isinstance(e, ECast):
            self.expr(e.inner)
            self.emit(Op.CAST, e.target)
        elif isinstance(e, ECall):
            self.call(e)
        elif isinstance(e, EDict):
            self.entries(e.entries)
            self.emit(Op.BUILD_MAP, len(e.entries))
        elif isinstance(e, EChkDict):
            self.entries(e.entries)
            tag = self.module.registry.intern(TCheckedDict(e.key_type, e.val_type))
            self.emit(Op.BUILD_CHECKED_MAP, tag, len(e.entries))
        elif isinstance(e, EGet):
            self.expr(e.target)
            self.expr(e.key)
            self.emit(Op.DICT_GET)
        elif isinstance(e, ESet):
            self.expr(e.target)
            self.expr(e.key)
            self.expr(e.value)
            self.emit(Op.DICT_SET_GUARDED if e.guarded else Op.DICT_SET)
        elif isinstance(e, ENew):
            argc = 0
            if e.arg is not None:
                self.expr(e.arg)
                argc = 1
            self.emit(Op.TP_ALLOC, e.class_name, argc)
        elif isinstance(e, EFieldGet):
            self.expr(e.target)
            self.emit(Op.LOAD_FIELD, e.class_name, e.slot, e.name)
        elif isinstance(e, EFieldSet):
            self.expr(e.target)
            self.expr(e.value)
            slot_type = self.module.classes[e.class_name].field_types[e.slot]
            self.emit(Op.STORE_FIELD, e.class_name, e.slot, e.name, slot_type)
        elif isinstance(e, EAttrGet):
            self.expr(e.target)
            self.emit(Op.LOAD_ATTR_DYN, e.name)
        elif isinstance(e, EAttrSet):
            self.expr(e.target)
            self.expr(e.value)
            self.emit(Op.STORE_ATTR_DYN, e.name)
        elif isinstance(e, EMethodCall):
            self.method_call(e)
        elif isinstance(e, EIsNone):
            self.expr(e.operand)
            self.emit(Op.IS_NONE)
        elif isinstance(e, EEq):
            self.expr(e.left)
            self.expr(e.right)
            self.emit(Op.EQ)
        elif isinstance(e, ENot):
            self.expr(e.operand)
            self.emit(Op.NOT)
        else:
            raise InternalError(f"cannot compile expression {e!r}")

    def entries(self, entries) -> None:
        for k, v in entries:
            self.expr(k)
            self.expr(v)

    def call(self, e: ECall) -> None:
        argc = 0
        if e.arg is not None:
            self.expr(e.arg)
            argc = 1
        if e.kind is CallKind.DYNAMIC:
            self.emit(Op.CALL_DYNAMIC, e.fname, argc)
            return
        func_id = self.module.func_ids.get(e.fname)
        if func_id is None:
            raise InternalError(f"call to uncompiled function '{e.fname}'")
        self.emit(Op.INVOKE_FUNCTION, func_id, e.fname, Entry.CHECKED, e.kind is CallKind.STATIC_STRICT)

    def method_call(self, e: EMethodCall) -> None:
        self.expr(e.target)
        argc = 0
        if e.arg is not None:
            self.expr(e.arg)
            argc = 1
        if e.kind is CallKind.DYNAMIC:
            self.emit(Op.CALL_METHOD_DYN, e.name, argc)
        else:
            strict = e.kind is CallKind.STATIC_STRICT
            self.emit(Op.INVOKE_METHOD, e.class_name, e.name, e.slot, argc, Entry.CHECKED, strict)

    def stmts(self, stmts) -> None:
        for s in stmts:
            self.stmt(s)

    def stmt(self, s) -> None:
        if isinstance(s, SStore):
            self.expr(s.value)
            self.emit(Op.STORE_LOCAL, s.slot, s.name, s.declared)
        elif isinstance(s, SExpr):
            self.expr(s.expr)
            self.emit(Op.POP)
        elif isinstance(s, SReturn):
            self.expr(s.value)
            self.emit(Op.RETURN_VALUE)
        elif isinstance(s, SIf):
            self.expr(s.cond)
            to_else = self.emit(Op.POP_JUMP_IF_FALSE, -1)
            self.stmts(s.then)
            if s.orelse:
                to_end = self.emit(Op.JUMP, -1)
                self.patch(to_else, self.here())
                self.stmts(s.orelse)
                self.patch(to_end, self.here())
            else:
                self.patch(to_else, self.here())
        elif isinstance(s, SWhile):
            top = self.here()
            self.expr(s.cond)
            to_end = self.emit(Op.POP_JUMP_IF_FALSE, -1)
            self.loops.append([])
            self.stmts(s.body)
            self.emit(Op.JUMP, top)
            end = self.here()
            self.patch(to_end, end)
            for brk in self.loops.pop():
                self.patch(brk, end)
        elif isinstance(s, SBreak):
            if not self.loops:
                raise InternalError("break outside loop")
            self.loops[-1].append(self.emit(Op.JUMP, -1))
        else:
            raise InternalError(f"cannot compile statement {s!r}")


def _code_object(module: BytecodeModule, f: ElabFunction) -> CodeObject:
    fc = _FunctionCompiler(module)
    if f.check_args:
        fc.emit(Op.CHECK_ARGS, tuple(f.check_args))
    fc.stmts(f.body)
    return CodeObject(
        name=f.name,
        arity=f.arity,
        nlocals=f.nlocals,
        code=fc.code,
        ret=f.ret,
        is_typed=f.is_typed,
        param_types=f.param_types,
        receiver=f.receiver,
    )


def _module_body(module: BytecodeModule, program: ElabProgram) -> CodeObject:
    fc = _FunctionCompiler(module)
    for item in program.module:
        if isinstance(item, ElabVarDef):
            fc.expr(item.value)
            fc.emit(Op.STORE_GLOBAL, item.name, item.type)
        elif isinstance(item, ElabExprStmt):
            fc.expr(item.expr)
            fc.emit(Op.PRINT_EXPR, item.expr.type)
    fc.emit(Op.LOAD_CONST, None)
    fc.emit(Op.RETURN_VALUE)
    return CodeObject(MODULE_NAME, 0, 0, fc.code, NONE, True)


def _build_classes(module: BytecodeModule, program: ElabProgram) -> None:
    env = program.env
    for ec in program.classes:
        parent: Optional[ClassRuntime] = module.classes.get(ec.parent) if ec.parent else None
        module.classes[ec.name] = ClassRuntime(
            name=ec.name,
            parent=parent,
            ancestry=frozenset(env.ancestors(ec.name)),
            field_names=tuple(f.name for f in ec.fields),
            field_types=tuple(f.type for f in ec.fields),
        )


def _link_classes(module: BytecodeModule, program: ElabProgram) -> None:
    env = program.env
    for ec in program.classes:
        cls = module.classes[ec.name]
        for index, slot in enumerate(ec.vtable):
            sig = env.classes[slot.impl_class].methods[slot.name]
            entry = MethodEntry(slot.name, module.func_ids[f"{slot.impl_class}.{slot.name}"], sig.arity)
            cls.vtable.append(WrapperEntry(entry, slot.wrapper_result) if slot.wrapper_needed else entry)
            cls.method_index[slot.name] = index
        cls.init0 = module.func_ids[ec.init0.name]
        cls.init1 = module.func_ids[ec.init1.name]


def compile_program(program: ElabProgram, registry: Optional[TypeRegistry] = None) -> BytecodeModule:
    """Compile with every call edge on its checked entry; see ``optimize``."""
    functions: List[ElabFunction] = list(program.functions)
    for ec in program.classes:
        functions.extend(ec.methods)
        functions.extend((ec.init0, ec.init1))
    func_ids: Dict[str, int] = {MODULE_NAME: 0}
    for index, f in enumerate(functions, start=1):
        func_ids[f.name] = index

    module = BytecodeModule(
        functions=[],
        func_ids=func_ids,
        classes={},
        registry=registry or get_registry(),
        globals={item.name: item.type for item in program.module if isinstance(item, ElabVarDef)},
    )
    _build_classes(module, program)
    _link_classes(module, program)
    module.functions.append(_module_body(module, program))
    module.functions.extend(_code_object(module, f) for f in functions)
    logger.debug("compiled %d code objects, %d classes", len(module.functions), len(module.classes))
    return module


__all__ = ["MODULE_NAME", "compile_program"]
