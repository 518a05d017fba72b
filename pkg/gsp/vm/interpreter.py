"""The bytecode interpreter."""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional

from gsp.core.errors import (
    AttributeLookupError,
    BudgetExceeded,
    DynCallError,
    GspError,
    GspRuntimeError,
    InternalError,
)
from gsp.runtime.casts import cast, matches
from gsp.runtime.classes import WrapperEntry, dispatch, lookup_method
from gsp.runtime.dicts import checked_dict_new, dict_get, dict_set, dict_set_guarded
from gsp.runtime.metrics import Metrics
from gsp.runtime.values import CheckedDictValue, Instance, check_key, render_value, value_kind, values_equal
from gsp.types.evaluation import EvalType, is_dyn
from gsp.vm.instructions import Entry, Op
from gsp.vm.module import BytecodeModule, CodeObject

logger = logging.getLogger(__name__)


@dataclass
class Frame:
    code: CodeObject
    locals: List[Any]
    pc: int = 0
    stack: List[Any] = field(default_factory=list)
    wrapper: Optional[EvalType] = None


@dataclass
class ExecutionResult:
    """What a run printed, how it ended and what it counted."""

    output: List[str] = field(default_factory=list)
    output_types: List[EvalType] = field(default_factory=list)
    values: List[Any] = field(default_factory=list)
    metrics: Metrics = field(default_factory=Metrics)
    error: Optional[GspError] = None
    steps: int = 0

    @property
    def outcome(self) -> str:
        if self.error is None:
            return "ok"
        if isinstance(self.error, GspRuntimeError):
            return "runtime"
        if isinstance(self.error, BudgetExceeded):
            return "timeout"
        return "internal"


class VirtualMachine:
    def __init__(
        self,
        module: BytecodeModule,
        *,
        step_budget: int = 1_000_000,
        max_call_depth: int = 2_000,
        debug: bool = False,
    ):
        self.module = module
        self.step_budget = step_budget
        self.max_call_depth = max_call_depth
        self.debug = debug
        self.registry = module.registry
        self.globals: dict = {}
        self.frames: List[Frame] = []
        self.result = ExecutionResult()
        self.metrics = self.result.metrics

    # Helpers

    def invariant(self, ok: bool, message: str) -> None:
        if not ok:
            raise InternalError(message)

    def cast(self, v: Any, t: EvalType) -> Any:
        return cast(v, t, self.registry)

    def enter(self, code: CodeObject, args: List[Any], entry: Entry = Entry.CHECKED, wrapper=None) -> None:
        if len(self.frames) >= self.max_call_depth:
            raise BudgetExceeded(f"call depth exceeded {self.max_call_depth}")
        local_slots = list(args) + [None] * (code.nlocals - len(args))
        pc = code.fast_entry if entry is Entry.FAST else 0
        if self.debug and pc:
            for slot, t in code.code[0].args[0]:
                self.invariant(
                    matches(local_slots[slot], t, self.registry),
                    f"fast entry into {code.name} with {value_kind(local_slots[slot])} for {t}",
                )
        self.frames.append(Frame(code, local_slots, pc, wrapper=wrapper))

    def pop_args(self, frame: Frame, argc: int) -> List[Any]:
        if not argc:
            return []
        args = frame.stack[-argc:]
        del frame.stack[-argc:]
        return args

    def check_receiver(self, obj: Any, class_name: str) -> None:
        if self.debug:
            self.invariant(
                isinstance(obj, Instance) and obj.cls.is_subclass_of(class_name),
                f"receiver {value_kind(obj)} is not a {class_name}",
            )

    def check_store(self, v: Any, t: EvalType, where: str) -> None:
        if self.debug and not is_dyn(t):
            self.invariant(matches(v, t, self.registry), f"{where}: stored {value_kind(v)} into {t}")

    def invoke_entry(self, obj: Instance, method, args: List[Any], entry: Entry) -> None:
        if method.arity != len(args):
            raise DynCallError(f"'{method.name}' takes {method.arity} argument(s), {len(args)} given")
        wrapper = method.result_type if isinstance(method, WrapperEntry) else None
        self.enter(self.module.functions[method.func_id], [obj] + args, entry, wrapper)

    # Main loop

    def run(self) -> ExecutionResult:
        try:
            self.enter(self.module.functions[BytecodeModule.MODULE_ID], [])
            self.loop()
        except GspError as exc:
            self.result.error = exc
        except Exception as exc:
            logger.exception("interpreter crashed")
            self.result.error = InternalError(f"{type(exc).__name__}: {exc}")
        return self.result

    def loop(self) -> None:
        functions = self.module.functions
        classes = self.module.classes
        metrics = self.metrics
        result = self.result
        while True:
            frame = self.frames[-1]
            ins = frame.code.code[frame.pc]
            frame.pc += 1
            result.steps += 1
            if result.steps > self.step_budget:
                raise BudgetExceeded(f"step budget of {self.step_budget} exhausted")
            op, a = ins.op, ins.args
            stack = frame.stack

            if op is Op.LOAD_CONST:
                stack.append(a[0])

            elif op is Op.LOAD_LOCAL:
                stack.append(frame.locals[a[0]])

            elif op is Op.STORE_LOCAL:
                value = stack.pop()
                self.check_store(value, a[2], f"local '{a[1]}'")
                frame.locals[a[0]] = value

            elif op is Op.LOAD_GLOBAL:
                self.invariant(a[0] in self.globals, f"global '{a[0]}' read before definition")
                stack.append(self.globals[a[0]])

            elif op is Op.STORE_GLOBAL:
                value = stack.pop()
                self.check_store(value, a[1], f"global '{a[0]}'")
                self.globals[a[0]] = value

            elif op is Op.CAST:
                metrics.casts_executed += 1
                stack.append(self.cast(stack.pop(), a[0]))

            elif op is Op.CHECK_ARGS:
                metrics.check_args_executed += 1
                for slot, t in a[0]:
                    metrics.arg_casts_executed += 1
                    self.cast(frame.locals[slot], t)

            elif op is Op.BUILD_MAP:
                flat = self.pop_args(frame, 2 * a[0])
                stack.append({check_key(flat[i]): flat[i + 1] for i in range(0, len(flat), 2)})

            elif op is Op.BUILD_CHECKED_MAP:
                tag, n = a
                flat = self.pop_args(frame, 2 * n)
                seed = {check_key(flat[i]): flat[i + 1] for i in range(0, len(flat), 2)}
                stack.append(checked_dict_new(tag.type.key, tag.type.value, seed, self.registry, metrics))

            elif op is Op.TP_ALLOC:
                cls = classes[a[0]]
                args = self.pop_args(frame, a[1])
                obj = Instance(cls, [None] * len(cls.field_names))
                init = functions[cls.init1 if args else cls.init0]
                self.enter(init, [obj] + args)

            elif op is Op.INVOKE_FUNCTION:
                code = functions[a[0]]
                metrics.direct_calls += 1
                self.enter(code, self.pop_args(frame, code.arity), a[2])

            elif op is Op.INVOKE_METHOD:
                class_name, name, slot, argc, entry, _ = a
                args = self.pop_args(frame, argc)
                obj = stack.pop()
                self.check_receiver(obj, class_name)
                metrics.vtable_calls += 1
                self.invoke_entry(obj, dispatch(obj, slot), args, entry)

            elif op is Op.CALL_DYNAMIC:
                name, argc = a
                args = self.pop_args(frame, argc)
                metrics.dynamic_calls += 1
                func_id = self.module.func_ids.get(name)
                if func_id is None or func_id == BytecodeModule.MODULE_ID or "." in name:
                    raise DynCallError(f"'{name}' is not callable")
                code = functions[func_id]
                if code.arity != argc:
                    raise DynCallError(f"'{name}' takes {code.arity} argument(s), {argc} given")
                self.enter(code, args)

            elif op is Op.CALL_METHOD_DYN:
                name, argc = a
                args = self.pop_args(frame, argc)
                obj = stack.pop()
                metrics.dynamic_calls += 1
                method = lookup_method(obj, name) if isinstance(obj, Instance) else None
                if method is None:
                    raise AttributeLookupError(f"{value_kind(obj)} object has no method '{name}'")
                if isinstance(method, WrapperEntry):
                    method = method.method
                self.invoke_entry(obj, method, args, Entry.CHECKED)

            elif op is Op.DICT_GET:
                key = stack.pop()
                stack.append(dict_get(stack.pop(), key))

            elif op is Op.DICT_SET:
                value, key = stack.pop(), stack.pop()
                target = stack.pop()
                if self.debug and isinstance(target, CheckedDictValue):
                    t = target.tag.type
                    self.invariant(
                        matches(key, t.key, self.registry) and matches(value, t.value, self.registry),
                        f"unguarded write of {value_kind(key)}: {value_kind(value)} into {t}",
                    )
                dict_set(target, key, value)
                stack.append(None)

            elif op is Op.DICT_SET_GUARDED:
                value, key = stack.pop(), stack.pop()
                dict_set_guarded(stack.pop(), key, value, self.registry, metrics)
                stack.append(None)

            elif op is Op.LOAD_FIELD:
                obj = stack.pop()
                self.check_receiver(obj, a[0])
                stack.append(obj.fields[a[1]])

            elif op is Op.STORE_FIELD:
                value = stack.pop()
                obj = stack.pop()
                self.check_receiver(obj, a[0])
                self.check_store(value, a[3], f"field '{a[2]}'")
                obj.fields[a[1]] = value
                stack.append(None)

            elif op is Op.LOAD_ATTR_DYN:
                obj = stack.pop()
                slot = obj.cls.field_slot(a[0]) if isinstance(obj, Instance) else None
                if slot is None:
                    raise AttributeLookupError(f"{value_kind(obj)} object has no field '{a[0]}'")
                stack.append(obj.fields[slot])

            elif op is Op.STORE_ATTR_DYN:
                value = stack.pop()
                obj = stack.pop()
                slot = obj.cls.field_slot(a[0]) if isinstance(obj, Instance) else None
                if slot is None:
                    raise AttributeLookupError(f"{value_kind(obj)} object has no field '{a[0]}'")
                t = obj.cls.field_types[slot]
                if not is_dyn(t):
                    metrics.casts_executed += 1
                    value = self.cast(value, t)
                obj.fields[slot] = value
                stack.append(None)

            elif op is Op.IS_NONE:
                stack.append(stack.pop() is None)

            elif op is Op.EQ:
                right = stack.pop()
                stack.append(values_equal(stack.pop(), right))

            elif op is Op.NOT:
                value = stack.pop()
                self.invariant(type(value) is bool, f"'not' applied to {value_kind(value)}")
                stack.append(not value)

            elif op is Op.JUMP:
                frame.pc = a[0]

            elif op is Op.POP_JUMP_IF_FALSE:
                value = stack.pop()
                self.invariant(type(value) is bool, f"condition is {value_kind(value)}")
                if not value:
                    frame.pc = a[0]

            elif op is Op.POP:
                stack.pop()

            elif op is Op.PRINT_EXPR:
                value = stack.pop()
                result.values.append(value)
                result.output.append(render_value(value))
                result.output_types.append(a[0])

            elif op is Op.RETURN_VALUE:
                value = stack.pop()
                if frame.wrapper is not None:
                    metrics.wrapper_result_checks += 1
                    value = self.cast(value, frame.wrapper)
                if self.debug and frame.code.is_typed:
                    self.check_store(value, frame.code.ret, f"return from {frame.code.name}")
                self.frames.pop()
                if not self.frames:
                    return
                self.frames[-1].stack.append(value)

            else:
                raise InternalError(f"unknown opcode {op}")


def execute(
    module: BytecodeModule,
    *,
    step_budget: int = 1_000_000,
    max_call_depth: int = 2_000,
    debug: bool = False,
) -> ExecutionResult:
    """Run the module body; errors are reported in the result, never raised."""
    vm = VirtualMachine(module, step_budget=step_budget, max_call_depth=max_call_depth, debug=debug)
    result = vm.run()
    if result.error is not None:
        logger.debug("execution ended with %s: %s", type(result.error).__name__, result.error)
    return result
