"""Compiled program containers."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from gsp.runtime.classes import ClassRuntime
from gsp.runtime.registry import TypeRegistry
from gsp.types.evaluation import EvalType
from gsp.vm.instructions import Instr, Op


@dataclass
class CodeObject:
    """A compiled function, method, initializer or the module body.

    ``fast_entry`` is the offset just past the CHECK_ARGS prologue, or 0 when
    there is none.
    """

    name: str
    arity: int
    nlocals: int
    code: List[Instr]
    ret: EvalType
    is_typed: bool
    param_types: Tuple[EvalType, ...] = ()
    receiver: Optional[str] = None

    @property
    def fast_entry(self) -> int:
        return 1 if self.code and self.code[0].op is Op.CHECK_ARGS else 0


@dataclass
class BytecodeModule:
    functions: List[CodeObject]
    func_ids: Dict[str, int]
    classes: Dict[str, ClassRuntime]
    registry: TypeRegistry
    globals: Dict[str, EvalType] = field(default_factory=dict)
    optimized: bool = False

    MODULE_ID = 0

    def function(self, name: str) -> CodeObject:
        return self.functions[self.func_ids[name]]
