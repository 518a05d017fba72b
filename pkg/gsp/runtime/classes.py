"""Run-time class objects, vtables and dispatch."""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from gsp.types.evaluation import EvalType


@dataclass(frozen=True)
class MethodEntry:
    """A direct vtable entry pointing at a compiled method."""

    name: str
    func_id: int
    arity: int


@dataclass(frozen=True)
class WrapperEntry:
    """Runs ``method`` and casts its result to ``result_type``."""

    method: MethodEntry
    result_type: EvalType

    @property
    def name(self) -> str:
        return self.method.name

    @property
    def func_id(self) -> int:
        return self.method.func_id

    @property
    def arity(self) -> int:
        return self.method.arity


VTableEntry = Union[MethodEntry, WrapperEntry]


@dataclass(eq=False)
class ClassRuntime:
    name: str
    parent: Optional["ClassRuntime"]
    ancestry: FrozenSet[str]
    field_names: Tuple[str, ...]
    field_types: Tuple[EvalType, ...]
    vtable: List[VTableEntry] = field(default_factory=list)
    method_index: Dict[str, int] = field(default_factory=dict)
    init0: int = -1
    init1: int = -1

    def is_subclass_of(self, name: str) -> bool:
        return name in self.ancestry

    def field_slot(self, name: str) -> Optional[int]:
        try:
            return self.field_names.index(name)
        except ValueError:
            return None

    def __repr__(self) -> str:
        return f"<class {self.name}>"


def dispatch(obj, slot: int) -> VTableEntry:
    """The vtable entry in ``slot`` of the object's class."""
    return obj.cls.vtable[slot]


def lookup_method(obj, name: str) -> Optional[VTableEntry]:
    """Find a method by name, for calls from dynamic code."""
    slot = obj.cls.method_index.get(name)
    return None if slot is None else obj.cls.vtable[slot]
