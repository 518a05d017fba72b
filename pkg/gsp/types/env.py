"""The type environment: top-level declarations and flattened class views."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from gsp.syntax.nodes import OBJECT_CLASS, SurfaceType
from gsp.types.evaluation import EvalType


@dataclass(frozen=True)
class FuncSig:
    name: str
    param: Optional[EvalType]
    ret: EvalType
    is_typed: bool

    @property
    def arity(self) -> int:
        return 0 if self.param is None else 1


@dataclass(frozen=True)
class MethodSig:
    name: str
    param: Optional[EvalType]
    ret: EvalType
    declaring_class: str
    dynamic: bool

    @property
    def arity(self) -> int:
        return 0 if self.param is None else 1


@dataclass(frozen=True)
class FieldSig:
    """A field slot; ``type`` is the type enforced on every write."""

    name: str
    type: EvalType
    declaring_class: str


@dataclass
class ClassSig:
    name: str
    parent: Optional[str]
    dynamic: bool
    field_name: Optional[str] = None
    field_type: Optional[EvalType] = None
    methods: Dict[str, MethodSig] = field(default_factory=dict)


@dataclass
class TypeEnv:
    """Module-level variables, functions and classes (the Γ of the model)."""

    vars: Dict[str, SurfaceType] = field(default_factory=dict)
    var_types: Dict[str, EvalType] = field(default_factory=dict)
    funcs: Dict[str, FuncSig] = field(default_factory=dict)
    classes: Dict[str, ClassSig] = field(
        default_factory=lambda: {OBJECT_CLASS: ClassSig(OBJECT_CLASS, None, False)}
    )

    def has_class(self, name: str) -> bool:
        return name in self.classes

    def parent_of(self, name: str) -> Optional[str]:
        return self.classes[name].parent

    def ancestors(self, name: str) -> List[str]:
        """``name`` followed by its parents up to ``object``."""
        chain = []
        current: Optional[str] = name
        while current is not None and current not in chain:
            chain.append(current)
            current = self.classes[current].parent if current in self.classes else None
        return chain

    def is_subclass(self, child: str, ancestor: str) -> bool:
        return ancestor in self.ancestors(child)

    def fields(self, name: str) -> Tuple[FieldSig, ...]:
        """Field slots of ``name`` in slot order; the root-most declaration fixes the type."""
        slots: List[FieldSig] = []
        seen = set()
        for cls in reversed(self.ancestors(name)):
            sig = self.classes[cls]
            if sig.field_name is None or sig.field_name in seen:
                continue
            seen.add(sig.field_name)
            slots.append(FieldSig(sig.field_name, sig.field_type, cls))
        return tuple(slots)

    def lookup_field(self, name: str, field_name: str) -> Optional[Tuple[int, FieldSig]]:
        for slot, sig in enumerate(self.fields(name)):
            if sig.name == field_name:
                return slot, sig
        return None

    def method_slots(self, name: str) -> Tuple[str, ...]:
        """Method names in vtable order; a name keeps its slot in every subclass."""
        names: List[str] = []
        for cls in reversed(self.ancestors(name)):
            for method in self.classes[cls].methods:
                if method not in names:
                    names.append(method)
        return tuple(names)

    def method(self, name: str, method_name: str) -> Optional[MethodSig]:
        """The nearest declaration of ``method_name`` visible from ``name``."""
        for cls in self.ancestors(name):
            sig = self.classes[cls].methods.get(method_name)
            if sig is not None:
                return sig
        return None

    def ancestor_method(self, name: str, method_name: str, *, typed_only: bool = False) -> Optional[MethodSig]:
        """Declaration of ``method_name`` in a proper ancestor of ``name``."""
        for cls in self.ancestors(name)[1:]:
            sig = self.classes[cls].methods.get(method_name)
            if sig is None:
                continue
            if typed_only and self.classes[cls].dynamic:
                continue
            return sig
        return None
