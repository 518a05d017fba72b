"""Registry of instantiated checked-dictionary types."""

import threading
from functools import lru_cache
from typing import Dict, List

from gsp.types.evaluation import EvalType, TCheckedDict


class TypeId:
    """Opaque tag for one instantiated type; compared by identity."""

    __slots__ = ("index", "type")

    def __init__(self, index: int, type: EvalType):
        self.index = index
        self.type = type

    def __repr__(self) -> str:
        return f"TypeId({self.index}, {self.type})"


class TypeRegistry:
    """Append-only bijection between canonical checked-dict types and tags."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._ids: Dict[EvalType, TypeId] = {}
        self._order: List[TypeId] = []

    def intern(self, t: EvalType) -> TypeId:
        if not isinstance(t, TCheckedDict):
            raise TypeError(f"only checked-dictionary types are interned, got {t}")
        with self._lock:
            existing = self._ids.get(t)
            if existing is None:
                existing = TypeId(len(self._order), t)
                self._ids[t] = existing
                self._order.append(existing)
            return existing

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, t: EvalType) -> bool:
        return t in self._ids


@lru_cache()
def get_registry() -> TypeRegistry:
    """Get the process-wide registry."""
    return TypeRegistry()


def intern(registry: TypeRegistry, t: EvalType) -> TypeId:
    return registry.intern(t)
