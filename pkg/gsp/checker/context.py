"""Per-body checking state: scopes, slots, flow types and diagnostics."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from gsp.schemas.diagnostic import E_UNKNOWN_CLASS, Diagnostic
from gsp.syntax.nodes import Span, SurfaceType
from gsp.types.env import TypeEnv
from gsp.types.evaluation import DYN, EvalType, TCheckedDict, TClass, TOptional
from gsp.types.normalize import retract

FlowState = Dict[int, EvalType]


@dataclass(frozen=True)
class LocalInfo:
    slot: int
    name: str
    declared: EvalType


def unknown_classes(env: TypeEnv, t: EvalType) -> List[str]:
    if isinstance(t, TClass):
        return [] if env.has_class(t.name) else [t.name]
    if isinstance(t, TOptional):
        return unknown_classes(env, t.inner)
    if isinstance(t, TCheckedDict):
        return unknown_classes(env, t.key) + unknown_classes(env, t.value)
    return []


def resolve_type(env: TypeEnv, s: SurfaceType, span: Span, diagnostics: List[Diagnostic]) -> EvalType:
    """Retract an annotation; unknown classes are reported and the type becomes dyn."""
    t = retract(s)
    missing = unknown_classes(env, t)
    if missing:
        for name in dict.fromkeys(missing):
            diagnostics.append(
                Diagnostic(code=E_UNKNOWN_CLASS, message=f"unknown class '{name}'", line=span.line, col=span.col)
            )
        return DYN
    return t


@dataclass
class Context:
    """State for checking one body (or one field default)."""

    env: TypeEnv
    diagnostics: List[Diagnostic]
    typed: bool = True
    ret: EvalType = DYN
    owner: Optional[str] = None
    dynamic_class: bool = False
    frames: List[Dict[str, LocalInfo]] = field(default_factory=lambda: [{}])
    nlocals: int = 0
    state: FlowState = field(default_factory=dict)
    breaks: List[List[FlowState]] = field(default_factory=list)

    def error(self, code: str, message: str, span: Span) -> None:
        self.diagnostics.append(Diagnostic(code=code, message=message, line=span.line, col=span.col))

    def lookup(self, name: str) -> Optional[LocalInfo]:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None

    def define(self, name: str, declared: EvalType) -> LocalInfo:
        info = LocalInfo(self.nlocals, name, declared)
        self.nlocals += 1
        self.frames[-1][name] = info
        self.state[info.slot] = declared
        return info

    def current_type(self, info: LocalInfo) -> EvalType:
        return self.state.get(info.slot, info.declared)

    def push(self) -> None:
        self.frames.append({})

    def pop(self) -> None:
        self.frames.pop()

    def resolve(self, s: SurfaceType, span: Span) -> EvalType:
        return resolve_type(self.env, s, span, self.diagnostics)

    def visible_slots(self) -> List[Tuple[int, EvalType]]:
        return [(info.slot, info.declared) for frame in self.frames for info in frame.values()]
