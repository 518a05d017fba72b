"""Random well-formed program generation for soundness fuzzing.

Generation is type-directed: every expression is produced for a target type
and mostly has it, but dyn values are freely used where a precise type is
expected so that programs cross the typed/untyped boundary often. Nothing
guarantees well-typedness; the checker sorts that out.
"""

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from gsp.syntax.nodes import (
    OBJECT_CLASS,
    Assign,
    BodyStmt,
    BoolLit,
    Break,
    Call,
    ChkDictLit,
    ClassDef,
    DictLit,
    Eq,
    Expr,
    ExprStmt,
    FieldDecl,
    FieldGet,
    FieldSet,
    FuncDef,
    If,
    IntLit,
    IsNone,
    LocalDef,
    MethodCall,
    MethodDef,
    New,
    NoneLit,
    Not,
    Param,
    Pass,
    Program,
    Return,
    SBool,
    SCheckedDict,
    SClass,
    SDict,
    SDyn,
    SInt,
    SNone,
    SStr,
    SUnion,
    StrLit,
    Subscript,
    SubscriptSet,
    SurfaceType,
    Var,
    VarDef,
    While,
)
from gsp.types.evaluation import (
    BOOL,
    DICT,
    DYN,
    INT,
    NONE,
    STR,
    EvalType,
    TBool,
    TCheckedDict,
    TClass,
    TDict,
    TDyn,
    TInt,
    TNone,
    TOptional,
    TStr,
)

KEYS = ("A", "B", "end")


class GenConfig(BaseModel):
    """Knobs for one generated program; equal configs give equal programs."""

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    max_top_stmts: int = Field(10, ge=1, le=64)
    max_expr_depth: int = Field(3, ge=0, le=8)
    max_classes: int = Field(3, ge=0, le=8)
    dyn_bias: float = Field(0.3, ge=0.0, le=1.0)


def surface(t: EvalType) -> SurfaceType:
    """The annotation a programmer would write for ``t``."""
    if isinstance(t, TDyn):
        return SDyn()
    if isinstance(t, TNone):
        return SNone()
    if isinstance(t, TInt):
        return SInt()
    if isinstance(t, TBool):
        return SBool()
    if isinstance(t, TStr):
        return SStr()
    if isinstance(t, TClass):
        return SClass(t.name)
    if isinstance(t, TDict):
        return SDict(SDyn(), SDyn())
    if isinstance(t, TCheckedDict):
        return SCheckedDict(surface(t.key), surface(t.value))
    if isinstance(t, TOptional):
        return SUnion((SNone(), surface(t.inner)))
    raise TypeError(f"not an evaluation type: {t!r}")


@dataclass
class _Method:
    param: Optional[EvalType]
    has_param: bool
    ret: EvalType
    dynamic: bool


@dataclass
class _Class:
    name: str
    parent: str
    dynamic: bool
    field_name: str
    fields: Dict[str, EvalType] = field(default_factory=dict)
    methods: Dict[str, _Method] = field(default_factory=dict)
    own_field_type: EvalType = DYN


@dataclass
class _Func:
    name: str
    has_param: bool
    param: EvalType
    ret: EvalType


@dataclass
class _Body:
    """Generation state for one function or method body."""

    typed: bool
    ret: EvalType
    owner: Optional[str] = None
    in_method: bool = False
    frames: List[Dict[str, EvalType]] = field(default_factory=lambda: [{}])
    counter: int = 0
    current_func: Optional[str] = None

    def fresh(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    def visible(self) -> Dict[str, EvalType]:
        out: Dict[str, EvalType] = {}
        for frame in self.frames:
            out.update(frame)
        return out


class ProgramGenerator:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.classes: Dict[str, _Class] = {}
        self.funcs: Dict[str, _Func] = {}
        self.globals: Dict[str, EvalType] = {}

    # Types

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    def annotate(self, t: EvalType) -> EvalType:
        return DYN if self.chance(self.cfg.dyn_bias) else t

    def pick_type(self, allow_classes: bool = True) -> EvalType:
        options: List[Callable[[], EvalType]] = [
            lambda: INT,
            lambda: BOOL,
            lambda: STR,
            lambda: TOptional(INT),
            lambda: TOptional(STR),
            lambda: DICT,
            lambda: TCheckedDict(self.annotate(STR), self.annotate(INT)),
        ]
        if allow_classes and self.classes:
            options.append(lambda: TClass(self.rng.choice(list(self.classes))))
            options.append(lambda: TOptional(TClass(self.rng.choice(list(self.classes)))))
        return self.rng.choice(options)()

    def is_subclass(self, child: str, ancestor: str) -> bool:
        current: Optional[str] = child
        while current is not None and current != OBJECT_CLASS:
            if current == ancestor:
                return True
            current = self.classes[current].parent if current in self.classes else None
        return ancestor == OBJECT_CLASS

    def fits(self, actual: EvalType, expected: EvalType) -> bool:
        if isinstance(expected, TDyn) or isinstance(actual, TDyn) or actual == expected:
            return True
        if isinstance(actual, TBool) and isinstance(expected, TInt):
            return True
        if isinstance(expected, TOptional):
            if isinstance(actual, TNone):
                return True
            inner = actual.inner if isinstance(actual, TOptional) else actual
            return self.fits(inner, expected.inner) and not isinstance(inner, TDyn)
        if isinstance(actual, TClass) and isinstance(expected, TClass):
            return self.is_subclass(actual.name, expected.name)
        return False

    # Expressions

    def literal(self, body: _Body, t: EvalType, depth: int) -> Tuple[Expr, EvalType]:
        rng = self.rng
        if isinstance(t, TDyn):
            return self.literal(body, self.pick_type(), depth)
        if isinstance(t, TNone):
            return NoneLit(), NONE
        if isinstance(t, TInt):
            return IntLit(rng.randint(-2, 9)), INT
        if isinstance(t, TBool):
            return BoolLit(rng.random() < 0.5), BOOL
        if isinstance(t, TStr):
            return StrLit(rng.choice(KEYS + ("x",))), STR
        if isinstance(t, TOptional):
            if rng.random() < 0.4:
                return NoneLit(), NONE
            return self.literal(body, t.inner, depth)
        if isinstance(t, TDict):
            entries = tuple(
                (StrLit(k), self.expr(body, DYN, depth - 1)[0]) for k in rng.sample(KEYS, rng.randint(0, 2) if depth > 0 else 0)
            )
            return DictLit(entries), DICT
        if isinstance(t, TCheckedDict):
            entries = tuple(
                (self.expr(body, t.key, depth - 1)[0], self.expr(body, t.value, depth - 1)[0])
                for _ in range(rng.randint(0, 2) if depth > 0 else 0)
            )
            return ChkDictLit(surface(t.key), surface(t.value), entries), t
        if isinstance(t, TClass):
            candidates = [c for c in self.classes if self.is_subclass(c, t.name)]
            if not candidates:
                return NoneLit(), NONE
            name = rng.choice(candidates)
            return self.new(body, name, depth)
        raise TypeError(f"cannot build a literal of {t}")

    def new(self, body: _Body, name: str, depth: int) -> Tuple[Expr, EvalType]:
        cls = self.classes[name]
        if depth <= 0 or self.chance(0.5):
            return New(name, None), TClass(name)
        arg, _ = self.expr(body, cls.fields[cls.field_name], depth - 1)
        return New(name, arg), TClass(name)

    def variables(self, body: _Body, t: EvalType) -> List[Tuple[Expr, EvalType]]:
        found = [(Var(n), vt) for n, vt in body.visible().items() if self.fits(vt, t)]
        found += [(Var(n), vt) for n, vt in self.globals.items() if self.fits(vt, t)]
        return found

    def expr(self, body: _Body, t: EvalType, depth: int) -> Tuple[Expr, EvalType]:
        e, actual = self._expr(body, t, depth)
        return e, (actual if body.typed else DYN)

    def _expr(self, body: _Body, t: EvalType, depth: int) -> Tuple[Expr, EvalType]:
        rng = self.rng
        producers: List[Callable[[], Optional[Tuple[Expr, EvalType]]]] = [lambda: self.literal(body, t, depth)]
        variables = self.variables(body, t)
        if variables:
            producers.append(lambda: rng.choice(variables))
            producers.append(lambda: rng.choice(variables))
        if depth > 0:
            producers.append(lambda: self.call(body, t, depth))
            producers.append(lambda: self.field_get(body, t, depth))
            producers.append(lambda: self.subscript(body, t, depth))
            if not body.in_method:
                producers.append(lambda: self.method_call(body, t, depth))
            if isinstance(t, (TBool, TInt, TDyn)):
                producers.append(lambda: self.boolean(body, depth))
        for _ in range(4):
            made = rng.choice(producers)()
            if made is not None:
                return made
        return self.literal(body, t, 0)

    def boolean(self, body: _Body, depth: int) -> Tuple[Expr, EvalType]:
        choice = self.rng.randrange(3)
        if choice == 0:
            left, _ = self.expr(body, DYN, depth - 1)
            right, _ = self.expr(body, DYN, depth - 1)
            return Eq(left, right), BOOL
        if choice == 1:
            operand, _ = self.expr(body, self.rng.choice([TOptional(INT), TOptional(STR), DYN]), depth - 1)
            return IsNone(operand), BOOL
        operand, _ = self.expr(body, BOOL, depth - 1)
        return Not(operand), BOOL

    def call(self, body: _Body, t: EvalType, depth: int) -> Optional[Tuple[Expr, EvalType]]:
        options = [f for f in self.funcs.values() if self.fits(f.ret, t) and f.name != body.current_func]
        if not options:
            return None
        f = self.rng.choice(options)
        arg = self.expr(body, f.param, depth - 1)[0] if f.has_param else None
        return Call(f.name, arg), f.ret

    def receiver(self, body: _Body, depth: int, want: Callable[[_Class], bool]) -> Optional[Tuple[Expr, _Class]]:
        names = [c for c in self.classes.values() if want(c)]
        if not names:
            return None
        cls = self.rng.choice(names)
        options = [
            (Var(n), vt) for n, vt in list(body.visible().items()) + list(self.globals.items())
            if isinstance(vt, TClass) and self.is_subclass(vt.name, cls.name)
        ]
        if options and self.chance(0.7):
            target, vt = self.rng.choice(options)
            return target, self.classes[vt.name]
        if body.in_method and body.owner == cls.name:
            return Var("self"), cls
        target, _ = self.new(body, cls.name, depth)
        return target, cls

    def field_get(self, body: _Body, t: EvalType, depth: int) -> Optional[Tuple[Expr, EvalType]]:
        found = self.receiver(body, depth, lambda c: any(self.fits(ft, t) for ft in c.fields.values()))
        if found is None:
            return None
        target, cls = found
        names = [n for n, ft in cls.fields.items() if self.fits(ft, t)]
        if not names:
            return None
        name = self.rng.choice(names)
        return FieldGet(target, name), cls.fields[name]

    def method_call(self, body: _Body, t: EvalType, depth: int) -> Optional[Tuple[Expr, EvalType]]:
        found = self.receiver(body, depth, lambda c: any(self.fits(m.ret, t) for m in c.methods.values()))
        if found is None:
            return None
        target, cls = found
        names = [n for n, m in cls.methods.items() if self.fits(m.ret, t)]
        if not names:
            return None
        name = self.rng.choice(names)
        m = cls.methods[name]
        arg = self.expr(body, m.param, depth - 1)[0] if m.has_param else None
        return MethodCall(target, name, arg), m.ret

    def subscript(self, body: _Body, t: EvalType, depth: int) -> Optional[Tuple[Expr, EvalType]]:
        options = [
            (n, vt) for n, vt in list(body.visible().items()) + list(self.globals.items())
            if isinstance(vt, TDict) or (isinstance(vt, TCheckedDict) and self.fits(vt.value, t))
        ]
        if not options:
            return None
        name, vt = self.rng.choice(options)
        key_type = vt.key if isinstance(vt, TCheckedDict) else STR
        key, _ = self.expr(body, key_type, depth - 1)
        return Subscript(Var(name), key), (vt.value if isinstance(vt, TCheckedDict) else DYN)

    # Statements

    def set_stmt(self, body: _Body, depth: int) -> Optional[BodyStmt]:
        rng = self.rng
        visible = list(body.visible().items()) + list(self.globals.items())
        dicts = [(n, vt) for n, vt in visible if isinstance(vt, (TDict, TCheckedDict, TDyn))]
        if dicts and rng.random() < 0.6:
            name, vt = rng.choice(dicts)
            key_t, val_t = (vt.key, vt.value) if isinstance(vt, TCheckedDict) else (STR, DYN)
            key, _ = self.expr(body, key_t, depth - 1)
            value, _ = self.expr(body, val_t, depth - 1)
            return ExprStmt(SubscriptSet(Var(name), key, value))
        found = self.receiver(body, depth, lambda c: bool(c.fields))
        if found is None:
            return None
        target, cls = found
        if isinstance(target, New):
            return None
        name = rng.choice(list(cls.fields))
        value, _ = self.expr(body, cls.fields[name], depth - 1)
        return ExprStmt(FieldSet(target, name, value))

    def local_def(self, body: _Body, depth: int) -> BodyStmt:
        t = self.pick_type()
        init, actual = self.expr(body, t, depth)
        name = body.fresh()
        if body.typed and self.chance(0.6):
            ann = self.annotate(t)
            body.frames[-1][name] = ann
            return LocalDef(name, surface(ann), init)
        body.frames[-1][name] = actual if body.typed else DYN
        return LocalDef(name, None, init)

    def assign(self, body: _Body, depth: int) -> Optional[BodyStmt]:
        visible = body.visible()
        if not visible:
            return None
        name = self.rng.choice(list(visible))
        value, _ = self.expr(body, visible[name], depth)
        return Assign(name, value)

    def nested(self, body: _Body, depth: int, size: int, in_loop: bool) -> Tuple[BodyStmt, ...]:
        body.frames.append({})
        try:
            stmts = self.block(body, depth, size, in_loop)
        finally:
            body.frames.pop()
        return stmts

    def if_stmt(self, body: _Body, depth: int, in_loop: bool) -> If:
        rng = self.rng
        cond, _ = self.expr(body, BOOL, self.cfg.max_expr_depth)
        then = self.nested(body, depth - 1, rng.randint(1, 2), in_loop)
        roll = rng.random()
        if roll < 0.15:
            orelse: Tuple[BodyStmt, ...] = (self.if_stmt(body, depth, in_loop),)
        elif roll < 0.55:
            orelse = self.nested(body, depth - 1, rng.randint(1, 2), in_loop)
        else:
            orelse = ()
        return If(cond, then, orelse)

    def early_return(self, body: _Body) -> Return:
        if self.fits(NONE, body.ret) and self.chance(0.5):
            return Return(None)
        value, _ = self.expr(body, body.ret, self.cfg.max_expr_depth)
        return Return(value)

    def block(self, body: _Body, depth: int, size: int, in_loop: bool = False) -> Tuple[BodyStmt, ...]:
        rng = self.rng
        out: List[BodyStmt] = []
        for _ in range(max(1, size)):
            roll = rng.random()
            stmt: Optional[BodyStmt] = None
            if roll < 0.35:
                stmt = self.local_def(body, self.cfg.max_expr_depth)
            elif roll < 0.5:
                stmt = self.assign(body, self.cfg.max_expr_depth)
            elif roll < 0.65:
                stmt = self.set_stmt(body, self.cfg.max_expr_depth)
            elif roll < 0.78 and depth > 0:
                stmt = self.if_stmt(body, depth, in_loop)
            elif roll < 0.86 and depth > 0:
                cond = BoolLit(True) if rng.random() < 0.5 else self.expr(body, BOOL, 1)[0]
                inner = self.nested(body, depth - 1, rng.randint(1, 2), True)
                stmt = While(cond, inner + (Break(),))
            elif roll < 0.89:
                stmt = Pass()
            elif roll < 0.93:
                stmt = self.early_return(body)
            else:
                e, _ = self.expr(body, DYN, self.cfg.max_expr_depth)
                stmt = ExprStmt(e)
            if stmt is not None:
                out.append(stmt)
        if not out:
            out.append(ExprStmt(self.literal(body, INT, 0)[0]))
        return tuple(out)

    def function_body(self, body: _Body, has_ret: bool) -> Tuple[BodyStmt, ...]:
        stmts = self.block(body, 2, self.rng.randint(1, 3))
        if has_ret or not self.chance(0.2):
            value, _ = self.expr(body, body.ret, self.cfg.max_expr_depth)
            stmts = stmts + (Return(value),)
        return stmts

    # Declarations

    def method(self, cls: _Class, name: str, sig: _Method) -> MethodDef:
        body = _Body(typed=not cls.dynamic, ret=sig.ret if not cls.dynamic else DYN, owner=cls.name, in_method=True)
        body.frames[0]["self"] = TClass(cls.name) if not cls.dynamic else DYN
        param = None
        if sig.has_param:
            body.frames[0]["p"] = sig.param
            param = Param("p", surface(sig.param))
        stmts = self.function_body(body, has_ret=True)
        return MethodDef(name, param, surface(sig.ret), stmts)

    def class_def(self, index: int) -> ClassDef:
        rng = self.rng
        name = f"C{index}"
        parent = OBJECT_CLASS
        if self.classes and rng.random() < 0.6:
            parent = rng.choice(list(self.classes))
        dynamic = self.chance(self.cfg.dyn_bias * 0.6)
        inherited = self.classes.get(parent)
        cls = _Class(name, parent, dynamic, f"x{index}")
        if inherited is not None:
            cls.fields.update(inherited.fields)
            cls.methods.update(inherited.methods)

        field_t = DYN if dynamic else self.annotate(self.pick_type(allow_classes=False))
        cls.fields[cls.field_name] = field_t
        cls.own_field_type = field_t
        default_body = _Body(typed=not dynamic, ret=DYN, owner=name)
        default, _ = self.literal(default_body, field_t, 0)
        self.classes[name] = cls

        methods: List[MethodDef] = []
        for mname, sig in list(cls.methods.items()):
            if not rng.random() < 0.5:
                continue
            typed_sig = sig if not sig.dynamic else None
            if dynamic:
                new_sig = _Method(DYN, sig.has_param, DYN, True)
            elif typed_sig is not None and rng.random() < 0.9:
                new_sig = _Method(typed_sig.param, typed_sig.has_param, typed_sig.ret, False)
            else:
                new_sig = self.signature(False, sig.has_param)
            cls.methods[mname] = new_sig
            methods.append(self.method(cls, mname, new_sig))
        if rng.random() < 0.7:
            mname = f"m{index}"
            new_sig = self.signature(dynamic, rng.random() < 0.6)
            cls.methods[mname] = new_sig
            methods.append(self.method(cls, mname, new_sig))
        return ClassDef(
            name,
            parent,
            dynamic,
            FieldDecl(cls.field_name, surface(field_t), default),
            tuple(methods),
        )

    def signature(self, dynamic: bool, has_param: bool) -> _Method:
        if dynamic:
            return _Method(DYN, has_param, DYN, True)
        param = self.annotate(self.pick_type()) if has_param else DYN
        return _Method(param, has_param, self.annotate(self.pick_type()), False)

    def func_def(self, index: int) -> FuncDef:
        name = f"f{index}"
        has_param = self.rng.random() < 0.7
        param_t = self.annotate(self.pick_type()) if has_param else DYN
        ret = self.annotate(self.pick_type())
        typed = not (param_t == DYN and ret == DYN)
        body = _Body(typed=typed, ret=ret, current_func=name)
        param = None
        if has_param:
            body.frames[0]["p"] = param_t
            param = Param("p", surface(param_t))
        stmts = self.function_body(body, has_ret=not isinstance(ret, (TDyn, TOptional)))
        self.funcs[name] = _Func(name, has_param, param_t, ret)
        return FuncDef(name, param, surface(ret), stmts)

    def var_def(self, index: int) -> VarDef:
        body = _Body(typed=True, ret=DYN)
        t = self.annotate(self.pick_type())
        init, _ = self.expr(body, t, self.cfg.max_expr_depth)
        name = f"g{index}"
        self.globals[name] = t
        return VarDef(name, surface(t), init)

    def top_expr(self) -> ExprStmt:
        body = _Body(typed=True, ret=DYN)
        if self.rng.random() < 0.2:
            stmt = self.set_stmt(body, self.cfg.max_expr_depth)
            if isinstance(stmt, ExprStmt) and isinstance(stmt.expr, SubscriptSet):
                return stmt
        e, _ = self.expr(body, self.pick_type(), self.cfg.max_expr_depth)
        return ExprStmt(e)

    def generate(self) -> Program:
        rng = self.rng
        stmts: list = []
        for index in range(rng.randint(0, self.cfg.max_classes)):
            stmts.append(self.class_def(index))
        budget = rng.randint(1, self.cfg.max_top_stmts)
        for index in range(budget):
            roll = rng.random()
            if roll < 0.3:
                stmts.append(self.var_def(index))
            elif roll < 0.65:
                stmts.append(self.func_def(index))
            else:
                stmts.append(self.top_expr())
        stmts.append(self.top_expr())
        return Program(tuple(stmts))


def generate_program(cfg: GenConfig) -> Program:
    """A deterministic random program for ``cfg``."""
    return ProgramGenerator(cfg).generate()
