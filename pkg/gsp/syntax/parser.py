"""Parser for ``.gsp`` source text.

Parsing runs in three steps: lark builds a parse tree with the LALR parser
and an indentation post-lexer, ``_AstBuilder`` turns the tree into syntax
nodes, and ``_Resolver`` validates scoping (declare-before-use, block-scoped
locals, ``break`` placement) and decides whether each ``x = e`` defines or
assigns a local.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import (
    LarkError,
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)
from lark.indenter import DedentError, Indenter

from gsp.core.errors import GspSyntaxError
from gsp.schemas.diagnostic import E_SYNTAX, Diagnostic
from gsp.syntax.nodes import (
    OBJECT_CLASS,
    Assign,
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
    Span,
    StrLit,
    Subscript,
    SubscriptSet,
    SurfaceType,
    Var,
    VarDef,
    While,
)

logger = logging.getLogger(__name__)

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n"}


class GspIndenter(Indenter):
    NL_type = "_NL"
    OPEN_PAREN_types = ["LPAR", "LSQB", "LBRACE"]
    CLOSE_PAREN_types = ["RPAR", "RSQB", "RBRACE"]
    INDENT_type = "_INDENT"
    DEDENT_type = "_DEDENT"
    tab_len = 4


@lru_cache(maxsize=1)
def _lark() -> Lark:
    grammar = Path(__file__).with_name("grammar.lark").read_text(encoding="utf-8")
    return Lark(
        grammar,
        parser="lalr",
        postlex=GspIndenter(),
        propagate_positions=True,
        maybe_placeholders=True,
    )


class _Issue(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(message)
        self.message = message
        self.span = span


# Intermediate nodes that only live between the builder and the resolver.


@dataclass(frozen=True)
class _RawAssign:
    name: str
    value: Expr
    span: Span


@dataclass(frozen=True)
class _RawParam:
    name: str
    ann: Optional[SurfaceType]
    span: Span


@dataclass(frozen=True)
class _RawDef:
    name: str
    params: Tuple[_RawParam, ...]
    ret: SurfaceType
    body: tuple
    span: Span


@dataclass(frozen=True)
class _RawClass:
    name: str
    parent: str
    dynamic: bool
    members: tuple
    span: Span


def _span_of(meta) -> Span:
    return Span(getattr(meta, "line", 0), getattr(meta, "column", 0))


def _tok_span(tok: Token) -> Span:
    return Span(tok.line or 0, tok.column or 0)


def _decode_string(tok: Token) -> str:
    body = str(tok)[1:-1]
    out: List[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            esc = body[i + 1]
            if esc not in _ESCAPES:
                raise _Issue(f"unsupported escape sequence '\\{esc}'", _tok_span(tok))
            out.append(_ESCAPES[esc])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _entries(children) -> tuple:
    return tuple(c for c in children if c is not None) if children else ()


@v_args(meta=True)
class _AstBuilder(Transformer):
    """Turns the lark parse tree into syntax nodes."""

    def __init__(self, class_names: Set[str]):
        super().__init__()
        self.class_names = class_names

    # statements

    def start(self, meta, children):
        return tuple(children)

    def expr_stmt(self, meta, children):
        return ExprStmt(children[0], span=_span_of(meta))

    def annassign(self, meta, children):
        target, ann, init = children
        if not isinstance(target, Var):
            raise _Issue("only a plain name can be annotated", _span_of(meta))
        return LocalDef(target.name, ann, init, span=_span_of(meta))

    def assign(self, meta, children):
        target, value = children
        span = _span_of(meta)
        if isinstance(target, Var):
            return _RawAssign(target.name, value, span)
        if isinstance(target, Subscript):
            return ExprStmt(SubscriptSet(target.target, target.key, value, span=span), span=span)
        if isinstance(target, FieldGet):
            return ExprStmt(FieldSet(target.target, target.name, value, span=span), span=span)
        raise _Issue("cannot assign to this expression", span)

    def pass_stmt(self, meta, children):
        return Pass(span=_span_of(meta))

    def break_stmt(self, meta, children):
        return Break(span=_span_of(meta))

    def return_stmt(self, meta, children):
        return Return(children[0] if children else None, span=_span_of(meta))

    def funcdef(self, meta, children):
        name, params, ret, body = children
        return _RawDef(
            str(name),
            tuple(params or ()),
            ret if ret is not None else SDyn(),
            body,
            _tok_span(name),
        )

    def params(self, meta, children):
        return tuple(children)

    def param(self, meta, children):
        name, ann = children
        return _RawParam(str(name), ann, _tok_span(name))

    def classdef(self, meta, children):
        dyn, name, parent = children[:3]
        return _RawClass(
            str(name),
            str(parent) if parent is not None else OBJECT_CLASS,
            dyn is not None,
            tuple(children[3:]),
            _tok_span(name),
        )

    def field_decl(self, meta, children):
        name, ann, default = children
        return FieldDecl(str(name), ann, default, span=_tok_span(name))

    def if_stmt(self, meta, children):
        cond, then, orelse = children
        return If(cond, then, orelse if orelse is not None else (), span=_span_of(meta))

    def elif_part(self, meta, children):
        cond, then, orelse = children
        nested = If(cond, then, orelse if orelse is not None else (), span=_span_of(meta))
        return (nested,)

    def while_stmt(self, meta, children):
        cond, body = children
        return While(cond, body, span=_span_of(meta))

    def suite(self, meta, children):
        return tuple(children)

    # expressions

    def not_op(self, meta, children):
        return Not(children[0], span=_span_of(meta))

    def eq(self, meta, children):
        return Eq(children[0], children[1], span=_span_of(meta))

    def is_none(self, meta, children):
        return IsNone(children[0], span=_span_of(meta))

    def is_not_none(self, meta, children):
        span = _span_of(meta)
        return Not(IsNone(children[0], span=span), span=span)

    def subscript(self, meta, children):
        return Subscript(children[0], children[1], span=_span_of(meta))

    def field_get(self, meta, children):
        return FieldGet(children[0], str(children[1]), span=_span_of(meta))

    def method_call(self, meta, children):
        target, name, arg = children
        return MethodCall(target, str(name), arg, span=_span_of(meta))

    def var(self, meta, children):
        return Var(str(children[0]), span=_span_of(meta))

    def call(self, meta, children):
        name, arg = children
        if str(name) in self.class_names:
            return New(str(name), arg, span=_span_of(meta))
        return Call(str(name), arg, span=_span_of(meta))

    def none_lit(self, meta, children):
        return NoneLit(span=_span_of(meta))

    def true_lit(self, meta, children):
        return BoolLit(True, span=_span_of(meta))

    def false_lit(self, meta, children):
        return BoolLit(False, span=_span_of(meta))

    def int_lit(self, meta, children):
        value = int(children[0])
        if not INT_MIN <= value <= INT_MAX:
            raise _Issue("integer literal out of 64-bit range", _span_of(meta))
        return IntLit(value, span=_span_of(meta))

    def str_lit(self, meta, children):
        return StrLit(_decode_string(children[0]), span=_span_of(meta))

    def dict_lit(self, meta, children):
        return DictLit(_entries(children[0] if children else None), span=_span_of(meta))

    def chkdict_lit(self, meta, children):
        key_ann, val_ann, entries = children
        return ChkDictLit(key_ann, val_ann, _entries(entries), span=_span_of(meta))

    def entries(self, meta, children):
        return tuple(c for c in children if c is not None)

    def entry(self, meta, children):
        return (children[0], children[1])

    # types

    def t_dyn(self, meta, children):
        return SDyn()

    def t_none(self, meta, children):
        return SNone()

    def t_name(self, meta, children):
        name = str(children[0])
        if name == "int":
            return SInt()
        if name == "bool":
            return SBool()
        if name == "str":
            return SStr()
        if name == "Dict":
            return SDict(SDyn(), SDyn())
        if name in ("Optional", "Union", "CheckedDict"):
            raise _Issue(f"'{name}' requires type arguments", _span_of(meta))
        return SClass(name)

    def t_checked(self, meta, children):
        return SCheckedDict(children[0], children[1])

    def t_generic(self, meta, children):
        name, args = str(children[0]), tuple(children[1:])
        if name == "Dict" and len(args) == 2:
            return SDict(args[0], args[1])
        if name == "Optional" and len(args) == 1:
            return SUnion((SNone(), args[0]))
        if name == "Union":
            return SUnion(args)
        raise _Issue(f"unsupported type constructor '{name}[...]' with {len(args)} argument(s)", _span_of(meta))


class _Scope:
    """Visible local names, one frame per block."""

    def __init__(self, names: Iterable[str] = ()):
        self.frames: List[Set[str]] = [set(names)]

    def visible(self, name: str) -> bool:
        return any(name in frame for frame in self.frames)

    def define(self, name: str) -> None:
        self.frames[-1].add(name)

    def push(self) -> None:
        self.frames.append(set())

    def pop(self) -> None:
        self.frames.pop()


@dataclass
class _Context:
    index: int
    owner: Optional[str]
    scope: Optional[_Scope]
    all_locals: Set[str]
    loop_depth: int = 0


class _Resolver:
    """Validates scoping rules and settles local definitions vs assignments."""

    def __init__(self):
        self.diagnostics: List[Diagnostic] = []
        self.top: dict = {}
        self.class_names: Set[str] = set()

    def error(self, message: str, span: Span) -> None:
        self.diagnostics.append(Diagnostic(code=E_SYNTAX, message=message, line=span.line, col=span.col))

    def resolve(self, raw: Sequence) -> Program:
        for index, stmt in enumerate(raw):
            name = self._declared_name(stmt)
            if name is None:
                continue
            if name in self.top or name == OBJECT_CLASS:
                self.error(f"duplicate top-level name '{name}'", stmt.span)
                continue
            self.top[name] = (index, type(stmt))
            if isinstance(stmt, _RawClass):
                self.class_names.add(name)

        stmts = []
        for index, stmt in enumerate(raw):
            out = self._top_stmt(index, stmt)
            if out is not None:
                stmts.append(out)
        return Program(tuple(stmts))

    @staticmethod
    def _declared_name(stmt) -> Optional[str]:
        if isinstance(stmt, (_RawDef, _RawClass, LocalDef)):
            return stmt.name
        return None

    def _top_stmt(self, index: int, stmt):
        ctx = _Context(index=index, owner=None, scope=None, all_locals=set())
        if isinstance(stmt, LocalDef):
            return VarDef(stmt.name, stmt.ann, self._expr(stmt.init, ctx), span=stmt.span)
        if isinstance(stmt, ExprStmt):
            return ExprStmt(self._expr(stmt.expr, ctx), span=stmt.span)
        if isinstance(stmt, _RawDef):
            return self._function(index, stmt)
        if isinstance(stmt, _RawClass):
            return self._class(index, stmt)
        if isinstance(stmt, _RawAssign) and stmt.name in self.top:
            return Assign(stmt.name, self._expr(stmt.value, ctx), span=stmt.span)
        if isinstance(stmt, _RawAssign):
            self.error(f"module variable '{stmt.name}' needs a type annotation", stmt.span)
        elif isinstance(stmt, Break):
            self.error("break outside loop", stmt.span)
        elif isinstance(stmt, Return):
            self.error("return outside function", stmt.span)
        else:
            self.error("statement not allowed at module level", stmt.span)
        return None

    def _param(self, raw: _RawParam) -> Param:
        return Param(raw.name, raw.ann if raw.ann is not None else SDyn(), span=raw.span)

    def _function(self, index: int, raw: _RawDef) -> FuncDef:
        if len(raw.params) > 1:
            self.error(f"function '{raw.name}' takes at most one parameter", raw.span)
        param = self._param(raw.params[0]) if raw.params else None
        names = [param.name] if param else []
        body = self._body(index, raw.name, names, raw.body)
        return FuncDef(raw.name, param, raw.ret, body, span=raw.span)

    def _method(self, index: int, owner: str, raw: _RawDef) -> MethodDef:
        params = list(raw.params)
        if not params or params[0].name != "self" or params[0].ann is not None:
            self.error(f"method '{raw.name}' must take an unannotated 'self' first", raw.span)
        else:
            params = params[1:]
        if len(params) > 1:
            self.error(f"method '{raw.name}' takes at most one parameter besides 'self'", raw.span)
        param = self._param(params[0]) if params else None
        names = ["self"] + ([param.name] if param else [])
        body = self._body(index, owner, names, raw.body)
        return MethodDef(raw.name, param, raw.ret, body, span=raw.span)

    def _class(self, index: int, raw: _RawClass) -> Optional[ClassDef]:
        parent = raw.parent
        if parent in self.top:
            p_index, p_kind = self.top[parent]
            if p_kind is not _RawClass:
                self.error(f"'{parent}' is not a class", raw.span)
            elif p_index >= index:
                self.error(f"class '{parent}' used before its declaration", raw.span)
        members = list(raw.members)
        if not members or not isinstance(members[0], FieldDecl):
            self.error(f"class '{raw.name}' must begin with exactly one field declaration", raw.span)
            return None
        field_decl = members[0]
        ctx = _Context(index=index, owner=raw.name, scope=None, all_locals=set())
        field_decl = FieldDecl(
            field_decl.name, field_decl.ann, self._expr(field_decl.default, ctx), span=field_decl.span
        )
        methods = []
        for member in members[1:]:
            if isinstance(member, FieldDecl):
                self.error(f"class '{raw.name}' declares more than one field", member.span)
                continue
            methods.append(self._method(index, raw.name, member))
        return ClassDef(raw.name, parent, raw.dynamic, field_decl, tuple(methods), span=raw.span)

    def _body(self, index: int, owner: str, params: List[str], body: tuple) -> tuple:
        all_locals = set(params) | self._bound_names(body)
        ctx = _Context(index=index, owner=owner, scope=_Scope(params), all_locals=all_locals)
        return self._block(body, ctx)

    def _bound_names(self, body: tuple) -> Set[str]:
        names: Set[str] = set()
        for stmt in body:
            if isinstance(stmt, LocalDef):
                names.add(stmt.name)
            elif isinstance(stmt, _RawAssign) and stmt.name not in self.top:
                names.add(stmt.name)
            elif isinstance(stmt, If):
                names |= self._bound_names(stmt.then) | self._bound_names(stmt.orelse)
            elif isinstance(stmt, While):
                names |= self._bound_names(stmt.body)
        return names

    def _block(self, body: tuple, ctx: _Context) -> tuple:
        out = []
        for stmt in body:
            resolved = self._stmt(stmt, ctx)
            if resolved is not None:
                out.append(resolved)
        return tuple(out)

    def _nested(self, body: tuple, ctx: _Context, loop: bool = False) -> tuple:
        ctx.scope.push()
        if loop:
            ctx.loop_depth += 1
        try:
            return self._block(body, ctx)
        finally:
            ctx.scope.pop()
            if loop:
                ctx.loop_depth -= 1

    def _stmt(self, stmt, ctx: _Context):
        scope = ctx.scope
        if isinstance(stmt, LocalDef):
            init = self._expr(stmt.init, ctx)
            if scope.visible(stmt.name):
                self.error(f"'{stmt.name}' is already defined", stmt.span)
            scope.define(stmt.name)
            return LocalDef(stmt.name, stmt.ann, init, span=stmt.span)
        if isinstance(stmt, _RawAssign):
            value = self._expr(stmt.value, ctx)
            if scope.visible(stmt.name) or stmt.name in self.top:
                return Assign(stmt.name, value, span=stmt.span)
            scope.define(stmt.name)
            return LocalDef(stmt.name, None, value, span=stmt.span)
        if isinstance(stmt, If):
            cond = self._expr(stmt.cond, ctx)
            then = self._nested(stmt.then, ctx)
            orelse = self._nested(stmt.orelse, ctx)
            return If(cond, then, orelse, span=stmt.span)
        if isinstance(stmt, While):
            cond = self._expr(stmt.cond, ctx)
            return While(cond, self._nested(stmt.body, ctx, loop=True), span=stmt.span)
        if isinstance(stmt, Break):
            if ctx.loop_depth == 0:
                self.error("break outside loop", stmt.span)
            return stmt
        if isinstance(stmt, Pass):
            return stmt
        if isinstance(stmt, Return):
            value = self._expr(stmt.value, ctx) if stmt.value is not None else None
            return Return(value, span=stmt.span)
        if isinstance(stmt, ExprStmt):
            return ExprStmt(self._expr(stmt.expr, ctx), span=stmt.span)
        self.error("nested definitions are not supported", stmt.span)
        return None

    def _check_order(self, name: str, span: Span, ctx: _Context) -> None:
        entry = self.top.get(name)
        if entry is None or name == ctx.owner:
            return
        if entry[0] >= ctx.index:
            self.error(f"name '{name}' used before its declaration", span)

    def _expr(self, e: Expr, ctx: _Context) -> Expr:
        if isinstance(e, Var):
            if ctx.scope is not None and ctx.scope.visible(e.name):
                return e
            if e.name in ctx.all_locals:
                self.error(f"local variable '{e.name}' referenced before definition", e.span)
                return e
            self._check_order(e.name, e.span, ctx)
        elif isinstance(e, Call):
            self._check_order(e.fname, e.span, ctx)
            if e.arg is not None:
                self._expr(e.arg, ctx)
        elif isinstance(e, New):
            self._check_order(e.class_name, e.span, ctx)
            if e.arg is not None:
                self._expr(e.arg, ctx)
        else:
            for child in _children(e):
                self._expr(child, ctx)
        return e


def _children(e: Expr) -> List[Expr]:
    if isinstance(e, (DictLit, ChkDictLit)):
        return [part for pair in e.entries for part in pair]
    if isinstance(e, Subscript):
        return [e.target, e.key]
    if isinstance(e, SubscriptSet):
        return [e.target, e.key, e.value]
    if isinstance(e, FieldGet):
        return [e.target]
    if isinstance(e, FieldSet):
        return [e.target, e.value]
    if isinstance(e, MethodCall):
        return [e.target] + ([e.arg] if e.arg is not None else [])
    if isinstance(e, (IsNone, Not)):
        return [e.operand]
    if isinstance(e, Eq):
        return [e.left, e.right]
    if isinstance(e, (Call, New)):
        return [e.arg] if e.arg is not None else []
    return []


def _lark_diagnostic(exc: LarkError) -> Diagnostic:
    if isinstance(exc, UnexpectedEOF):
        message = "unexpected end of input"
    elif isinstance(exc, UnexpectedToken):
        token = exc.token
        if token.type == "_INDENT":
            message = "unexpected indent"
        elif token.type == "_DEDENT":
            message = "unexpected dedent"
        elif token.type == "$END":
            message = "unexpected end of input"
        else:
            message = f"unexpected token {str(token)!r}"
    elif isinstance(exc, UnexpectedCharacters):
        message = f"unexpected character {exc.char!r}"
    elif isinstance(exc, DedentError):
        message = "unindent does not match any outer indentation level"
    else:
        message = str(exc).splitlines()[0] if str(exc) else "syntax error"
    line = getattr(exc, "line", 0) if isinstance(exc, UnexpectedInput) else 0
    col = getattr(exc, "column", 0) if isinstance(exc, UnexpectedInput) else 0
    return Diagnostic(code=E_SYNTAX, message=message, line=max(line or 0, 0), col=max(col or 0, 0))


def parse(source: str) -> Program:
    """Parse source text into a ``Program``; raises ``GspSyntaxError``."""
    if not source.endswith("\n"):
        source += "\n"
    try:
        tree = _lark().parse(source)
    except LarkError as exc:
        raise GspSyntaxError([_lark_diagnostic(exc)]) from None

    class_names = {str(t.children[1]) for t in tree.find_data("classdef")}
    try:
        raw = _AstBuilder(class_names).transform(tree)
    except VisitError as exc:
        orig = exc.orig_exc
        if isinstance(orig, _Issue):
            raise GspSyntaxError(
                [Diagnostic(code=E_SYNTAX, message=orig.message, line=orig.span.line, col=orig.span.col)]
            ) from None
        raise

    resolver = _Resolver()
    program = resolver.resolve(raw)
    if resolver.diagnostics:
        raise GspSyntaxError(resolver.diagnostics)
    logger.debug("parsed %d top-level statements", len(program.stmts))
    return program


def parse_file(path: Path) -> Program:
    return parse(Path(path).read_text(encoding="utf-8"))
