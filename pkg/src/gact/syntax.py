"""AST for the Lime subset, plus the canonical pretty-printer.

Node equality ignores source positions so structural comparisons (and
the parse/print round-trip property) work on trees from different
layouts of the same program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


def _pos():
    return field(default=0, compare=False)


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Type:
    kind: str                      # "int" | "bool" | "ref"
    class_name: Optional[str] = None

    def __str__(self) -> str:
        return self.class_name if self.kind == "ref" else self.kind


INT = Type("int")
BOOL = Type("bool")


def ref_type(class_name: str) -> Type:
    return Type("ref", class_name)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass
class IntLit:
    value: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class BoolLit:
    value: bool
    line: int = _pos()
    col: int = _pos()


@dataclass
class NilLit:
    line: int = _pos()
    col: int = _pos()


@dataclass
class Name:
    """A bare identifier; resolved to a field, param, or local later."""
    ident: str
    via_this: bool = False         # written as `this.ident`
    line: int = _pos()
    col: int = _pos()


@dataclass
class ThisExpr:
    line: int = _pos()
    col: int = _pos()


@dataclass
class Unary:
    op: str                        # "not" | "-"
    operand: "Expr"
    line: int = _pos()
    col: int = _pos()


@dataclass
class Binary:
    op: str                        # + - * mod = != < <= > >= and or
    left: "Expr"
    right: "Expr"
    line: int = _pos()
    col: int = _pos()


@dataclass
class Call:
    target: "Expr"                 # receiver; ThisExpr for self-calls
    method: str
    args: list["Expr"]
    line: int = _pos()
    col: int = _pos()


@dataclass
class New:
    class_name: str
    args: list["Expr"]
    line: int = _pos()
    col: int = _pos()


Expr = Union[IntLit, BoolLit, NilLit, Name, ThisExpr, Unary, Binary, Call, New]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass
class Assign:
    """Multiple assignment: all right-hand sides evaluate before any store."""
    targets: list[Name]
    values: list[Expr]
    line: int = _pos()
    col: int = _pos()


@dataclass
class If:
    arms: list[tuple[Expr, list["Stmt"]]]   # if/elif conditions with blocks
    orelse: list["Stmt"]
    line: int = _pos()
    col: int = _pos()


@dataclass
class While:
    cond: Expr
    body: list["Stmt"]
    line: int = _pos()
    col: int = _pos()


@dataclass
class Return:
    value: Optional[Expr]
    line: int = _pos()
    col: int = _pos()


@dataclass
class ExprStmt:
    """A bare call used as a statement."""
    call: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class Print:
    value: Expr
    line: int = _pos()
    col: int = _pos()


Stmt = Union[Assign, If, While, Return, ExprStmt, Print]


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass
class Param:
    name: str
    type: Type
    line: int = _pos()
    col: int = _pos()


@dataclass
class FieldDecl:
    name: str
    type: Type
    line: int = _pos()
    col: int = _pos()


@dataclass
class InitDecl:
    params: list[Param]
    body: list[Stmt]
    line: int = _pos()
    col: int = _pos()


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    return_type: Optional[Type]
    guard: Expr                    # literal true when no `when` clause
    body: list[Stmt]
    line: int = _pos()
    col: int = _pos()


@dataclass
class ActionDecl:
    name: str
    guard: Expr
    body: list[Stmt]
    line: int = _pos()
    col: int = _pos()


@dataclass
class ClassDecl:
    name: str
    fields: list[FieldDecl]
    init: Optional[InitDecl]
    methods: list[MethodDecl]
    actions: list[ActionDecl]
    line: int = _pos()
    col: int = _pos()


@dataclass
class Program:
    classes: list[ClassDecl]
    entry: str = "Start"


# ---------------------------------------------------------------------------
# Pretty-printer (canonical 4-space layout)
# ---------------------------------------------------------------------------

_PREC = {
    "or": 1, "and": 2,
    "=": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "mod": 6,
}
_NOT_PREC = 3
_NEG_PREC = 7

_DEFAULT_GUARD = BoolLit(True)


def expr_to_source(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, NilLit):
        return "nil"
    if isinstance(e, ThisExpr):
        return "this"
    if isinstance(e, Name):
        return f"this.{e.ident}" if e.via_this else e.ident
    if isinstance(e, Unary):
        prec = _NOT_PREC if e.op == "not" else _NEG_PREC
        inner = expr_to_source(e.operand, prec)
        text = f"not {inner}" if e.op == "not" else f"-{inner}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, Binary):
        prec = _PREC[e.op]
        left = expr_to_source(e.left, prec)
        # Left-associative: the right operand needs one level more.
        right = expr_to_source(e.right, prec + 1)
        text = f"{left} {e.op} {right}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, Call):
        args = ", ".join(expr_to_source(a) for a in e.args)
        return f"{expr_to_source(e.target, 99)}.{e.method}({args})"
    if isinstance(e, New):
        args = ", ".join(expr_to_source(a) for a in e.args)
        return f"new {e.class_name}({args})"
    raise TypeError(f"unknown expression node {e!r}")


def _stmt_lines(s: Stmt, depth: int, out: list[str]) -> None:
    pad = "    " * depth
    if isinstance(s, Assign):
        targets = ", ".join(expr_to_source(t) for t in s.targets)
        values = ", ".join(expr_to_source(v) for v in s.values)
        out.append(f"{pad}{targets} := {values}")
    elif isinstance(s, If):
        for i, (cond, block) in enumerate(s.arms):
            kw = "if" if i == 0 else "elif"
            out.append(f"{pad}{kw} {expr_to_source(cond)} then")
            _block_lines(block, depth + 1, out)
        if s.orelse:
            out.append(f"{pad}else")
            _block_lines(s.orelse, depth + 1, out)
    elif isinstance(s, While):
        out.append(f"{pad}while {expr_to_source(s.cond)} do")
        _block_lines(s.body, depth + 1, out)
    elif isinstance(s, Return):
        out.append(f"{pad}return" if s.value is None
                   else f"{pad}return {expr_to_source(s.value)}")
    elif isinstance(s, ExprStmt):
        out.append(f"{pad}{expr_to_source(s.call)}")
    elif isinstance(s, Print):
        out.append(f"{pad}print({expr_to_source(s.value)})")
    else:
        raise TypeError(f"unknown statement node {s!r}")


def _block_lines(block: list[Stmt], depth: int, out: list[str]) -> None:
    for s in block:
        _stmt_lines(s, depth, out)


def _guarded_body_lines(guard: Expr, body: list[Stmt], depth: int, out: list[str]) -> None:
    if guard == _DEFAULT_GUARD:
        _block_lines(body, depth, out)
    else:
        out.append("    " * depth + f"when {expr_to_source(guard)} do")
        _block_lines(body, depth + 1, out)


def _params_to_source(params: list[Param]) -> str:
    return ", ".join(f"{p.name}: {p.type}" for p in params)


def to_source(program: Program) -> str:
    """Canonical source text; parsing it back yields an equal AST."""
    out: list[str] = []
    for cls in program.classes:
        out.append(f"class {cls.name}")
        for f in cls.fields:
            out.append(f"    var {f.name}: {f.type}")
        if cls.init is not None:
            out.append(f"    init({_params_to_source(cls.init.params)})")
            _block_lines(cls.init.body, 2, out)
        for m in cls.methods:
            ret = f": {m.return_type}" if m.return_type is not None else ""
            out.append(f"    method {m.name}({_params_to_source(m.params)}){ret}")
            _guarded_body_lines(m.guard, m.body, 2, out)
        for a in cls.actions:
            out.append(f"    action {a.name}")
            _guarded_body_lines(a.guard, a.body, 2, out)
    return "\n".join(out) + "\n"
