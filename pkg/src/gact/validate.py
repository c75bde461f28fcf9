"""Name resolution, type checking, and guard-restriction checks.

Validation is total: it walks the whole program and collects every
diagnostic instead of stopping at the first. On success it returns the
symbol information (field slots, local slots, inferred local types)
that compilation and the runtime build on.

Name resolution inside a procedure: parameters shadow fields; any other
name is the declared field of the enclosing class if one exists, and
otherwise a procedure-local variable implicitly declared by its first
assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .syntax import (
    BOOL, INT, ActionDecl, Assign, Binary, BoolLit, Call, ClassDecl,
    Expr, ExprStmt, If, InitDecl, IntLit, MethodDecl, Name, New, NilLit,
    Print, Program, Return, Stmt, ThisExpr, Type, Unary, While,
)

NIL_T = Type("nil")
_ERR = Type("error")   # poisoned type; suppresses cascading diagnostics


@dataclass
class Diagnostic:
    line: int
    col: int
    message: str

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.message}"


@dataclass
class ProcInfo:
    """Resolved symbols of one init/method/action body."""
    kind: str                       # "init" | "method" | "action"
    name: str
    class_name: str
    param_types: list[Type]
    return_type: Type | None
    local_slots: dict[str, int]    # params occupy the first slots
    local_types: dict[str, Type]
    param_names: frozenset[str] = frozenset()

    @property
    def n_locals(self) -> int:
        return len(self.local_slots)


@dataclass
class ClassInfo:
    decl: ClassDecl
    index: int
    field_slots: dict[str, int]
    field_types: dict[str, Type]
    methods: dict[str, MethodDecl]
    procs: dict[str, ProcInfo] = dc_field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def has_actions(self) -> bool:
        return bool(self.decl.actions)


@dataclass
class CheckedProgram:
    program: Program
    classes: dict[str, ClassInfo]
    class_order: list[str]

    def class_info(self, name: str) -> ClassInfo:
        return self.classes[name]


class ValidationError(Exception):
    """Raised by helpers that need a validated program but got diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics[:3]))
        self.diagnostics = diagnostics


def validate(program: Program, require_start: bool = False
             ) -> tuple[CheckedProgram | None, list[Diagnostic]]:
    v = _Validator(program)
    checked = v.run(require_start=require_start)
    return (checked if not v.diagnostics else None), v.diagnostics


def validate_or_raise(program: Program, require_start: bool = False) -> CheckedProgram:
    checked, diagnostics = validate(program, require_start=require_start)
    if checked is None:
        raise ValidationError(diagnostics)
    return checked


def _compatible(expected: Type, actual: Type) -> bool:
    if expected is _ERR or actual is _ERR:
        return True
    if actual == NIL_T:
        return expected.kind == "ref"
    return expected == actual


class _Validator:
    def __init__(self, program: Program):
        self.program = program
        self.diagnostics: list[Diagnostic] = []
        self.classes: dict[str, ClassInfo] = {}

    def diag(self, node, message: str) -> None:
        self.diagnostics.append(
            Diagnostic(getattr(node, "line", 0), getattr(node, "col", 0), message)
        )

    # -- program level ------------------------------------------------------

    def run(self, require_start: bool) -> CheckedProgram | None:
        order: list[str] = []
        for i, cls in enumerate(self.program.classes):
            if cls.name in self.classes:
                self.diag(cls, f"duplicate class name {cls.name}")
                continue
            self.classes[cls.name] = self._class_header(cls, i)
            order.append(cls.name)

        if require_start:
            start = self.classes.get("Start")
            if start is None:
                self.diag(self.program.classes[0] if self.program.classes
                          else Name("", line=1, col=1),
                          "no Start class")
            elif start.decl.init is not None and start.decl.init.params:
                self.diag(start.decl.init, "Start init must take no parameters")

        for name in order:
            self._check_class(self.classes[name])

        return CheckedProgram(self.program, self.classes, order)

    def _class_header(self, cls: ClassDecl, index: int) -> ClassInfo:
        field_slots: dict[str, int] = {}
        field_types: dict[str, Type] = {}
        for f in cls.fields:
            if f.name in field_slots:
                self.diag(f, f"duplicate field {f.name} in class {cls.name}")
                continue
            field_slots[f.name] = len(field_slots)
            field_types[f.name] = f.type
        methods: dict[str, MethodDecl] = {}
        seen = set(field_slots)
        for m in cls.methods:
            if m.name in methods or m.name in seen:
                self.diag(m, f"duplicate member name {m.name} in class {cls.name}")
                continue
            methods[m.name] = m
            seen.add(m.name)
        for a in cls.actions:
            if a.name in seen:
                self.diag(a, f"duplicate member name {a.name} in class {cls.name}")
            seen.add(a.name)
        return ClassInfo(cls, index, field_slots, field_types, methods)

    # -- class level ----------------------------------------------------------

    def _check_class(self, info: ClassInfo) -> None:
        cls = info.decl
        for f in cls.fields:
            if f.type.kind == "ref" and f.type.class_name not in self.classes:
                self.diag(f, f"unknown class {f.type.class_name} in field type")

        if cls.init is not None:
            info.procs["init"] = self._check_proc(
                info, "init", "init", cls.init.params, None, None, cls.init.body)
        else:
            info.procs["init"] = ProcInfo("init", "init", cls.name, [], None, {}, {})

        for m in cls.methods:
            if m.name not in info.methods:
                continue   # duplicate already reported
            self._check_guard(info, m.guard)
            info.procs[f"m:{m.name}"] = self._check_proc(
                info, "method", m.name, m.params, m.return_type, m.guard, m.body)
        for a in cls.actions:
            self._check_guard(info, a.guard)
            info.procs[f"a:{a.name}"] = self._check_proc(
                info, "action", a.name, [], None, a.guard, a.body)

    def _check_guard(self, info: ClassInfo, guard: Expr) -> None:
        for node, kind in _walk_expr(guard):
            if kind == "call":
                self.diag(node, "guard must not contain method calls")
            elif kind == "new":
                self.diag(node, "guard must not create objects")
            elif kind == "this":
                self.diag(node, "guard may only use fields and literals")
            elif kind == "name":
                assert isinstance(node, Name)
                if node.ident not in info.field_slots:
                    self.diag(node, f"guard references non-field {node.ident}")

    def _check_proc(self, info: ClassInfo, kind: str, name: str,
                    params, return_type, guard, body) -> ProcInfo:
        if guard is not None:
            gt = _GuardTyper(self, info).type_of(guard)
            if gt not in (BOOL, _ERR):
                self.diag(guard, "guard must be a boolean expression")
        ret = return_type
        if ret is not None and ret.kind == "ref" and ret.class_name not in self.classes:
            self.diag(info.decl, f"unknown class {ret.class_name} in return type")

        proc = ProcInfo(kind, name, info.name, [p.type for p in params], ret, {}, {})
        body_checker = _BodyChecker(self, info, proc)
        for p in params:
            if p.type.kind == "ref" and p.type.class_name not in self.classes:
                self.diag(p, f"unknown class {p.type.class_name} in parameter type")
            if p.name in proc.local_slots:
                self.diag(p, f"duplicate parameter {p.name}")
                continue
            proc.local_slots[p.name] = len(proc.local_slots)
            proc.local_types[p.name] = p.type
        proc.param_names = frozenset(proc.local_slots)
        body_checker.check_block(body)
        return proc


def _walk_expr(e: Expr):
    """Yield (node, kind) pairs for guard-restriction scanning."""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Call):
            yield node, "call"
            stack.append(node.target)
            stack.extend(node.args)
        elif isinstance(node, New):
            yield node, "new"
            stack.extend(node.args)
        elif isinstance(node, ThisExpr):
            yield node, "this"
        elif isinstance(node, Name):
            yield node, "name"
        elif isinstance(node, Unary):
            stack.append(node.operand)
        elif isinstance(node, Binary):
            stack.append(node.left)
            stack.append(node.right)


class _GuardTyper:
    """Types guard expressions (fields and literals only)."""

    def __init__(self, v: _Validator, info: ClassInfo):
        self.v = v
        self.info = info

    def type_of(self, e: Expr) -> Type:
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, NilLit):
            return NIL_T
        if isinstance(e, Name):
            return self.info.field_types.get(e.ident, _ERR)
        if isinstance(e, Unary):
            return _type_unary(self.v, e, self.type_of(e.operand))
        if isinstance(e, Binary):
            return _type_binary(self.v, e, self.type_of(e.left), self.type_of(e.right))
        return _ERR   # call/new/this already diagnosed by _check_guard


def _type_unary(v: _Validator, e: Unary, t: Type) -> Type:
    if e.op == "not":
        if t not in (BOOL, _ERR):
            v.diag(e, "not requires a boolean operand")
            return _ERR
        return BOOL
    if t not in (INT, _ERR):
        v.diag(e, "unary - requires an integer operand")
        return _ERR
    return INT


def _type_binary(v: _Validator, e: Binary, lt: Type, rt: Type) -> Type:
    if lt is _ERR or rt is _ERR:
        return _ERR
    if e.op in ("+", "-", "*", "mod"):
        if lt != INT or rt != INT:
            v.diag(e, f"{e.op} requires integer operands")
            return _ERR
        return INT
    if e.op in ("<", "<=", ">", ">="):
        if lt != INT or rt != INT:
            v.diag(e, f"{e.op} requires integer operands")
            return _ERR
        return BOOL
    if e.op in ("and", "or"):
        if lt != BOOL or rt != BOOL:
            v.diag(e, f"{e.op} requires boolean operands")
            return _ERR
        return BOOL
    # = and != : both ints, both bools, or reference identity (nil allowed)
    if lt == INT and rt == INT:
        return BOOL
    if lt == BOOL and rt == BOOL:
        return BOOL
    lref = lt.kind in ("ref", "nil")
    rref = rt.kind in ("ref", "nil")
    if lref and rref:
        if lt.kind == "ref" and rt.kind == "ref" and lt != rt:
            v.diag(e, f"cannot compare references of classes {lt} and {rt}")
            return _ERR
        return BOOL
    v.diag(e, f"cannot compare {lt} with {rt}")
    return _ERR


class _BodyChecker:
    def __init__(self, v: _Validator, info: ClassInfo, proc: ProcInfo):
        self.v = v
        self.info = info
        self.proc = proc

    def diag(self, node, message: str) -> None:
        self.v.diag(node, message)

    # -- statements -----------------------------------------------------------

    def check_block(self, block: list[Stmt]) -> None:
        for s in block:
            self.check_stmt(s)

    def check_stmt(self, s: Stmt) -> None:
        if isinstance(s, Assign):
            self.check_assign(s)
        elif isinstance(s, If):
            for cond, block in s.arms:
                self.expect_bool(cond, "if condition")
                self.check_block(block)
            self.check_block(s.orelse)
        elif isinstance(s, While):
            self.expect_bool(s.cond, "while condition")
            self.check_block(s.body)
        elif isinstance(s, Return):
            self.check_return(s)
        elif isinstance(s, ExprStmt):
            self.type_of(s.call)
        elif isinstance(s, Print):
            t = self.type_of(s.value)
            if t not in (INT, _ERR):
                self.diag(s, "print takes an integer expression")
        else:
            raise TypeError(f"unknown statement {s!r}")

    def check_assign(self, s: Assign) -> None:
        if len(s.targets) != len(s.values):
            self.diag(s, f"assignment arity mismatch: {len(s.targets)} targets, "
                         f"{len(s.values)} values")
        value_types = [self.type_of(e) for e in s.values]
        for i, target in enumerate(s.targets):
            vt = value_types[i] if i < len(value_types) else _ERR
            self.bind_target(target, vt)

    def bind_target(self, target: Name, vt: Type) -> None:
        name = target.ident
        if target.via_this:
            ft = self.info.field_types.get(name)
            if ft is None:
                self.diag(target, f"unknown field {name}")
                return
            if not _compatible(ft, vt):
                self.diag(target, f"cannot assign {vt} to field {name}: {ft}")
            return
        if name in self.proc.param_names:
            lt = self.proc.local_types[name]
            if not _compatible(lt, vt):
                self.diag(target, f"cannot assign {vt} to {name}: {lt}")
            return
        if name in self.info.field_types:
            ft = self.info.field_types[name]
            if not _compatible(ft, vt):
                self.diag(target, f"cannot assign {vt} to field {name}: {ft}")
            return
        if name in self.proc.local_slots:
            lt = self.proc.local_types[name]
            if not _compatible(lt, vt):
                self.diag(target, f"cannot assign {vt} to {name}: {lt}")
            return
        # first assignment declares a local; nil alone gives no class
        if vt == NIL_T:
            self.diag(target, f"cannot infer a type for {name} from nil; "
                              "assign an object first")
            vt = _ERR
        self.proc.local_slots[name] = len(self.proc.local_slots)
        self.proc.local_types[name] = vt

    def check_return(self, s: Return) -> None:
        ret = self.proc.return_type
        if self.proc.kind in ("init", "action"):
            if s.value is not None:
                self.diag(s, f"{self.proc.kind} cannot return a value")
            return
        if ret is None:
            if s.value is not None:
                self.diag(s, "method has no return type but returns a value")
            return
        if s.value is None:
            self.diag(s, f"method must return a value of type {ret}")
            return
        vt = self.type_of(s.value)
        if not _compatible(ret, vt):
            self.diag(s, f"return type mismatch: expected {ret}, got {vt}")

    def expect_bool(self, e: Expr, what: str) -> None:
        t = self.type_of(e)
        if t not in (BOOL, _ERR):
            self.diag(e, f"{what} must be boolean")

    # -- expressions ----------------------------------------------------------

    def type_of(self, e: Expr) -> Type:
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, NilLit):
            return NIL_T
        if isinstance(e, ThisExpr):
            return Type("ref", self.info.name)
        if isinstance(e, Name):
            return self.type_of_name(e)
        if isinstance(e, Unary):
            return _type_unary(self.v, e, self.type_of(e.operand))
        if isinstance(e, Binary):
            return _type_binary(self.v, e, self.type_of(e.left), self.type_of(e.right))
        if isinstance(e, Call):
            return self.type_of_call(e)
        if isinstance(e, New):
            return self.type_of_new(e)
        raise TypeError(f"unknown expression {e!r}")

    def type_of_name(self, e: Name) -> Type:
        name = e.ident
        if e.via_this:
            ft = self.info.field_types.get(name)
            if ft is None:
                self.diag(e, f"unknown field {name}")
                return _ERR
            return ft
        if name in self.proc.param_names:
            return self.proc.local_types[name]
        if name in self.info.field_types:
            return self.info.field_types[name]
        if name in self.proc.local_slots:
            return self.proc.local_types[name]
        self.diag(e, f"unresolved name {name}")
        return _ERR

    def type_of_call(self, e: Call) -> Type:
        tt = self.type_of(e.target)
        arg_types = [self.type_of(a) for a in e.args]
        if tt is _ERR:
            return _ERR
        if tt == NIL_T or tt.kind != "ref":
            self.diag(e, f"cannot call a method on {tt}")
            return _ERR
        cls = self.v.classes.get(tt.class_name)
        if cls is None:
            return _ERR
        m = cls.methods.get(e.method)
        if m is None:
            self.diag(e, f"class {tt.class_name} has no method {e.method}")
            return _ERR
        self._check_args(e, f"method {e.method}", [p.type for p in m.params], arg_types)
        return m.return_type if m.return_type is not None else Type("void")

    def type_of_new(self, e: New) -> Type:
        arg_types = [self.type_of(a) for a in e.args]
        cls = self.v.classes.get(e.class_name)
        if cls is None:
            self.diag(e, f"unknown class {e.class_name}")
            return _ERR
        init = cls.decl.init
        param_types = [p.type for p in init.params] if init is not None else []
        self._check_args(e, f"init of {e.class_name}", param_types, arg_types)
        return Type("ref", e.class_name)

    def _check_args(self, e, what: str, expected: list[Type], actual: list[Type]) -> None:
        if len(expected) != len(actual):
            self.diag(e, f"{what} takes {len(expected)} arguments, got {len(actual)}")
            return
        for i, (ex, ac) in enumerate(zip(expected, actual)):
            if not _compatible(ex, ac):
                self.diag(e, f"{what} argument {i + 1}: expected {ex}, got {ac}")
