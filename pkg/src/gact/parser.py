"""Recursive-descent parser for the Lime subset.

Grammar notes:
  - A method/action body whose outermost construct is `when g do S`
    becomes guard g with body S; `when` anywhere else is an error.
  - `if c then`, `elif c then`, `else`, `while c do` take either an
    inline simple statement or an indented block.
  - `o.f` field access is only legal on `this`; method calls `o.m(...)`
    may target any expression.
"""

from __future__ import annotations

from .lexer import SourceError, Token, TokenType, tokenize
from .syntax import (
    INT, BOOL, ActionDecl, Assign, Binary, BoolLit, Call, ClassDecl,
    Expr, ExprStmt, FieldDecl, If, InitDecl, IntLit, MethodDecl, Name,
    New, NilLit, Param, Print, Program, Return, Stmt, ThisExpr, Type,
    Unary, While, ref_type,
)

_COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


def parse_source(source: str) -> Program:
    return parse(tokenize(source))


def parse(tokens: list[Token]) -> Program:
    return _Parser(tokens).parse_program()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token primitives ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type is not TokenType.EOF:
            self.pos += 1
        return tok

    def check(self, type_: TokenType, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.type is type_ and (text is None or tok.text == text)

    def accept(self, type_: TokenType, text: str | None = None) -> Token | None:
        if self.check(type_, text):
            return self.advance()
        return None

    def expect(self, type_: TokenType, text: str | None = None, what: str = "") -> Token:
        if self.check(type_, text):
            return self.advance()
        tok = self.peek()
        wanted = what or text or type_.value
        found = tok.text or tok.type.value
        raise SourceError(f"expected {wanted}, found {found!r}", tok.line, tok.col)

    def error(self, message: str, tok: Token | None = None) -> SourceError:
        tok = tok or self.peek()
        return SourceError(message, tok.line, tok.col)

    # -- declarations -------------------------------------------------------

    def parse_program(self) -> Program:
        classes = []
        while not self.check(TokenType.EOF):
            classes.append(self.parse_class())
        return Program(classes=classes)

    def parse_class(self) -> ClassDecl:
        kw = self.expect(TokenType.KEYWORD, "class")
        name = self.expect(TokenType.IDENT, what="class name")
        self.expect(TokenType.NEWLINE)
        self.expect(TokenType.INDENT, what="indented class body")

        fields: list[FieldDecl] = []
        init: InitDecl | None = None
        methods: list[MethodDecl] = []
        actions: list[ActionDecl] = []
        while not self.accept(TokenType.DEDENT):
            if self.check(TokenType.KEYWORD, "var"):
                fields.extend(self.parse_var_decl())
            elif self.check(TokenType.KEYWORD, "init"):
                if init is not None:
                    raise self.error("duplicate init declaration")
                init = self.parse_init()
            elif self.check(TokenType.KEYWORD, "method"):
                methods.append(self.parse_method())
            elif self.check(TokenType.KEYWORD, "action"):
                actions.append(self.parse_action())
            else:
                raise self.error("expected var, init, method, or action")
        return ClassDecl(name.text, fields, init, methods, actions,
                         line=kw.line, col=kw.col)

    def parse_var_decl(self) -> list[FieldDecl]:
        self.expect(TokenType.KEYWORD, "var")
        names = [self.expect(TokenType.IDENT, what="field name")]
        while self.accept(TokenType.OP, ","):
            names.append(self.expect(TokenType.IDENT, what="field name"))
        self.expect(TokenType.OP, ":")
        type_ = self.parse_type()
        self.expect(TokenType.NEWLINE)
        return [FieldDecl(n.text, type_, line=n.line, col=n.col) for n in names]

    def parse_type(self) -> Type:
        tok = self.peek()
        if self.accept(TokenType.KEYWORD, "int"):
            return INT
        if self.accept(TokenType.KEYWORD, "bool"):
            return BOOL
        if tok.type is TokenType.IDENT:
            self.advance()
            return ref_type(tok.text)
        raise self.error("expected a type (int, bool, or a class name)")

    def parse_params(self) -> list[Param]:
        self.expect(TokenType.OP, "(")
        params: list[Param] = []
        if not self.check(TokenType.OP, ")"):
            while True:
                name = self.expect(TokenType.IDENT, what="parameter name")
                self.expect(TokenType.OP, ":")
                params.append(Param(name.text, self.parse_type(),
                                    line=name.line, col=name.col))
                if not self.accept(TokenType.OP, ","):
                    break
        self.expect(TokenType.OP, ")")
        return params

    def parse_init(self) -> InitDecl:
        kw = self.expect(TokenType.KEYWORD, "init")
        params = self.parse_params()
        self.expect(TokenType.NEWLINE)
        body = self.parse_block()
        return InitDecl(params, body, line=kw.line, col=kw.col)

    def parse_method(self) -> MethodDecl:
        kw = self.expect(TokenType.KEYWORD, "method")
        name = self.expect(TokenType.IDENT, what="method name")
        params = self.parse_params()
        return_type = None
        if self.accept(TokenType.OP, ":"):
            return_type = self.parse_type()
        self.expect(TokenType.NEWLINE)
        guard, body = self.parse_guarded_body()
        return MethodDecl(name.text, params, return_type, guard, body,
                          line=kw.line, col=kw.col)

    def parse_action(self) -> ActionDecl:
        kw = self.expect(TokenType.KEYWORD, "action")
        name = self.expect(TokenType.IDENT, what="action name")
        self.expect(TokenType.NEWLINE)
        guard, body = self.parse_guarded_body()
        return ActionDecl(name.text, guard, body, line=kw.line, col=kw.col)

    def parse_guarded_body(self) -> tuple[Expr, list[Stmt]]:
        """Body of a method or action: either `when g do S` alone, or a
        plain block (guard defaults to literal true)."""
        self.expect(TokenType.INDENT, what="indented body")
        if self.check(TokenType.KEYWORD, "when"):
            when_tok = self.advance()
            guard = self.parse_expr()
            self.expect(TokenType.KEYWORD, "do")
            body = self.parse_stmt_or_block()
            if not self.accept(TokenType.DEDENT):
                raise self.error(
                    "when must be the only outermost construct of the body",
                    when_tok,
                )
            return guard, body
        body = self.parse_stmts_until_dedent()
        return BoolLit(True), body

    # -- statements ---------------------------------------------------------

    def parse_block(self) -> list[Stmt]:
        self.expect(TokenType.INDENT, what="indented block")
        return self.parse_stmts_until_dedent()

    def parse_stmts_until_dedent(self) -> list[Stmt]:
        stmts = [self.parse_stmt()]
        while not self.accept(TokenType.DEDENT):
            stmts.append(self.parse_stmt())
        return stmts

    def parse_stmt_or_block(self) -> list[Stmt]:
        """After do (while/when): an inline simple statement or a block."""
        if self.accept(TokenType.NEWLINE):
            return self.parse_block()
        stmt = self.parse_inline_stmt()
        self.expect(TokenType.NEWLINE)
        return [stmt]

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        if self.check(TokenType.KEYWORD, "if"):
            return self.parse_if()
        if self.check(TokenType.KEYWORD, "while"):
            self.advance()
            cond = self.parse_expr()
            self.expect(TokenType.KEYWORD, "do")
            body = self.parse_stmt_or_block()
            return While(cond, body, line=tok.line, col=tok.col)
        if self.check(TokenType.KEYWORD, "when"):
            raise self.error(
                "when is only legal as the outermost construct of a method or action body"
            )
        stmt = self.parse_inline_stmt()
        self.expect(TokenType.NEWLINE)
        return stmt

    def parse_if(self) -> If:
        """if/elif/else where each arm is an indented block or an inline
        simple statement; inline arms may chain elif/else on the same
        line or on the next line at the same indentation."""
        tok = self.expect(TokenType.KEYWORD, "if")
        arms: list[tuple[Expr, list[Stmt]]] = []
        orelse: list[Stmt] = []
        while True:
            cond = self.parse_expr()
            self.expect(TokenType.KEYWORD, "then")
            arms.append((cond, self._parse_arm()))
            if self.check(TokenType.KEYWORD, "elif"):
                self.advance()
                continue
            if self.check(TokenType.KEYWORD, "else"):
                self.advance()
                if self.accept(TokenType.NEWLINE):
                    orelse = self.parse_block()
                else:
                    orelse = [self.parse_inline_stmt()]
                    self.expect(TokenType.NEWLINE)
            break
        return If(arms, orelse, line=tok.line, col=tok.col)

    def _parse_arm(self) -> list[Stmt]:
        """One then-arm; leaves the cursor at a possible elif/else."""
        if self.accept(TokenType.NEWLINE):
            return self.parse_block()
        stmt = self.parse_inline_stmt()
        if self.check(TokenType.KEYWORD, "elif") or self.check(TokenType.KEYWORD, "else"):
            return [stmt]          # chain continues on the same line
        self.expect(TokenType.NEWLINE)
        return [stmt]              # chain may continue at the same indentation

    def parse_inline_stmt(self) -> Stmt:
        """A simple statement without its trailing newline."""
        tok = self.peek()
        if self.check(TokenType.KEYWORD, "return"):
            self.advance()
            value = None
            if not (self.check(TokenType.NEWLINE)
                    or self.check(TokenType.KEYWORD, "elif")
                    or self.check(TokenType.KEYWORD, "else")):
                value = self.parse_expr()
            return Return(value, line=tok.line, col=tok.col)
        if self.check(TokenType.KEYWORD, "print"):
            self.advance()
            self.expect(TokenType.OP, "(")
            value = self.parse_expr()
            self.expect(TokenType.OP, ")")
            return Print(value, line=tok.line, col=tok.col)
        if self.check(TokenType.KEYWORD, "if") or self.check(TokenType.KEYWORD, "while"):
            raise self.error("if/while cannot be used as an inline statement")
        return self.parse_assign_or_call()

    def parse_assign_or_call(self) -> Stmt:
        tok = self.peek()
        first = self.parse_expr()
        if self.check(TokenType.OP, ",") or self.check(TokenType.OP, ":="):
            targets = [self._as_target(first)]
            while self.accept(TokenType.OP, ","):
                targets.append(self._as_target(self.parse_expr()))
            self.expect(TokenType.OP, ":=")
            values = [self.parse_expr()]
            while self.accept(TokenType.OP, ","):
                values.append(self.parse_expr())
            return Assign(targets, values, line=tok.line, col=tok.col)
        if isinstance(first, Call):
            return ExprStmt(first, line=tok.line, col=tok.col)
        raise self.error("expected := or a method call", tok)

    def _as_target(self, e: Expr) -> Name:
        if isinstance(e, Name):
            return e
        raise SourceError(
            "assignment target must be a field or local name",
            getattr(e, "line", 0), getattr(e, "col", 0),
        )

    # -- expressions ----------------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.check(TokenType.KEYWORD, "or"):
            tok = self.advance()
            left = Binary("or", left, self.parse_and(), line=tok.line, col=tok.col)
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.check(TokenType.KEYWORD, "and"):
            tok = self.advance()
            left = Binary("and", left, self.parse_not(), line=tok.line, col=tok.col)
        return left

    def parse_not(self) -> Expr:
        if self.check(TokenType.KEYWORD, "not"):
            tok = self.advance()
            return Unary("not", self.parse_not(), line=tok.line, col=tok.col)
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_additive()
        for op in _COMPARISON_OPS:
            if self.check(TokenType.OP, op):
                tok = self.advance()
                return Binary(op, left, self.parse_additive(),
                              line=tok.line, col=tok.col)
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_multiplicative()
        while self.check(TokenType.OP, "+") or self.check(TokenType.OP, "-"):
            tok = self.advance()
            left = Binary(tok.text, left, self.parse_multiplicative(),
                          line=tok.line, col=tok.col)
        return left

    def parse_multiplicative(self) -> Expr:
        left = self.parse_unary()
        while self.check(TokenType.OP, "*") or self.check(TokenType.KEYWORD, "mod"):
            tok = self.advance()
            left = Binary(tok.text, left, self.parse_unary(),
                          line=tok.line, col=tok.col)
        return left

    def parse_unary(self) -> Expr:
        if self.check(TokenType.OP, "-"):
            tok = self.advance()
            return Unary("-", self.parse_unary(), line=tok.line, col=tok.col)
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_atom()
        while self.accept(TokenType.OP, "."):
            member = self.expect(TokenType.IDENT, what="member name")
            if self.check(TokenType.OP, "("):
                args = self.parse_call_args()
                expr = Call(expr, member.text, args,
                            line=member.line, col=member.col)
            elif isinstance(expr, ThisExpr):
                expr = Name(member.text, via_this=True,
                            line=member.line, col=member.col)
            else:
                raise SourceError(
                    "only an object's own fields can be accessed "
                    "(use a method call to read another object)",
                    member.line, member.col,
                )
        return expr

    def parse_call_args(self) -> list[Expr]:
        self.expect(TokenType.OP, "(")
        args: list[Expr] = []
        if not self.check(TokenType.OP, ")"):
            while True:
                args.append(self.parse_expr())
                if not self.accept(TokenType.OP, ","):
                    break
        self.expect(TokenType.OP, ")")
        return args

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.type is TokenType.NUMBER:
            self.advance()
            return IntLit(int(tok.text), line=tok.line, col=tok.col)
        if tok.type is TokenType.KEYWORD:
            if tok.text == "true":
                self.advance()
                return BoolLit(True, line=tok.line, col=tok.col)
            if tok.text == "false":
                self.advance()
                return BoolLit(False, line=tok.line, col=tok.col)
            if tok.text == "nil":
                self.advance()
                return NilLit(line=tok.line, col=tok.col)
            if tok.text == "this":
                self.advance()
                return ThisExpr(line=tok.line, col=tok.col)
            if tok.text == "new":
                self.advance()
                cls = self.expect(TokenType.IDENT, what="class name")
                args = self.parse_call_args()
                return New(cls.text, args, line=tok.line, col=tok.col)
        if tok.type is TokenType.IDENT:
            self.advance()
            return Name(tok.text, line=tok.line, col=tok.col)
        if self.accept(TokenType.OP, "("):
            expr = self.parse_expr()
            self.expect(TokenType.OP, ")")
            return expr
        raise self.error(f"expected an expression, found {tok.text or tok.type.value!r}")
