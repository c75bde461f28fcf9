"""Tokenizer for Lime-subset source.

Lime brackets blocks by indentation, so the token stream carries
synthetic INDENT/DEDENT tokens. Any consistent indentation is accepted;
levels that do not nest (e.g. tab/space mixes that are not prefixes of
each other) are errors.
"""

from __future__ import annotations

from enum import Enum, unique
from typing import NamedTuple


@unique
class TokenType(Enum):
    KEYWORD = "keyword"
    IDENT = "ident"
    NUMBER = "number"
    OP = "op"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    EOF = "eof"

    def __repr__(self) -> str:
        return self._name_


class Token(NamedTuple):
    type: TokenType
    text: str
    line: int
    col: int


class SourceError(Exception):
    """Syntax-level error with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.message}"


KEYWORDS = frozenset(
    {
        "class", "var", "init", "method", "action",
        "when", "do", "if", "then", "elif", "else", "while",
        "return", "new", "print",
        "not", "and", "or", "mod",
        "true", "false", "nil",
        "int", "bool", "this",
    }
)

# Longest first so two-char operators win over their one-char prefixes.
_OPERATORS = (":=", "!=", "<=", ">=", "(", ")", ":", ",", ".", "=", "<", ">", "+", "-", "*")


def tokenize(source: str) -> list[Token]:
    """Scan source text into tokens, inserting INDENT/DEDENT pairs.

    Blank and comment-only lines contribute no tokens. The returned
    stream always ends with balanced DEDENTs and a single EOF.
    """
    tokens: list[Token] = []
    indents = [""]

    for line_no, raw in enumerate(source.split("\n"), start=1):
        body = raw
        i = 0
        while i < len(body) and body[i] in " \t":
            i += 1
        indent, rest = body[:i], body[i:]
        if rest == "" or rest.startswith("#"):
            continue

        top = indents[-1]
        if indent != top:
            if indent.startswith(top):
                indents.append(indent)
                tokens.append(Token(TokenType.INDENT, indent, line_no, 1))
            elif top.startswith(indent):
                while indents[-1] != indent:
                    if not indents[-1].startswith(indent):
                        raise SourceError(
                            "unindent does not match any outer level", line_no, 1
                        )
                    indents.pop()
                    tokens.append(Token(TokenType.DEDENT, "", line_no, 1))
            else:
                raise SourceError(
                    "inconsistent indentation (mix of tabs and spaces does not nest)",
                    line_no,
                    1,
                )

        _scan_line(rest, line_no, i + 1, tokens)
        last = tokens[-1]
        tokens.append(Token(TokenType.NEWLINE, "", line_no, last.col + len(last.text)))

    final_line = source.count("\n") + 1
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token(TokenType.DEDENT, "", final_line, 1))
    tokens.append(Token(TokenType.EOF, "", final_line, 1))
    return tokens


def _scan_line(text: str, line_no: int, start_col: int, out: list[Token]) -> None:
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        col = start_col + pos
        if ch in " \t":
            pos += 1
            continue
        if ch == "#":
            return
        if ch.isdigit():
            end = pos
            while end < n and text[end].isdigit():
                end += 1
            out.append(Token(TokenType.NUMBER, text[pos:end], line_no, col))
            pos = end
            continue
        if ch.isalpha() or ch == "_":
            end = pos
            while end < n and (text[end].isalnum() or text[end] == "_"):
                end += 1
            word = text[pos:end]
            kind = TokenType.KEYWORD if word in KEYWORDS else TokenType.IDENT
            out.append(Token(kind, word, line_no, col))
            pos = end
            continue
        for op in _OPERATORS:
            if text.startswith(op, pos):
                out.append(Token(TokenType.OP, op, line_no, col))
                pos += len(op)
                break
        else:
            raise SourceError(f"illegal character {ch!r}", line_no, col)
