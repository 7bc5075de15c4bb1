#!/usr/bin/env python3
"""Lexer for identity files and ad-hoc expressions."""

import logging
from dataclasses import dataclass
from typing import Optional

from errors import LexError

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({
    "identity", "param", "constraint", "sample", "hint", "lhs", "rhs", "in",
    "status", "provenance", "note",
})

OPERATORS = "+-*/^"
UNICODE_MINUS = "−"

_PUNCTUATION = {
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    "{": "LBRACE",
    "}": "RBRACE",
    ",": "COMMA",
    "=": "EQUALS",
    ";": "SEMI",
}


@dataclass(frozen=True)
class Token:
    """One lexeme; kind is IDENT, NUMBER, STRING, OP, KEYWORD, EOF or a punctuation name."""

    kind: str
    text: str
    value: Optional[float]
    line: int
    column: int

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.column})"


def _is_ident_start(c: str) -> bool:
    return c.isascii() and (c.isalpha() or c == "_")


def _is_ident_char(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


def tokenize(text: str, filename: Optional[str] = None) -> list[Token]:
    """
    Split text into tokens; '#' starts a comment running to the end of the line.

    Args:
        text: Source text
        filename: Used only in error positions

    Returns:
        Tokens ending with an EOF token; columns are 1-based

    Raises:
        LexError: On an illegal character, malformed number or unterminated string
    """
    tokens: list[Token] = []
    idx = 0
    line, line_start = 1, 0
    length = len(text)

    def column(pos: int) -> int:
        return pos - line_start + 1

    def error(message: str, pos: int) -> LexError:
        return LexError(message, line, column(pos), filename)

    while idx < length:
        c = text[idx]
        if c == "\n":
            idx += 1
            line, line_start = line + 1, idx
            continue
        if c.isspace():
            idx += 1
            continue
        if c == "#":
            while idx < length and text[idx] != "\n":
                idx += 1
            continue

        start = idx
        if c.isdigit() or (c == "." and idx + 1 < length and text[idx + 1].isdigit()):
            while idx < length and text[idx].isdigit():
                idx += 1
            if idx < length and text[idx] == ".":
                idx += 1
                while idx < length and text[idx].isdigit():
                    idx += 1
            if idx < length and text[idx] in "eE":
                exponent = idx + 1
                if exponent < length and text[exponent] in "+-" + UNICODE_MINUS:
                    exponent += 1
                if exponent >= length or not text[exponent].isdigit():
                    raise error(f"Malformed exponent in number {text[start:exponent]!r}", exponent)
                idx = exponent
                while idx < length and text[idx].isdigit():
                    idx += 1
            literal = text[start:idx]
            value = float(literal.replace(UNICODE_MINUS, "-"))
            tokens.append(Token("NUMBER", literal, value, line, column(start)))
            continue

        if _is_ident_start(c):
            while idx < length and _is_ident_char(text[idx]):
                idx += 1
            word = text[start:idx]
            kind = "KEYWORD" if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, None, line, column(start)))
            continue

        if c == '"':
            idx += 1
            while idx < length and text[idx] != '"':
                if text[idx] == "\n":
                    raise error("Unterminated string literal", start)
                idx += 1
            if idx >= length:
                raise error("Unterminated string literal", start)
            tokens.append(Token("STRING", text[start + 1:idx], None, line, column(start)))
            idx += 1
            continue

        if c in OPERATORS or c == UNICODE_MINUS:
            tokens.append(Token("OP", "-" if c == UNICODE_MINUS else c, None, line, column(start)))
            idx += 1
            continue

        if c in _PUNCTUATION:
            tokens.append(Token(_PUNCTUATION[c], c, None, line, column(start)))
            idx += 1
            continue

        raise error(f"Illegal character {c!r}", idx)

    tokens.append(Token("EOF", "", None, line, column(idx)))
    logger.debug(f"Tokenized {len(tokens)} tokens from {filename or '<input>'}")
    return tokens
