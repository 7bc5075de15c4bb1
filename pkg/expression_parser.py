#!/usr/bin/env python3
"""Precedence-climbing parser for the infix expression grammar."""

import logging
from typing import Optional

from errors import ParseError
from expression import (CONSTANTS, QUANTIFIERS, BinOp, Call, Const, CothMinusOne, LogCoshRatio, Neg, Node, Number,
                        Quantifier, Var)
from function_table import FUNCTIONS
from tokenizer import Token, tokenize

logger = logging.getLogger(__name__)

# Groups of increasing binding power; unary minus sits between * / and ^.
BINARY_OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
    [("^", "right")],
]

OPERATOR_PREC = {op: idx for idx, group in enumerate(BINARY_OPERATORS) for op, _ in group}
OPERATOR_ASSOC = {op: assoc for group in BINARY_OPERATORS for op, assoc in group}
UNARY_OPERAND_PREC = OPERATOR_PREC["^"]

_ATOM_START = {"number", "identifier", "'('", "'-'"}


class ExpressionParser:
    """
    Recursive-descent parser over a token list.

    Binary operators are handled by precedence climbing; function names are
    checked against the function table so unknown names and wrong argument
    counts fail at parse time.
    """

    def __init__(self, tokens: list[Token], filename: Optional[str] = None):
        self.tokens = tokens
        self.filename = filename
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def error(self, message: str, token: Token, expected: Optional[set[str]] = None) -> ParseError:
        return ParseError(message, token.line, token.column, self.filename, expected)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        token = self.peek()
        if token.kind != kind or (text is not None and token.text != text):
            wanted = repr(text) if text is not None else kind.lower()
            found = token.text or token.kind
            raise self.error(f"Expected {wanted}, found {found!r}", token, {wanted})
        return self.advance()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.peek()
        return token.kind == kind and (text is None or token.text == text)

    def parse_expression(self, min_prec: int = 0) -> Node:
        lhs = self._atom()
        while self.at("OP") and OPERATOR_PREC[self.peek().text] >= min_prec:
            token = self.advance()
            op = token.text
            next_prec = OPERATOR_PREC[op] + 1 if OPERATOR_ASSOC[op] == "left" else OPERATOR_PREC[op]
            rhs = self.parse_expression(next_prec)
            if op == "-" and _is_coth(lhs) and rhs == Number(1.0):
                lhs = CothMinusOne(lhs.args[0], pos=lhs.pos)
            else:
                lhs = BinOp(op, lhs, rhs, pos=lhs.pos)
        return lhs

    def _atom(self) -> Node:
        token = self.peek()
        pos = (token.line, token.column)
        if token.kind == "OP" and token.text == "-":
            self.advance()
            return Neg(self.parse_expression(UNARY_OPERAND_PREC), pos=pos)
        if token.kind == "NUMBER":
            self.advance()
            return Number(complex(token.value), pos=pos)
        if token.kind == "LPAREN":
            self.advance()
            inner = self.parse_expression()
            self.expect("RPAREN")
            return inner
        if token.kind == "IDENT":
            self.advance()
            if self.at("LPAREN"):
                return self._call(token)
            if token.text in CONSTANTS:
                return Const(token.text, pos=pos)
            return Var(token.text, pos=pos)
        if token.kind == "EOF":
            raise self.error("Unexpected end of input", token, _ATOM_START)
        raise self.error(f"Unexpected {token.text!r}", token, _ATOM_START)

    def _arguments(self) -> list[Node]:
        self.expect("LPAREN")
        args = [] if self.at("RPAREN") else [self.parse_expression()]
        while self.at("COMMA"):
            self.advance()
            args.append(self.parse_expression())
        self.expect("RPAREN")
        return args

    def _call(self, name_token: Token) -> Node:
        name = name_token.text
        pos = (name_token.line, name_token.column)
        if name in QUANTIFIERS:
            self.expect("LPAREN")
            var = self.expect("IDENT").text
            if var in CONSTANTS:
                raise self.error(f"{name} variable {var!r} is a reserved constant", name_token)
            bounds = []
            for _ in range(3):
                self.expect("COMMA")
                bounds.append(self.parse_expression())
            self.expect("RPAREN")
            return Quantifier(name, var, bounds[0], bounds[1], bounds[2], pos=pos)
        spec = FUNCTIONS.get(name)
        if spec is None:
            raise self.error(f"Unknown function {name!r}", name_token)
        args = self._arguments()
        if len(args) not in spec.arities:
            raise self.error(f"{name} expects {spec.describe_arity()}, got {len(args)}", name_token)
        call = Call(name, tuple(args), pos=pos)
        return _log_cosh_ratio(call) or call


def _is_coth(node: Node) -> bool:
    return isinstance(node, Call) and node.name == "Coth"


def _shifted_cosh(node: Node) -> Optional[tuple[Node, Node]]:
    """(shift, argument) for `shift + Cosh(argument)` in either order."""
    if not (isinstance(node, BinOp) and node.op == "+"):
        return None
    for shift, cosh in ((node.left, node.right), (node.right, node.left)):
        if isinstance(cosh, Call) and cosh.name == "Cosh":
            return shift, cosh.args[0]
    return None


def _log_cosh_ratio(call: Call) -> Optional[LogCoshRatio]:
    """Log((a + Cosh(u)) / (b + Cosh(u))) as one node."""
    if call.name != "Log" or len(call.args) != 1:
        return None
    quotient = call.args[0]
    if not (isinstance(quotient, BinOp) and quotient.op == "/"):
        return None
    upper, lower = _shifted_cosh(quotient.left), _shifted_cosh(quotient.right)
    if upper is None or lower is None or upper[1] != lower[1]:
        return None
    return LogCoshRatio(upper[0], lower[0], upper[1], pos=call.pos)


def parse_expression(text: str, filename: Optional[str] = None) -> Node:
    """
    Parse a standalone expression.

    Raises:
        LexError: On illegal characters
        ParseError: On syntax errors, unknown functions or arity mismatches
    """
    parser = ExpressionParser(tokenize(text, filename), filename)
    node = parser.parse_expression()
    if not parser.at("EOF"):
        token = parser.peek()
        raise parser.error(f"Unexpected {token.text!r} after expression", token, {"operator", "end of input"})
    logger.debug(f"Parsed expression {text!r}")
    return node
