#!/usr/bin/env python3
"""Parser for identity files: blocks of parameters, hints, both sides and sample points."""

import logging
from typing import Optional

from errors import NumericsError, ParseError
from evaluator import evaluate_constant
from expression_parser import ExpressionParser
from models import Hint, Identity, ParamDecl
from tokenizer import Token, tokenize

logger = logging.getLogger(__name__)

DOMAINS = {"Real": 2, "Int": 2, "Complex": 4}
HINTS = frozenset({
    "oscillatory", "alternating", "branch_sensitive", "conditional", "ambiguous", "typo_corrected",
    "singular", "singular_lower", "singular_upper", "breakpoint",
})
# hints that need an expression argument
HINTS_WITH_ARG = frozenset({"oscillatory", "breakpoint"})
STATUSES = ("verify", "ambiguous", "known_discrepancy")

_ITEMS = {"param", "constraint", "hint", "lhs", "rhs", "sample", "status", "provenance", "note"}


class IdentityParser(ExpressionParser):
    """Block grammar on top of the expression parser; items may come in any order."""

    def parse_file(self) -> list[Identity]:
        identities = []
        while not self.at("EOF"):
            identities.append(self.parse_identity())
        return identities

    def parse_identity(self) -> Identity:
        start = self.expect("KEYWORD", "identity")
        name = self.expect("STRING").text
        if not name:
            raise self.error("Identity id must not be empty", start)
        self.expect("LBRACE")
        identity = Identity(id=name, lhs=None, rhs=None, source=self.filename or "", line=start.line)
        seen: set[str] = set()
        while not self.at("RBRACE"):
            token = self.peek()
            if token.kind != "KEYWORD" or token.text not in _ITEMS:
                raise self.error(f"Unexpected {token.text or token.kind!r} in identity {name!r}", token, set(_ITEMS))
            self.advance()
            getattr(self, f"_item_{token.text}")(identity, token, seen)
            self.expect("SEMI")
        closing = self.expect("RBRACE")

        for side in ("lhs", "rhs"):
            if side not in seen:
                raise self.error(f"Identity {name!r} has no {side}", closing, {side})
        if not identity.samples:
            if identity.params:
                raise self.error(f"Identity {name!r} declares parameters but no sample", closing, {"sample"})
            identity.samples.append({})
        logger.debug(f"Parsed identity {name!r} with {len(identity.samples)} sample(s)")
        return identity

    def _once(self, item: str, token: Token, seen: set[str]) -> None:
        if item in seen:
            raise self.error(f"Duplicate {item} item", token)
        seen.add(item)

    def _item_lhs(self, identity: Identity, token: Token, seen: set[str]) -> None:
        self._once("lhs", token, seen)
        self.expect("EQUALS")
        identity.lhs = self.parse_expression()

    def _item_rhs(self, identity: Identity, token: Token, seen: set[str]) -> None:
        self._once("rhs", token, seen)
        self.expect("EQUALS")
        identity.rhs = self.parse_expression()

    def _item_param(self, identity: Identity, token: Token, seen: set[str]) -> None:
        name_token = self.expect("IDENT")
        if any(p.name == name_token.text for p in identity.params):
            raise self.error(f"Duplicate parameter {name_token.text!r}", name_token)
        self.expect("KEYWORD", "in")
        domain_token = self.expect("IDENT")
        if domain_token.text not in DOMAINS:
            raise self.error(f"Unknown domain {domain_token.text!r}", domain_token, set(DOMAINS))
        self.expect("LPAREN")
        bounds = [self._constant()]
        while self.at("COMMA"):
            self.advance()
            bounds.append(self._constant())
        self.expect("RPAREN")
        wanted = DOMAINS[domain_token.text]
        if len(bounds) != wanted:
            raise self.error(f"{domain_token.text} domain takes {wanted} bounds, got {len(bounds)}", domain_token)
        reals = []
        for bound in bounds:
            if bound.imag != 0:
                raise self.error(f"Domain bound {bound} is not real", domain_token)
            reals.append(bound.real)
        identity.params.append(ParamDecl(name_token.text, domain_token.text, tuple(reals)))

    def _item_constraint(self, identity: Identity, token: Token, seen: set[str]) -> None:
        left = self.parse_expression()
        self.expect("EQUALS")
        identity.constraints.append((left, self.parse_expression()))

    def _item_hint(self, identity: Identity, token: Token, seen: set[str]) -> None:
        name_token = self.expect("IDENT")
        if name_token.text not in HINTS:
            raise self.error(f"Unknown hint {name_token.text!r}", name_token, set(HINTS))
        arg = None
        if self.at("LPAREN"):
            self.advance()
            arg = self.parse_expression()
            self.expect("RPAREN")
        elif name_token.text in HINTS_WITH_ARG:
            raise self.error(f"Hint {name_token.text!r} needs an argument", name_token, {"'('"})
        identity.hints.append(Hint(name_token.text, arg))

    def _item_sample(self, identity: Identity, token: Token, seen: set[str]) -> None:
        point: dict[str, complex] = {}
        while True:
            name_token = self.expect("IDENT")
            if name_token.text in point:
                raise self.error(f"Sample binds {name_token.text!r} twice", name_token)
            self.expect("EQUALS")
            point[name_token.text] = self._constant(point)
            if not self.at("COMMA"):
                break
            self.advance()
        identity.samples.append(point)

    def _item_status(self, identity: Identity, token: Token, seen: set[str]) -> None:
        self._once("status", token, seen)
        status_token = self.expect("IDENT")
        if status_token.text not in STATUSES:
            raise self.error(f"Unknown status {status_token.text!r}", status_token, set(STATUSES))
        identity.expected_status = status_token.text

    def _item_provenance(self, identity: Identity, token: Token, seen: set[str]) -> None:
        self._once("provenance", token, seen)
        identity.provenance = self.expect("STRING").text

    def _item_note(self, identity: Identity, token: Token, seen: set[str]) -> None:
        text = self.expect("STRING").text
        identity.note = f"{identity.note} {text}".strip()

    def _constant(self, bindings: Optional[dict[str, complex]] = None) -> complex:
        token = self.peek()
        expr = self.parse_expression()
        try:
            return evaluate_constant(expr, bindings)
        except NumericsError as e:
            raise self.error(f"Cannot evaluate constant: {e}", token) from None


def parse_identities(text: str, filename: Optional[str] = None) -> list[Identity]:
    """
    Parse every identity block in a file's text.

    Args:
        text: File contents
        filename: Recorded as each identity's source and used in error positions

    Returns:
        Identities in file order

    Raises:
        LexError: Illegal characters
        ParseError: Grammar violations, including unevaluable sample values
    """
    parser = IdentityParser(tokenize(text, filename), filename)
    try:
        return parser.parse_file()
    except ParseError as e:
        logger.error(f"Failed to parse {filename or '<input>'}: {e}")
        raise
