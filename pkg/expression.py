#!/usr/bin/env python3
"""Expression trees for identity sides, with a fully parenthesized printer."""

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

CONSTANTS = ("pi", "E", "EulerGamma", "Catalan", "Glaisher", "I", "inf")
QUANTIFIERS = ("Integral", "Sum", "Prod")


@dataclass(frozen=True)
class Node:
    """Base node; `pos` is the (line, column) of the first token and is ignored by equality."""

    pos: tuple[int, int] = field(default=(0, 0), compare=False, kw_only=True)

    def children(self) -> tuple["Node", ...]:
        return ()


@dataclass(frozen=True)
class Number(Node):
    value: complex


@dataclass(frozen=True)
class Const(Node):
    name: str


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node

    def children(self) -> tuple[Node, ...]:
        return (self.operand,)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def children(self) -> tuple[Node, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple[Node, ...]

    def children(self) -> tuple[Node, ...]:
        return self.args


@dataclass(frozen=True)
class Quantifier(Node):
    """Integral, Sum or Prod over `var` from `lo` to `hi`; bounds live in the enclosing scope."""

    kind: str
    var: str
    lo: Node
    hi: Node
    body: Node

    def children(self) -> tuple[Node, ...]:
        return (self.lo, self.hi, self.body)


@dataclass(frozen=True)
class CothMinusOne(Node):
    """coth(x) - 1 kept as one node so it can be evaluated without cancellation."""

    arg: Node

    def children(self) -> tuple[Node, ...]:
        return (self.arg,)


@dataclass(frozen=True)
class LogCoshRatio(Node):
    """log((upper + cosh(arg)) / (lower + cosh(arg))), evaluated without forming cosh(arg)."""

    upper: Node
    lower: Node
    arg: Node

    def children(self) -> tuple[Node, ...]:
        return (self.upper, self.lower, self.arg)


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    yield node
    for child in node.children():
        yield from walk(child)


def free_variables(node: Node, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names referenced by `node` that no enclosing quantifier inside it binds."""
    if isinstance(node, Var):
        return set() if node.name in bound else {node.name}
    if isinstance(node, Quantifier):
        names = free_variables(node.lo, bound) | free_variables(node.hi, bound)
        return names | free_variables(node.body, bound | {node.var})
    names: set[str] = set()
    for child in node.children():
        names |= free_variables(child, bound)
    return names


def contains_quantifier(node: Node) -> bool:
    return any(isinstance(n, Quantifier) for n in walk(node))


def _rebuild(node: Node, children: list[Node]) -> Node:
    if isinstance(node, Neg):
        return replace(node, operand=children[0])
    if isinstance(node, BinOp):
        return replace(node, left=children[0], right=children[1])
    if isinstance(node, Call):
        return replace(node, args=tuple(children))
    if isinstance(node, CothMinusOne):
        return replace(node, arg=children[0])
    if isinstance(node, LogCoshRatio):
        return replace(node, upper=children[0], lower=children[1], arg=children[2])
    if isinstance(node, Quantifier):
        return replace(node, lo=children[0], hi=children[1], body=children[2])
    return node


def substitute(node: Node, name: str, replacement: Node) -> Node:
    """Replace the free occurrences of variable `name`."""
    if isinstance(node, Var):
        return replacement if node.name == name else node
    if isinstance(node, Quantifier) and node.var == name:
        return replace(node, lo=substitute(node.lo, name, replacement), hi=substitute(node.hi, name, replacement))
    return _rebuild(node, [substitute(child, name, replacement) for child in node.children()])


def _signed_terms(node: Node, sign: int, out: list[tuple[int, Node]]) -> None:
    if isinstance(node, BinOp) and node.op in "+-":
        _signed_terms(node.left, sign, out)
        _signed_terms(node.right, sign if node.op == "+" else -sign, out)
    elif isinstance(node, Neg):
        _signed_terms(node.operand, -sign, out)
    else:
        out.append((sign, node))


def cancel_terms(node: Node) -> Node:
    """
    Drop pairs of equal terms with opposite signs from every sum.

    a - (a - u) becomes u, so a difference that vanishes at an endpoint is
    computed from the offset instead of from two nearly equal doubles. Sums
    without such a pair keep their shape.
    """
    if isinstance(node, Neg) or (isinstance(node, BinOp) and node.op in "+-"):
        terms: list[tuple[int, Node]] = []
        _signed_terms(node, 1, terms)
        kept: list[tuple[int, Node]] = []
        for sign, term in terms:
            match = next((i for i, (s, t) in enumerate(kept) if s == -sign and t == term), None)
            if match is None:
                kept.append((sign, term))
            else:
                del kept[match]
        if len(kept) < len(terms):
            if not kept:
                return Number(0j, pos=node.pos)
            total: Optional[Node] = None
            for sign, term in kept:
                term = cancel_terms(term)
                if total is None:
                    total = term if sign > 0 else Neg(term, pos=node.pos)
                else:
                    total = BinOp("+" if sign > 0 else "-", total, term, pos=node.pos)
            return total
    return _rebuild(node, [cancel_terms(child) for child in node.children()])


def _format_real(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "(-inf)"
    return repr(float(x))


def _format_number(value: complex) -> str:
    value = complex(value)
    if value.imag == 0:
        text = _format_real(value.real)
        return f"({text})" if value.real < 0 else text
    real = _format_real(value.real)
    imag = _format_real(abs(value.imag))
    sign = "-" if value.imag < 0 else "+"
    return f"({real} {sign} {imag}*I)"


def pretty(node: Node) -> str:
    """
    Render an expression that parses back to the same tree.

    Every operator application is parenthesized, so precedence never has to be
    reconstructed when the text is read again.
    """
    if isinstance(node, Number):
        return _format_number(node.value)
    if isinstance(node, (Const, Var)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, CothMinusOne):
        return f"(Coth({pretty(node.arg)}) - 1)"
    if isinstance(node, LogCoshRatio):
        cosh = f"Cosh({pretty(node.arg)})"
        return f"Log((({pretty(node.upper)} + {cosh}) / ({pretty(node.lower)} + {cosh})))"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(pretty(arg) for arg in node.args)})"
    if isinstance(node, Quantifier):
        return f"{node.kind}({node.var}, {pretty(node.lo)}, {pretty(node.hi)}, {pretty(node.body)})"
    raise TypeError(f"Unknown node type: {type(node).__name__}")


def label(node: Node) -> str:
    """Short description of a node for error breadcrumbs."""
    if isinstance(node, Quantifier):
        return f"{node.kind}({node.var})"
    if isinstance(node, Call):
        return node.name
    if isinstance(node, BinOp):
        return f"'{node.op}'"
    if isinstance(node, Neg):
        return "negation"
    if isinstance(node, CothMinusOne):
        return "Coth-1"
    if isinstance(node, LogCoshRatio):
        return "Log(cosh ratio)"
    if isinstance(node, Var):
        return node.name
    return pretty(node)
