#!/usr/bin/env python3

import glob
import os

import pytest

from config import DEFAULT_REGISTRY_DIR
from errors import ParseError
from evaluator import evaluate_constant
from expression import (BinOp, Call, Const, CothMinusOne, LogCoshRatio, Neg, Number, Quantifier, Var, cancel_terms,
                        free_variables, pretty, substitute)
from expression_parser import parse_expression
from identity_parser import parse_identities


@pytest.mark.parametrize("text, expected", [
    ("2+3*4", 14),
    ("2^3^2", 512),
    ("-2^2", -4),
    ("(2+3)*4", 20),
    ("8/4/2", 1),
    ("2*-3", -6),
    ("-2*3", -6),
    ("10-4-3", 3),
])
def test_precedence(text, expected):
    assert evaluate_constant(parse_expression(text)) == expected


def test_integral_node():
    node = parse_expression("Integral(x, 0, 1, x^2)")
    assert isinstance(node, Quantifier)
    assert node.kind == "Integral" and node.var == "x"
    assert node.body == BinOp("^", Var("x"), Number(2.0))


def test_sum_with_infinite_bound():
    node = parse_expression("Sum(p, 1, inf, 1/p^2)")
    assert node.kind == "Sum"
    assert node.hi == Const("inf")


def test_unary_minus_binds_looser_than_power():
    assert parse_expression("-x^2") == Neg(BinOp("^", Var("x"), Number(2.0)))


def test_coth_minus_one_rewrite():
    node = parse_expression("Coth(p) - 1")
    assert node == CothMinusOne(Var("p"))
    # only a literal 1 is folded
    assert isinstance(parse_expression("Coth(p) - 2"), BinOp)


def test_log_cosh_ratio_rewrite():
    node = parse_expression("Log((Cos(a) + Cosh(x))/(Cosh(x) + 2))")
    assert node == LogCoshRatio(Call("Cos", (Var("a"),)), Number(2.0), Var("x"))
    assert parse_expression(pretty(node)) == node
    # the two shifted cosh terms must share the argument
    assert isinstance(parse_expression("Log((1 + Cosh(x))/(2 + Cosh(y)))"), Call)


def test_arity_error():
    with pytest.raises(ParseError) as info:
        parse_expression("LerchPhi(1, 2)")
    assert "3 or 4" in str(info.value)


def test_unknown_function():
    with pytest.raises(ParseError):
        parse_expression("Foo(1)")


def test_trailing_tokens():
    with pytest.raises(ParseError) as info:
        parse_expression("1 2")
    assert info.value.column == 3


def test_unexpected_end():
    with pytest.raises(ParseError) as info:
        parse_expression("1 +")
    assert "end of input" in info.value.message


def test_quantifier_variable_cannot_be_constant():
    with pytest.raises(ParseError):
        parse_expression("Sum(pi, 1, 2, pi)")


def test_call_nodes_keep_arguments():
    node = parse_expression("Gamma(s, z)")
    assert node == Call("Gamma", (Var("s"), Var("z")))


def test_free_variables():
    node = parse_expression("Sum(p, 1, n, a^p) + Integral(x, 0, b, x*c)")
    assert free_variables(node) == {"n", "a", "b", "c"}


@pytest.mark.parametrize("text", [
    "2+3*4",
    "-x^2 + Coth(x) - 1",
    "Sum(p, 1, inf, (-1)^p/p) * Gamma(1/2 + I)",
    "Integral(x, -inf, inf, Exp(-x^2))",
    "2.5e-3 - 4*I",
])
def test_pretty_round_trip(text):
    node = parse_expression(text)
    assert parse_expression(pretty(node)) == node


def test_pretty_round_trip_over_registry():
    files = sorted(glob.glob(os.path.join(DEFAULT_REGISTRY_DIR, "*.idt")))
    assert files
    for path in files:
        with open(path, encoding="utf-8") as f:
            entries = parse_identities(f.read(), path)
        for entry in entries:
            for side in (entry.lhs, entry.rhs):
                assert parse_expression(pretty(side)) == side, f"{entry.id} does not round-trip"


def test_substitution_cancels_endpoint_differences():
    node = parse_expression("Log(alpha - x)/(alpha + x)")
    shifted = cancel_terms(substitute(node, "x", BinOp("-", Var("alpha"), Var("u"))))
    assert shifted == parse_expression("Log(u)/(alpha + (alpha - u))")
    assert cancel_terms(parse_expression("a - b + c")) == parse_expression("a - b + c")
    assert cancel_terms(parse_expression("a - a")) == Number(0j)


def test_substitution_respects_inner_binding():
    node = parse_expression("x + Sum(x, 1, x, x)")
    assert substitute(node, "x", Var("y")) == parse_expression("y + Sum(x, 1, y, x)")
