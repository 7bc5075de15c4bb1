#!/usr/bin/env python3

import math

import mpmath
import pytest

from errors import EvaluationError, PoleError
from evaluator import Evaluator, apply_binary, constant_value, evaluate, evaluate_constant
from expression_parser import parse_expression


def value_of(text, **bindings):
    return evaluate(parse_expression(text), bindings).value


def test_integral_of_square():
    result = evaluate(parse_expression("Integral(x, 0, 1, x^2)"))
    assert result.value == pytest.approx(1 / 3, rel=1e-13)
    assert result.converged
    assert result.abs_err < 1e-10


def test_gamma_half_squared():
    assert value_of("Gamma(1/2)^2") == pytest.approx(math.pi, rel=1e-13)


def test_coth_weighted_sum():
    oracle = mpmath.nsum(lambda p: 2 * p / mpmath.expm1(2 * p), [1, mpmath.inf])
    value = value_of("Sum(p, 1, inf, p*(Coth(p) - 1))")
    assert value == pytest.approx(float(oracle), rel=1e-10)


def test_coth_first_moment_identity():
    lhs = value_of("Sum(p, 1, inf, p*((Coth(p) - 1) + pi^2*(Coth(pi^2*p) - 1)))")
    assert lhs == pytest.approx((math.pi ** 2 - 5) / 12, rel=1e-10)


def test_parameters_are_bound():
    value = value_of("Sum(p, 1, inf, a^p/p^2)", a=0.5)
    assert value == pytest.approx(math.pi ** 2 / 12 - math.log(2) ** 2 / 2, rel=1e-11)


def test_halfline_integral_with_parameter():
    assert value_of("Integral(x, 0, inf, Exp(-a*x))", a=2) == pytest.approx(0.5, rel=1e-10)


def test_nested_quantifiers():
    # sum of 1/(n (n + 1))
    value = value_of("Sum(n, 1, inf, Integral(x, 0, 1, x^n)/n)")
    assert value == pytest.approx(1.0, rel=1e-8)


def test_double_sum():
    assert value_of("Sum(m, 1, inf, Sum(n, 1, inf, 1/(2^m*3^n)))") == pytest.approx(0.5, rel=1e-12)


def test_bilateral_sum():
    oracle = mpmath.nsum(lambda n: mpmath.exp(-n * n), [-mpmath.inf, mpmath.inf])
    assert value_of("Sum(n, -inf, inf, Exp(-n^2))") == pytest.approx(float(oracle), rel=1e-12)


def test_finite_product():
    assert value_of("Prod(k, 1, 5, k)") == 120


def test_determinism():
    ast = parse_expression("Sum(p, 1, inf, (-1)^p*Log(p)/p)")
    first = evaluate(ast)
    second = evaluate(ast)
    assert first.value == second.value
    assert first.abs_err == second.abs_err


def test_cache_reuses_parameter_subtrees():
    ast = parse_expression("Sum(p, 1, 20, Gamma(a)*p)")
    evaluator = Evaluator()
    result = evaluator.evaluate(ast, {"a": 0.5})
    assert result.value == pytest.approx(210 * math.sqrt(math.pi), rel=1e-13)
    assert evaluator.cache_hits >= 19
    assert len(evaluator.cache) == 1
    # a reused instance gives the same value as a fresh one
    assert evaluator.evaluate(ast, {"a": 0.5}).value == evaluate(ast, {"a": 0.5}).value


def test_pole_breadcrumb():
    with pytest.raises(PoleError) as info:
        value_of("1 + Gamma(a)", a=-2)
    assert "Gamma" in info.value.breadcrumb


def test_unbound_variable():
    with pytest.raises(EvaluationError):
        value_of("a + 1")


def test_evaluate_constant():
    assert evaluate_constant(parse_expression("pi/alpha"), {"alpha": 2}) == pytest.approx(math.pi / 2)
    assert evaluate_constant(parse_expression("I^2")) == pytest.approx(-1)


def test_constants_and_operators():
    assert constant_value("I") == (1j, 0.0)
    value, err = constant_value("EulerGamma")
    assert value.real == pytest.approx(0.5772156649015329, rel=1e-15)
    assert err < 1e-16
    with pytest.raises(EvaluationError):
        constant_value("inf")
    with pytest.raises(PoleError):
        apply_binary("/", 1, 0)
    assert apply_binary("^", 2, 10) == 1024


def test_cosh_ratio_log_past_overflow():
    # the tail runs far beyond the point where cosh overflows
    value = value_of("Integral(x, 0, inf, Log((Cos(1) + Cosh(x))/(Cos(2) + Cosh(x))))")
    assert value == pytest.approx(1.5, rel=1e-10)


def test_series_term_with_overflowing_factor():
    # (coth(x) - 1) sinh(x) = e^-x, while sinh alone overflows from p = 72
    value = value_of("Sum(p, 1, inf, (Coth(pi^2*p) - 1)*Sinh(pi^2*p))")
    assert value == pytest.approx(1 / math.expm1(math.pi ** 2), rel=1e-12)


def test_series_term_with_overflowing_power():
    y = 0.5
    value = value_of("Sum(k, 0, inf, (k + 2)^k*(Exp(-y)*y)^(k + 1)/Gamma(k + 3))", y=y)
    assert value == pytest.approx((-math.exp(y) * y + 2 * math.exp(y) - 2) / 2, rel=1e-10)


def test_log_space_keeps_the_original_failure():
    with pytest.raises(PoleError):
        value_of("Sum(p, 1, inf, Gamma(1 - p)*Exp(-p))")


def test_terminating_factor_absorbs_degree_limit():
    # E_0 - 2 E_1(x) + 2 E_2(x) at x = 0.3
    value = value_of("Sum(q, 0, inf, EulerE(q, 0.3)*Pochhammer(-2, q))")
    assert value == pytest.approx(0.98, rel=1e-13)


def test_terminating_factor_keeps_poles():
    with pytest.raises(PoleError):
        value_of("Sum(p, 1, inf, Pochhammer(0, p)*Gamma(-p))")


def test_removable_point_at_the_upper_limit():
    text = ("Integral(x, 0, pi/4, Csc(2*x)*(Cot(x)^m*Log(Tan(x)) + Tan(x)^m*Log(Cot(x)))"
            "/(Log(Cot(x))*(Cot(x)^p - Tan(x)^p)))")
    value = value_of(text, m=0.5, p=2)
    assert value == pytest.approx(-math.pi / 8 * math.tan(math.pi / 8), rel=1e-9)


def test_endpoint_differences_are_taken_symbolically():
    value = value_of("Integral(x, -alpha, alpha, ((alpha + x)/(alpha - x))^m/(alpha^2 + x^2))", alpha=2, m=0.5)
    assert value == pytest.approx(math.pi / (2 * 2 * math.cos(math.pi / 4)), rel=1e-11)
