#!/usr/bin/env python3

import cmath
import math

import mpmath
import pytest

from config import EngineConfig
from errors import DivergenceError, EvaluationError, PoleError
from gamma_functions import gamma
from models import AxisRange, TermGenerator
from summation import prod_finite, prod_infinite, sum_bilateral, sum_finite, sum_multi, sum_series


def series(term, start=1, end=None):
    return TermGenerator(eval=lambda idx: term(idx[0]), ranges=[AxisRange(start=start, end=end)])


def test_basel_sum():
    result = sum_series(series(lambda p: 1.0 / p ** 2))
    assert result.converged
    assert result.value == pytest.approx(math.pi ** 2 / 6, rel=1e-9)
    assert result.strategy_used in ("levin_u", "wynn_epsilon", "mixed")


def test_alternating_harmonic_sum():
    result = sum_series(series(lambda p: (-1) ** (p + 1) / p))
    assert result.value == pytest.approx(math.log(2), rel=1e-9)
    assert result.strategy_used == "euler_alternating"


def test_geometric_series_is_summed_directly():
    result = sum_series(series(lambda n: 0.5 ** n, start=0))
    assert result.strategy_used == "direct"
    assert result.value == pytest.approx(2.0, rel=1e-12)
    assert result.abs_err < 1e-10


def test_forced_acceleration():
    cfg = EngineConfig(acceleration="wynn_epsilon")
    result = sum_series(series(lambda p: (-1) ** (p + 1) / p), cfg)
    assert result.strategy_used == "wynn_epsilon"
    assert result.value == pytest.approx(math.log(2), rel=1e-9)


def test_conditional_hint_uses_levin():
    result = sum_series(series(lambda p: 1.0 / p ** 2), hint="conditional")
    assert result.strategy_used == "levin_u"


def test_finite_end_is_exact():
    result = sum_series(series(lambda k: k, start=1, end=10))
    assert result.value == 55
    assert result.strategy_used == "exact"
    assert result.terms_used == 10


def test_triangular_finite_sum():
    g = TermGenerator(
        eval=lambda idx: idx[0] * idx[1],
        ranges=[AxisRange(start=1, end=4), AxisRange(start=1, upper_fn=lambda outer: outer[0])],
    )
    # sum_{n <= 4} n * n(n + 1)/2
    assert sum_finite(g).value == 1 + 6 + 18 + 40


def test_sum_finite_rejects_infinite_axis():
    with pytest.raises(EvaluationError):
        sum_finite(series(lambda n: 1.0))


def test_pole_index_is_attached():
    with pytest.raises(PoleError) as info:
        sum_series(series(lambda n: gamma(1 - n).value))
    assert info.value.index == 1


def test_bilateral_gaussian_sum():
    result = sum_bilateral(series(lambda n: math.exp(-n * n), start=0))
    oracle = mpmath.nsum(lambda n: mpmath.exp(-n * n), [-mpmath.inf, mpmath.inf])
    assert result.value == pytest.approx(float(oracle), rel=1e-12)
    assert result.value == pytest.approx(1.7726372048266, rel=1e-11)


def test_bilateral_divergence_names_direction():
    def term(n):
        return (1 + n / 1000) * cmath.exp(1j * n * n) if n >= 0 else math.exp(-n * n)

    with pytest.raises(DivergenceError) as info:
        sum_bilateral(series(term, start=0))
    assert info.value.direction == "positive"


def test_double_sum_by_shells():
    g = TermGenerator(
        eval=lambda idx: 0.5 ** (idx[0] + idx[1]) / (math.factorial(idx[0]) * math.factorial(idx[1])),
        ranges=[AxisRange(start=0), AxisRange(start=0)],
    )
    result = sum_multi(g)
    assert result.strategy_used == "shells"
    assert result.value == pytest.approx(math.e, rel=1e-12)
    assert result.converged


def test_triangular_inner_axis_in_shells():
    g = TermGenerator(
        eval=lambda idx: 0.5 ** idx[0],
        ranges=[AxisRange(start=0), AxisRange(start=0, upper_fn=lambda outer: outer[0])],
    )
    # sum_n (n + 1) / 2^n
    assert sum_series(g).value == pytest.approx(4.0, rel=1e-12)


def test_wallis_product():
    result = prod_infinite(series(lambda n: 1 - 1 / (4.0 * n * n)))
    assert result.value == pytest.approx(2 / math.pi, rel=1e-9)
    assert not any("branch" in d for d in result.diagnostics)


def test_empty_product_is_one():
    result = prod_finite(series(lambda n: 7.0, start=1, end=0))
    assert result.value == 1
    assert result.terms_used == 0


def test_zero_factor_short_circuits():
    result = prod_infinite(series(lambda n: 1 - 1 / n))
    assert result.value == 0
    assert result.strategy_used == "exact"


def test_negative_factor_is_flagged():
    # (3; 1/4)_oo has a single negative factor, at n = 0
    result = prod_infinite(series(lambda n: 1 - 3 * 0.25 ** n, start=0))
    assert result.value == pytest.approx(float(mpmath.qp(3, 0.25)), rel=1e-12)
    assert any("branch ambiguity" in d for d in result.diagnostics)
