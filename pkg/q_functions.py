#!/usr/bin/env python3
"""q-digamma, q-Pochhammer symbols and the classical rising factorial."""

import logging
import math
from typing import Optional

from config import EngineConfig
from errors import DomainError, PoleError
from gamma_functions import gamma, reciprocal_gamma
from models import EvalResult, PochhammerSpec
from numerics import EPS, complex_log, complex_pow, is_integer, is_nonpositive_integer
from utils import Accumulator

logger = logging.getLogger(__name__)

# direct Lambert terms until |q^(n+z)| falls below this, then the tail series
_LAMBERT_SWITCH = 1e-3
_POLE_TOL = 1e-14


def _log1p_small(x: complex) -> complex:
    """log(1 + x) for |x| < 1e-3 by its Taylor series."""
    term = x
    total = x
    k = 1
    while abs(term) > EPS * abs(total) * 0.01 and k < 40:
        term = -term * x
        k += 1
        total += term / k
    return total


def _log_one_minus(x: complex) -> complex:
    if abs(x) < 1e-3:
        return _log1p_small(-x)
    return complex_log(1.0 - x)


def q_digamma(q: complex, z: complex, config: Optional[EngineConfig] = None) -> EvalResult:
    """
    q-digamma function psi_q(z).

    For |q| < 1:
        psi_q(z) = -log(1 - q) + log(q) sum_{n>=0} q^(n+z) / (1 - q^(n+z))
    The sum runs directly until |q^(n+z)| < 1e-3; the remainder is the Lambert
    series sum_{j>=1} x^j / (1 - q^j) with x = q^(N+z), which converges fast.

    For |q| > 1 the base is inverted: psi_q(z) = psi_{1/q}(z) + (z - 3/2) log q.

    Raises:
        DomainError: For q = 0 or |q| = 1
        PoleError: When q^(n+z) = 1 for some n >= 0
    """
    cfg = config or EngineConfig()
    q, z = complex(q), complex(z)
    if q == 0 or abs(abs(q) - 1.0) <= _POLE_TOL:
        raise DomainError(f"q_digamma requires 0 < |q| != 1, got q = {q}")
    if abs(q) > 1.0:
        inner = q_digamma(1.0 / q, z, cfg)
        correction = (z - 1.5) * complex_log(q)
        return EvalResult(value=inner.value + correction, abs_err=inner.abs_err + EPS * abs(correction),
                          terms_used=inner.terms_used, converged=inner.converged)

    log_q = complex_log(q)
    x = complex_pow(q, z)
    acc = Accumulator()
    n = 0
    while abs(x) >= _LAMBERT_SWITCH:
        denominator = 1.0 - x
        if abs(denominator) <= _POLE_TOL:
            raise PoleError(f"q_digamma has a pole: q^(n+z) = 1 at n = {n}", location=z, index=n)
        acc.add(x / denominator)
        x *= q
        n += 1
        if n >= cfg.max_terms:
            logger.warning(f"q_digamma({q}, {z}) exhausted {cfg.max_terms} direct terms")
            value = -_log_one_minus(q) + log_q * acc.value
            return EvalResult(value=value, abs_err=abs(log_q * x) / (1.0 - abs(q)),
                              terms_used=n, converged=False)

    # remainder: sum_{m>=n} x q^(m-n) / (1 - x q^(m-n)) = sum_j x^j / (1 - q^j)
    x_pow = x
    q_pow = q
    j = 1
    while True:
        term = x_pow / (1.0 - q_pow)
        acc.add(term)
        if abs(term) <= EPS * max(abs(acc.value), 1e-300) * 0.1 or j > 200:
            break
        x_pow *= x
        q_pow *= q
        j += 1

    value = -_log_one_minus(q) + log_q * acc.value
    abs_err = abs(log_q) * acc.rounding_error() * 4 + EPS * abs(value)
    logger.debug(f"q_digamma({q}, {z}): {n} direct terms, {j} tail terms")
    return EvalResult(value=value, abs_err=abs_err, terms_used=n + j)


def rising_factorial(x: complex, n: complex) -> EvalResult:
    """
    Pochhammer symbol (x)_n.

    Integer n uses the product (x)(x+1)...(x+n-1), with (x)_{-m} = 1/((x-1)...(x-m));
    other n use Gamma(x + n) / Gamma(x).

    Raises:
        PoleError: If a negative-count product or Gamma(x + n) hits a pole
    """
    x, n = complex(x), complex(n)
    if is_integer(n) and abs(n.real) <= 100000:
        count = int(round(n.real))
        acc_value = 1.0 + 0j
        if count >= 0:
            for i in range(count):
                acc_value *= x + i
        else:
            for i in range(1, -count + 1):
                factor = x - i
                if factor == 0:
                    raise PoleError(f"({x})_{count} has a zero denominator factor", location=x, index=i)
                acc_value /= factor
        return EvalResult(value=acc_value, abs_err=EPS * abs(acc_value) * (abs(count) + 1), terms_used=abs(count))
    if is_nonpositive_integer(x + n):
        raise PoleError(f"Gamma(x + n) has a pole at x + n = {x + n}", location=x + n)
    numerator = gamma(x + n)
    value = numerator.value * reciprocal_gamma(x)
    return EvalResult(value=value, abs_err=abs(value) * 8 * EPS + numerator.abs_err * abs(reciprocal_gamma(x)),
                      terms_used=numerator.terms_used)


def q_pochhammer(spec: PochhammerSpec, config: Optional[EngineConfig] = None) -> EvalResult:
    """
    q-Pochhammer symbol (a; q)_n, or the rising factorial when spec.q is None.

    Args:
        spec: Base, q (None for the classical symbol) and count (None for infinite)
        config: Engine budgets; defaults to EngineConfig()

    Returns:
        EvalResult with the product value

    Raises:
        DomainError: Infinite product with |q| >= 1, or classical symbol without a count
    """
    cfg = config or EngineConfig()
    a = complex(spec.base)
    if spec.q is None:
        if spec.count is None:
            raise DomainError("The classical rising factorial needs a finite count")
        return rising_factorial(a, spec.count)

    q = complex(spec.q)
    if spec.count is not None:
        count = int(spec.count)
        value = 1.0 + 0j
        if count >= 0:
            factor_q = 1.0 + 0j
            for _ in range(count):
                value *= 1.0 - a * factor_q
                factor_q *= q
        else:
            # (a; q)_{-m} = 1 / prod_{k=1}^{m} (1 - a q^-k)
            for k in range(1, -count + 1):
                factor = 1.0 - a * complex_pow(q, -k)
                if factor == 0:
                    raise PoleError(f"(a; q)_{count} has a zero denominator factor", location=a, index=k)
                value /= factor
        return EvalResult(value=value, abs_err=EPS * abs(value) * (abs(count) + 1), terms_used=abs(count))

    if abs(q) >= 1.0:
        raise DomainError(f"Infinite q-Pochhammer product requires |q| < 1, got q = {q}")
    acc = Accumulator()
    term = a
    k = 0
    converged = False
    for k in range(cfg.max_terms):
        if term == 1:
            return EvalResult(value=0j, abs_err=0.0, terms_used=k + 1)
        acc.add(_log_one_minus(term))
        if abs(term) < EPS * 1e-2:
            converged = True
            break
        term *= q
    try:
        value = complex(math.exp(acc.value.real), 0.0) * complex(math.cos(acc.value.imag), math.sin(acc.value.imag))
    except OverflowError:
        value = complex(math.inf, 0.0)
    abs_err = abs(value) * (acc.rounding_error() + EPS * (k + 1))
    return EvalResult(value=value, abs_err=abs_err, terms_used=k + 1, converged=converged)
