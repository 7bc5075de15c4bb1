#!/usr/bin/env python3
"""Generalized hypergeometric series, Gauss 2F1 transformations, Bessel J and the incomplete beta function."""

import cmath
import logging
import math
from typing import Optional, Sequence

import numpy as np

from config import EngineConfig
from errors import DivergenceError, DomainError, PoleError
from gamma_functions import gamma, reciprocal_gamma
from models import EvalResult
from numerics import EPS, EULER_GAMMA, complex_log, complex_pow, is_integer, is_nonpositive_integer
from utils import Accumulator

logger = logging.getLogger(__name__)

_BESSEL_SERIES_RADIUS = 12.0
_LOG_MOMENT_RADIUS = 16.0
_LAGUERRE_NODES, _LAGUERRE_WEIGHTS = np.polynomial.laguerre.laggauss(64)


def _truncation_order(a_list: Sequence[complex]) -> Optional[int]:
    """Number of terms -a for the first non-positive integer numerator parameter."""
    orders = [-int(round(a.real)) for a in a_list if is_nonpositive_integer(a)]
    return min(orders) if orders else None


def _check_denominators(a_list: Sequence[complex], b_list: Sequence[complex]) -> Optional[int]:
    truncation = _truncation_order(a_list)
    for b in b_list:
        if is_nonpositive_integer(b):
            pole = -int(round(b.real))
            if truncation is None or truncation > pole:
                raise PoleError(f"Hypergeometric denominator parameter {b} is a pole", location=b)
    return truncation


def _series(a_list: Sequence[complex], b_list: Sequence[complex], z: complex,
            max_terms: int, truncation: Optional[int] = None) -> EvalResult:
    """Taylor series by term recurrence, summed with compensation."""
    acc = Accumulator(1.0)
    term = 1.0 + 0j
    limit = max_terms if truncation is None else min(max_terms, truncation + 1)
    converged = truncation is not None and truncation < max_terms
    small_run = 0
    n = 0
    for n in range(limit - 1 if truncation is not None else limit):
        ratio = z / (n + 1)
        for a in a_list:
            ratio *= a + n
        for b in b_list:
            ratio /= b + n
        term *= ratio
        acc.add(term)
        if truncation is None:
            if abs(term) <= EPS * abs(acc.value) * 0.5:
                small_run += 1
                if small_run >= 2:
                    converged = True
                    break
            else:
                small_run = 0
        if not acc.is_finite():
            break
    value = acc.value
    abs_err = acc.rounding_error() * 2 + (0.0 if converged else abs(term))
    return EvalResult(value=value, abs_err=abs_err, terms_used=n + 1, converged=converged)


def _log_moment_integral(v: complex) -> complex:
    """int_1^inf e^(-v t) log(t) / t dt for Re v > 0, by Gauss-Laguerre along the ray t = 1 + x / v."""
    w = 1.0 + _LAGUERRE_NODES / v
    return cmath.exp(-v) / v * complex(np.dot(_LAGUERRE_WEIGHTS, np.log(w) / w))


def _hyp3f3_unit_shifts(z: complex) -> EvalResult:
    """
    3F3(1, 1, 1; 2, 2, 2; z) for Re z < 0 and large |z|, where the Taylor series cancels.

    z 3F3 = sum z^n / (n^2 n!) = K(-z) - (log(-z) + gamma)^2 / 2 - pi^2 / 12 with
    K the log-moment integral above.
    """
    shifted_log = complex_log(-z) + EULER_GAMMA
    value = (_log_moment_integral(-z) - 0.5 * shifted_log * shifted_log - math.pi ** 2 / 12) / z
    scale = (abs(shifted_log) ** 2 + 1.0) / abs(z)
    return EvalResult(value=value, abs_err=16 * EPS * scale, terms_used=len(_LAGUERRE_NODES))


def hypergeometric_pfq(
    a_list: Sequence[complex],
    b_list: Sequence[complex],
    z: complex,
    config: Optional[EngineConfig] = None,
) -> EvalResult:
    """
    Generalized hypergeometric function pFq(a; b; z).

    Args:
        a_list: Numerator parameters
        b_list: Denominator parameters
        z: Argument
        config: Engine budgets; defaults to EngineConfig()

    Returns:
        EvalResult; converged is False when the series budget ran out

    Raises:
        PoleError: If a denominator parameter is a pole not preceded by truncation
        DivergenceError: For p > q + 1 unless the series terminates
        DomainError: For p = q + 1 outside the supported region
    """
    cfg = config or EngineConfig()
    a_list = [complex(a) for a in a_list]
    b_list = [complex(b) for b in b_list]
    z = complex(z)
    truncation = _check_denominators(a_list, b_list)
    if z == 0:
        return EvalResult(value=1.0 + 0j, abs_err=0.0, terms_used=1)
    p, q = len(a_list), len(b_list)
    if truncation is not None:
        return _series(a_list, b_list, z, cfg.max_terms, truncation)
    if p > q + 1:
        raise DivergenceError(f"{p}F{q} series diverges for z = {z}")
    if a_list == [1, 1, 1] and b_list == [2, 2, 2] and z.real < 0 and abs(z) > _LOG_MOMENT_RADIUS:
        return _hyp3f3_unit_shifts(z)
    if p == 2 and q == 1:
        return hyp2f1(a_list[0], a_list[1], b_list[0], z, cfg)
    if p == 1 and q == 1 and z.real < 0:
        return hyp1f1(a_list[0], b_list[0], z, cfg)
    if p == q + 1 and abs(z) >= 1.0:
        raise DomainError(f"{p}F{q} requires |z| < 1 unless the series terminates, got z = {z}")
    result = _series(a_list, b_list, z, cfg.max_terms)
    if not result.converged:
        logger.warning(f"{p}F{q} series at z = {z} did not converge in {result.terms_used} terms")
    return result


def hyp1f1(a: complex, b: complex, z: complex, config: Optional[EngineConfig] = None) -> EvalResult:
    """Kummer 1F1(a; b; z); Re z < 0 goes through e^z 1F1(b - a; b; -z)."""
    cfg = config or EngineConfig()
    a, b, z = complex(a), complex(b), complex(z)
    truncation = _check_denominators([a], [b])
    if truncation is not None or z.real >= 0:
        return _series([a], [b], z, cfg.max_terms, truncation)
    inner_a = b - a
    inner_truncation = _check_denominators([inner_a], [b])
    inner = _series([inner_a], [b], -z, cfg.max_terms, inner_truncation)
    factor = cmath.exp(z)
    return EvalResult(value=factor * inner.value, abs_err=abs(factor) * inner.abs_err,
                      terms_used=inner.terms_used, converged=inner.converged)


def _gauss_at_one(a: complex, b: complex, c: complex) -> EvalResult:
    excess = c - a - b
    if excess.real <= 0:
        raise DivergenceError(f"2F1({a}, {b}; {c}; 1) diverges since Re(c - a - b) <= 0")
    value = gamma(c).value * gamma(excess).value * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)
    return EvalResult(value=value, abs_err=16 * EPS * abs(value), terms_used=4)


def hyp2f1(a: complex, b: complex, c: complex, z: complex, config: Optional[EngineConfig] = None) -> EvalResult:
    """
    Gauss hypergeometric function 2F1(a, b; c; z).

    Picks whichever of z, z/(z-1) (Pfaff) and 1-z (connection formula, only
    when c - a - b is not an integer) has the smallest modulus and sums the
    series there. z = 1 uses Gauss's theorem.

    Raises:
        PoleError: If c is a pole not preceded by truncation
        DivergenceError: At z = 1 with Re(c - a - b) <= 0
        DomainError: When no transformation maps z inside the unit disc
    """
    cfg = config or EngineConfig()
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    truncation = _check_denominators([a, b], [c])
    if truncation is not None:
        return _series([a, b], [c], z, cfg.max_terms, truncation)
    if z == 0:
        return EvalResult(value=1.0 + 0j, abs_err=0.0, terms_used=1)
    if z == 1:
        return _gauss_at_one(a, b, c)

    candidates = [(abs(z), "direct")]
    candidates.append((abs(z / (z - 1.0)), "pfaff"))
    if not is_integer(c - a - b):
        candidates.append((abs(1.0 - z), "reflection"))
    modulus, method = min(candidates, key=lambda item: item[0])
    if modulus >= 1.0:
        raise DomainError(f"2F1 at z = {z} is outside the supported transformation region")
    logger.debug(f"2F1({a}, {b}; {c}; {z}) via {method} (|w| = {modulus:.3g})")

    if method == "direct":
        result = _series([a, b], [c], z, cfg.max_terms)
    elif method == "pfaff":
        w = z / (z - 1.0)
        inner = _series([a, c - b], [c], w, cfg.max_terms, _truncation_order([a, c - b]))
        factor = complex_pow(1.0 - z, -a)
        result = EvalResult(value=factor * inner.value, abs_err=abs(factor) * inner.abs_err,
                            terms_used=inner.terms_used, converged=inner.converged)
    else:
        w = 1.0 - z
        excess = c - a - b
        gamma_c = gamma(c).value
        first_coeff = gamma_c * gamma(excess).value * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)
        second_coeff = gamma_c * gamma(-excess).value * reciprocal_gamma(a) * reciprocal_gamma(b)
        acc = Accumulator()
        err = 0.0
        used = 0
        converged = True
        if first_coeff != 0:
            first = _series([a, b], [1.0 - excess], w, cfg.max_terms, _truncation_order([a, b]))
            acc.add(first_coeff * first.value)
            err += abs(first_coeff) * first.abs_err
            used += first.terms_used
            converged = converged and first.converged
        if second_coeff != 0:
            second = _series([c - a, c - b], [1.0 + excess], w, cfg.max_terms, _truncation_order([c - a, c - b]))
            factor = complex_pow(w, excess)
            acc.add(second_coeff * factor * second.value)
            err += abs(second_coeff * factor) * second.abs_err
            used += second.terms_used
            converged = converged and second.converged
        value = acc.value
        result = EvalResult(value=value, abs_err=err + acc.rounding_error() + 16 * EPS * acc.abs_sum,
                            terms_used=used, converged=converged)
    return result


def incomplete_beta(x: complex, a: complex, b: complex, config: Optional[EngineConfig] = None) -> EvalResult:
    """
    Incomplete beta function B_x(a, b) = x^a / a * 2F1(a, 1 - b; a + 1; x).

    b = 0 is allowed (B_x(a, 0) = x^a / a * 2F1(a, 1; a + 1; x)).

    Raises:
        PoleError: If a is a non-positive integer
    """
    x, a, b = complex(x), complex(a), complex(b)
    if is_nonpositive_integer(a):
        raise PoleError(f"Incomplete beta has a pole at a = {a}", location=a)
    if x == 0:
        if a.real > 0:
            return EvalResult(value=0j, abs_err=0.0, terms_used=0)
        raise DomainError(f"B_0(a, b) requires Re(a) > 0, got a = {a}")
    series = hyp2f1(a, 1.0 - b, a + 1.0, x, config)
    factor = complex_pow(x, a) / a
    return EvalResult(value=factor * series.value, abs_err=abs(factor) * series.abs_err,
                      terms_used=series.terms_used, converged=series.converged)


def _bessel_series(nu: complex, z: complex, max_terms: int) -> EvalResult:
    half = 0.5 * z
    term = complex_pow(half, nu) * reciprocal_gamma(nu + 1.0)
    acc = Accumulator(term)
    factor = -half * half
    converged = False
    k = 0
    for k in range(max_terms):
        term *= factor / ((k + 1) * (nu + k + 1))
        acc.add(term)
        if abs(term) <= EPS * abs(acc.value) * 0.5 and k > abs(z):
            converged = True
            break
        if term == 0:
            converged = True
            break
    return EvalResult(value=acc.value, abs_err=acc.rounding_error() * 2 + EPS * abs(acc.value),
                      terms_used=k + 1, converged=converged)


def _bessel_asymptotic(nu: complex, z: complex) -> EvalResult:
    """Hankel expansion J = sqrt(2/(pi z)) (P cos w - Q sin w)."""
    mu = 4.0 * nu * nu
    p_sum, q_sum = 1.0 + 0j, 0j
    term = 1.0 + 0j
    previous = math.inf
    k = 0
    for k in range(1, 80):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if abs(term) > previous:
            break
        previous = abs(term)
        if k % 2 == 1:
            q_sum += term * (-1) ** ((k - 1) // 2)
        else:
            p_sum += term * (-1) ** (k // 2)
        if abs(term) < EPS * 0.1:
            break
    omega = z - 0.5 * nu * math.pi - 0.25 * math.pi
    prefactor = cmath.sqrt(2.0 / (math.pi * z))
    value = prefactor * (p_sum * cmath.cos(omega) - q_sum * cmath.sin(omega))
    return EvalResult(value=value, abs_err=abs(prefactor) * (previous + 4 * EPS) * math.cosh(omega.imag),
                      terms_used=k, converged=True)


def bessel_j(nu: complex, z: complex, config: Optional[EngineConfig] = None) -> EvalResult:
    """
    Bessel function of the first kind J_nu(z).

    Ascending series for |z| <= 12 + |nu| or Re z <= 0; Hankel asymptotic
    expansion otherwise. Negative integer orders use J_{-n} = (-1)^n J_n.

    Raises:
        PoleError: J_nu(0) with Re nu < 0 and nu not an integer
        DomainError: J_nu(0) with purely imaginary nu
    """
    cfg = config or EngineConfig()
    nu, z = complex(nu), complex(z)
    if is_integer(nu) and nu.real < 0:
        n = -int(round(nu.real))
        positive = bessel_j(n, z, cfg)
        sign = -1.0 if n % 2 else 1.0
        return EvalResult(value=sign * positive.value, abs_err=positive.abs_err,
                          terms_used=positive.terms_used, converged=positive.converged)
    if z == 0:
        if nu == 0:
            return EvalResult(value=1.0 + 0j, abs_err=0.0, terms_used=0)
        if nu.real > 0:
            return EvalResult(value=0j, abs_err=0.0, terms_used=0)
        if nu.real == 0:
            raise DomainError(f"J_nu(0) is undefined for purely imaginary order {nu}")
        raise PoleError(f"J_nu(0) is infinite for Re(nu) < 0, nu = {nu}", location=0)
    if abs(z) <= _BESSEL_SERIES_RADIUS + abs(nu) or z.real <= 0:
        return _bessel_series(nu, z, cfg.max_terms)
    return _bessel_asymptotic(nu, z)
