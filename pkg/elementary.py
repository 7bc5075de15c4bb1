#!/usr/bin/env python3
"""Overflow-safe reciprocal trigonometric and hyperbolic functions and the Gudermannian."""

import cmath
import logging
import math

from errors import PoleError
from models import EvalResult
from numerics import EPS, complex_expm1, complex_log

logger = logging.getLogger(__name__)

# e^(-2z) underflows relative to 1 beyond this real part
_LARGE_RE = 20.0
_POLE_TOL = 1e-15
# a denominator within rounding of zero, relative to the argument, counts as a pole
_POLE_REL = 4 * EPS
_LOG_2 = math.log(2.0)


def _pole_check(value: complex, name: str, z: complex) -> None:
    if value == 0 or abs(value) <= _POLE_REL * abs(z):
        raise PoleError(f"{name} has a pole at z = {z}", location=z)


def coth_minus_one(z: complex) -> complex:
    """coth(z) - 1 = 2 / (e^(2z) - 1), without cancellation for large Re z."""
    z = complex(z)
    if z.real > _LARGE_RE:
        decay = cmath.exp(-2.0 * z)
        return 2.0 * decay / (1.0 - decay)
    denominator = complex_expm1(2.0 * z)
    _pole_check(denominator, "coth", z)
    return 2.0 / denominator


def log1p_complex(r: complex) -> complex:
    """Principal log(1 + r), accurate for small |r|."""
    r = complex(r)
    if abs(r) > 0.5:
        return complex_log(1.0 + r)
    real = 0.5 * math.log1p(2.0 * r.real + abs(r) ** 2)
    return complex(real, math.atan2(r.imag, 1.0 + r.real))


def log_cosh_ratio(upper: complex, lower: complex, u: complex) -> complex:
    """
    log((upper + cosh u) / (lower + cosh u)) on the principal branch.

    For large |Re u| the quotient is written as 1 + 2 (upper - lower) t / (1 + 2 lower t + t^2)
    with t = e^(-|u|), so cosh u is never formed.

    Raises:
        PoleError: Where either shifted cosh vanishes
    """
    upper, lower, u = complex(upper), complex(lower), complex(u)
    if u.real < 0:
        u = -u
    if u.real <= _LARGE_RE:
        cosh_u = cmath.cosh(u)
        numerator, denominator = upper + cosh_u, lower + cosh_u
        _pole_check(denominator, "cosh ratio", u)
        if numerator == 0:
            raise PoleError(f"log of a vanishing cosh ratio at u = {u}", location=u)
        return complex_log(numerator / denominator)
    t = cmath.exp(-u)
    return log1p_complex(2.0 * (upper - lower) * t / (1.0 + 2.0 * lower * t + t * t))


def log_sinh(z: complex) -> complex:
    """A logarithm of sinh z (not reduced to the principal branch), finite where sinh overflows."""
    z = complex(z)
    if z.real < 0:
        return log_sinh(-z) + 1j * math.pi
    if z.real <= _LARGE_RE:
        return complex_log(cmath.sinh(z))
    return z - _LOG_2 + log1p_complex(-cmath.exp(-2.0 * z))


def log_cosh(z: complex) -> complex:
    z = complex(z)
    if z.real < 0:
        z = -z
    if z.real <= _LARGE_RE:
        return complex_log(cmath.cosh(z))
    return z - _LOG_2 + log1p_complex(cmath.exp(-2.0 * z))


def log_coth_minus_one(z: complex) -> complex:
    """log(coth z - 1), finite where coth z - 1 underflows."""
    z = complex(z)
    if z.real <= _LARGE_RE:
        return complex_log(coth_minus_one(z))
    return _LOG_2 - 2.0 * z - log1p_complex(-cmath.exp(-2.0 * z))


def coth(z: complex) -> complex:
    z = complex(z)
    if z.real < -_LARGE_RE:
        return -(1.0 + coth_minus_one(-z))
    return 1.0 + coth_minus_one(z)


def sech(z: complex) -> complex:
    z = complex(z)
    if abs(z.real) > _LARGE_RE:
        w = z if z.real > 0 else -z
        decay = cmath.exp(-w)
        return 2.0 * decay / (1.0 + decay * decay)
    denominator = cmath.cosh(z)
    _pole_check(denominator, "sech", z)
    return 1.0 / denominator


def csch(z: complex) -> complex:
    z = complex(z)
    if abs(z.real) > _LARGE_RE:
        sign = 1.0 if z.real > 0 else -1.0
        decay = cmath.exp(-sign * z)
        return sign * 2.0 * decay / (1.0 - decay * decay)
    denominator = cmath.sinh(z)
    _pole_check(denominator, "csch", z)
    return 1.0 / denominator


def csc(z: complex) -> complex:
    z = complex(z)
    return 1j * csch(1j * z)


def sec(z: complex) -> complex:
    z = complex(z)
    return sech(1j * z)


def cot(z: complex) -> complex:
    z = complex(z)
    return 1j * coth(1j * z)


def gudermannian(z: complex) -> EvalResult:
    """
    gd(z) = 2 atan(tanh(z / 2)) on principal branches.

    Raises:
        PoleError: At z = i pi (2k + 1), where tanh(z / 2) is infinite
    """
    z = complex(z)
    half = 0.5 * z
    turns = half.imag / math.pi - 0.5
    if abs(half.real) <= _POLE_TOL and abs(turns - round(turns)) <= _POLE_TOL:
        raise PoleError(f"Gudermannian has a pole at z = {z}", location=z)
    value = 2.0 * cmath.atan(cmath.tanh(half))
    if z.imag == 0:
        value = complex(value.real, 0.0)
    return EvalResult(value=value, abs_err=4 * EPS * max(1.0, abs(value)), terms_used=1)
