#!/usr/bin/env python3
"""Principal-branch complex elementary functions and fundamental constants."""

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from errors import DomainError

EPS = 2.220446049250313e-16

# 35 significant digits; split into double-double pairs on first use.
_CONSTANT_LITERALS = {
    "pi": "3.1415926535897932384626433832795029",
    "euler_gamma": "0.57721566490153286060651209008240243",
    "catalan": "0.91596559417721901505460351493238411",
    "glaisher": "1.2824271291006226368753425688697917",
    "log_2pi": "1.8378770664093454835606594728112353",
}


@lru_cache(maxsize=None)
def constant_pair(name: str) -> tuple[float, float]:
    """
    Double-double representation (hi, lo) of a named constant.

    Args:
        name: One of pi, euler_gamma, catalan, glaisher, log_2pi

    Returns:
        Pair with hi + lo equal to the literal to about 32 digits

    Raises:
        DomainError: If the name is unknown
    """
    try:
        exact = Fraction(_CONSTANT_LITERALS[name])
    except KeyError:
        raise DomainError(f"Unknown constant: {name}") from None
    hi = float(exact)
    lo = float(exact - Fraction(hi))
    return hi, lo


def constant(name: str) -> complex:
    """Value of a named constant rounded to double precision."""
    return complex(constant_pair(name)[0], 0.0)


PI = constant_pair("pi")[0]
EULER_GAMMA = constant_pair("euler_gamma")[0]
LOG_2PI = constant_pair("log_2pi")[0]


def complex_log(z: complex) -> complex:
    """
    Principal logarithm with imaginary part in (-pi, pi].

    Raises:
        DomainError: If z is zero
    """
    z = complex(z)
    if z == 0:
        raise DomainError("log(0) is undefined")
    w = cmath.log(z)
    # cmath maps the negative real axis with a -0.0 imaginary part to -pi
    if w.imag == -math.pi:
        w = complex(w.real, math.pi)
    return w


def _integer_exponent(w: complex) -> Optional[int]:
    if w.imag == 0 and w.real == math.floor(w.real) and abs(w.real) <= 1024:
        return int(w.real)
    return None


def complex_pow(z: complex, w: complex) -> complex:
    """
    Principal power exp(w * log z).

    Integer exponents use repeated multiplication and positive real bases with
    real exponents use the real power, so small integer cases are exact.

    Raises:
        DomainError: For 0^w with Re(w) < 0, or Re(w) = 0 and w != 0
    """
    z = complex(z)
    w = complex(w)
    if z == 0:
        if w == 0:
            return 1 + 0j
        if w.real > 0:
            return 0j
        raise DomainError(f"0^{w} is undefined")
    n = _integer_exponent(w)
    try:
        if n is not None:
            if z.imag == 0:
                return complex(z.real ** n, 0.0)
            return z ** n
        if z.imag == 0 and z.real > 0 and w.imag == 0:
            return complex(math.pow(z.real, w.real), 0.0)
        return cmath.exp(w * complex_log(z))
    except OverflowError:
        return complex(math.inf, 0.0)


def complex_expm1(z: complex) -> complex:
    """e^z - 1 without cancellation for small |z|."""
    z = complex(z)
    x, y = z.real, z.imag
    if abs(x) > 0.5 or abs(y) > 0.5:
        return cmath.exp(z) - 1.0
    em1 = math.expm1(x)
    real = em1 * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    imag = math.exp(x) * math.sin(y)
    return complex(real, imag)


def is_nonpositive_integer(z: complex, tol: float = 0.0) -> bool:
    """True when z lies on {0, -1, -2, ...} (within tol)."""
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def is_integer(z: complex, tol: float = 0.0) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def is_finite(z: complex) -> bool:
    return cmath.isfinite(complex(z))
