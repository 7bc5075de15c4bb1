#!/usr/bin/env python3
"""Exact Bernoulli numbers and the Bernoulli/Euler polynomial coefficient tables."""

from fractions import Fraction
from functools import lru_cache
from math import comb

from errors import UnsupportedDegreeError

MAX_EULER_DEGREE = 40


@lru_cache(maxsize=1)
def _bernoulli_table(nmax: int = 128) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, nmax + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += comb(m + 1, k) * table[k]
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli_number(n: int) -> Fraction:
    """B_n as an exact rational with B_1 = -1/2."""
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    table = _bernoulli_table()
    if n >= len(table):
        raise UnsupportedDegreeError(f"Bernoulli number B_{n} is beyond the table")
    return table[n]


def bernoulli_polynomial(n: int, x: complex) -> complex:
    """B_n(x) = sum_k C(n, k) B_k x^(n-k), evaluated by Horner."""
    x = complex(x)
    result = 0j
    # coefficient of x^j is C(n, j) B_(n-j)
    for j in range(n, -1, -1):
        result = result * x + float(comb(n, j) * bernoulli_number(n - j))
    return result


@lru_cache(maxsize=None)
def euler_coefficients(n: int) -> tuple[Fraction, ...]:
    """
    Exact coefficients c_0..c_n of the Euler polynomial E_n(x) = sum c_j x^j.

    Uses E_n(x) = 2/(n+1) (B_(n+1)(x) - 2^(n+1) B_(n+1)(x/2)).

    Raises:
        UnsupportedDegreeError: If n exceeds MAX_EULER_DEGREE
    """
    if n < 0:
        raise ValueError("Euler polynomial degree must be non-negative")
    if n > MAX_EULER_DEGREE:
        raise UnsupportedDegreeError(
            f"Euler polynomial degree {n} exceeds the supported maximum {MAX_EULER_DEGREE}"
        )
    scale = Fraction(2, n + 1)
    return tuple(
        scale * comb(n + 1, j) * bernoulli_number(n + 1 - j) * (1 - 2 ** (n + 1 - j))
        for j in range(n + 1)
    )


def euler_polynomial(n: int, x: complex) -> complex:
    x = complex(x)
    result = 0j
    for c in reversed(euler_coefficients(n)):
        result = result * x + float(c)
    return result


def euler_number(n: int) -> int:
    """Euler number E_n = 2^n E_n(1/2) (E_0 = 1, E_2 = -1, E_4 = 5)."""
    coeffs = euler_coefficients(n)
    value = sum(c * Fraction(1, 2) ** j for j, c in enumerate(coeffs)) * 2 ** n
    return int(value)
