#!/usr/bin/env python3

import math

EPS = 2.220446049250313e-16


def two_sum(u: float, v: float) -> tuple[float, float]:
    """
    Error-free transformation of a sum.

    Returns:
        (s, t) with s = round(u + v) and u + v = s + t exactly
    """
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class Accumulator:
    """Running compensated sum of complex values (double-double per component)."""

    def __init__(self, value: complex = 0j):
        value = complex(value)
        self._re = (value.real, 0.0)
        self._im = (value.imag, 0.0)
        self.count = 0
        self.abs_sum = abs(value)

    @staticmethod
    def _add(acc: tuple[float, float], y: float) -> tuple[float, float]:
        s, t = acc
        y, u = two_sum(y, t)
        s, t = two_sum(y, s)
        if s == 0:
            return u, 0.0
        return s, t + u

    def add(self, y: complex) -> None:
        """Add one term; abs_sum tracks the sum of magnitudes for error bounds."""
        y = complex(y)
        self._re = self._add(self._re, y.real)
        self._im = self._add(self._im, y.imag)
        self.count += 1
        self.abs_sum += abs(y)

    def extend(self, values) -> None:
        for y in values:
            self.add(y)

    @property
    def value(self) -> complex:
        return complex(self._re[0] + self._re[1], self._im[0] + self._im[1])

    def rounding_error(self) -> float:
        """Error bound from the terms' own rounding plus the final rounding."""
        return EPS * self.abs_sum + 2.0 * EPS * abs(self.value)

    def is_finite(self) -> bool:
        v = self.value
        return math.isfinite(v.real) and math.isfinite(v.imag)
