#!/usr/bin/env python3
"""
Sequence transformations used to accelerate slowly convergent series.

Every transform returns an (estimate, error) pair; the error is the spread
between the two best successive estimates, never zero unless they coincide.
"""

import logging
import math
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

_TINY = np.finfo(float).eps


def wynn_epsilon(partial_sums: Sequence[complex]) -> tuple[complex, float]:
    """
    Accelerate a sequence of partial sums with Wynn's epsilon algorithm.

    Builds the epsilon table column by column; only even columns carry
    estimates of the limit. The estimate returned is the even-column corner
    entry whose change from the previous even column is smallest.

    Args:
        partial_sums: S_0, S_1, ..., S_(N-1)

    Returns:
        (estimate, error)

    Raises:
        ValueError: If no partial sums are given
    """
    s = np.asarray(partial_sums, dtype=complex)
    n = len(s)
    if n == 0:
        raise ValueError("wynn_epsilon needs at least one partial sum")
    if n < 3:
        err = abs(s[-1] - s[-2]) if n == 2 else math.inf
        return complex(s[-1]), float(err)

    previous = np.zeros(n + 1, dtype=complex)
    current = s.copy()
    corners = [complex(s[-1])]
    for k in range(1, n):
        delta = current[1:] - current[:-1]
        scale = np.maximum(np.abs(current[1:]), 1e-300)
        if np.any(np.abs(delta) <= _TINY * scale):
            # a column has converged to working precision
            break
        following = previous[1:len(current)] + 1.0 / delta
        previous, current = current, following
        if k % 2 == 0:
            corner = complex(current[-1])
            if not (math.isfinite(corner.real) and math.isfinite(corner.imag)):
                break
            corners.append(corner)

    if len(corners) == 1:
        return corners[0], float(abs(s[-1] - s[-2]))
    best, best_err = corners[-1], math.inf
    for k in range(1, len(corners)):
        err = abs(corners[k] - corners[k - 1])
        if err <= best_err:
            best, best_err = corners[k], err
    return best, float(best_err)


def levin_u(terms: Sequence[complex], beta: float = 1.0) -> tuple[complex, float]:
    """
    Levin u-transform with remainder estimates omega_n = (n + beta) a_n.

    Args:
        terms: a_0, a_1, ..., a_(N-1); all must be non-zero
        beta: Shift parameter of the transform

    Returns:
        (estimate, error) where error compares orders N-1 and N-2
    """
    a = np.asarray(terms, dtype=complex)
    if len(a) == 0:
        raise ValueError("levin_u needs at least one term")
    partial = np.cumsum(a)
    if len(a) < 3 or np.any(a == 0):
        return complex(partial[-1]), float(abs(a[-1]))

    def transform(k: int) -> complex:
        j = np.arange(k + 1)
        omega = (beta + j) * a[: k + 1]
        weights = np.array([(-1) ** i * math.comb(k, i) for i in range(k + 1)], dtype=float)
        weights *= ((beta + j) / (beta + k)) ** (k - 1)
        numerator = np.sum(weights * partial[: k + 1] / omega)
        denominator = np.sum(weights / omega)
        return complex(numerator / denominator)

    k = len(a) - 1
    estimate = transform(k)
    err = abs(estimate - transform(k - 1))
    return estimate, float(err)


def euler_transform(partial_sums: Sequence[complex]) -> tuple[complex, float]:
    """
    Repeated averaging of adjacent partial sums, suited to alternating series.

    Returns:
        (estimate, error) with error the difference of the last two averages
    """
    level = np.asarray(partial_sums, dtype=complex)
    if len(level) == 0:
        raise ValueError("euler_transform needs at least one partial sum")
    if len(level) == 1:
        return complex(level[0]), math.inf
    while len(level) > 2:
        level = 0.5 * (level[:-1] + level[1:])
    estimate = 0.5 * (level[0] + level[1])
    return complex(estimate), float(abs(level[1] - level[0]))


def richardson(estimates: Sequence[complex], ratio: float = 4.0) -> tuple[complex, float]:
    """
    Richardson extrapolation of estimates whose error shrinks by `ratio` per step.

    Args:
        estimates: A(h), A(h/2), A(h/4), ... with error a power series in h^2
            when ratio = 4
        ratio: Error reduction factor of the leading term per step

    Returns:
        (estimate, error) from the last two diagonal entries of the Neville table
    """
    row = [complex(e) for e in estimates]
    if not row:
        raise ValueError("richardson needs at least one estimate")
    if len(row) == 1:
        return row[0], math.inf
    diagonal = [row[-1]]
    table = row
    factor = ratio
    while len(table) > 1:
        table = [
            table[j + 1] + (table[j + 1] - table[j]) / (factor - 1.0)
            for j in range(len(table) - 1)
        ]
        diagonal.append(table[-1])
        factor *= ratio
    return diagonal[-1], float(abs(diagonal[-1] - diagonal[-2]))
