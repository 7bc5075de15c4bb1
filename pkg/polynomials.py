#!/usr/bin/env python3
"""Classical polynomial families: generalized Laguerre, Gegenbauer and Euler."""

import logging

from bernoulli import euler_polynomial
from errors import DomainError
from models import EvalResult, PolyFamily
from numerics import EPS

logger = logging.getLogger(__name__)

FAMILIES = ("laguerre", "gegenbauer", "euler_poly")


def laguerre(n: int, alpha: complex, x: complex) -> complex:
    """L_n^alpha(x) by (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}."""
    previous, current = 1.0 + 0j, 1.0 + alpha - x
    if n == 0:
        return previous
    for k in range(1, n):
        previous, current = current, ((2 * k + 1 + alpha - x) * current - (k + alpha) * previous) / (k + 1)
    return current


def gegenbauer(n: int, lam: complex, x: complex) -> complex:
    """C_n^(lam)(x) by (k+1) C_{k+1} = 2 (k + lam) x C_k - (k + 2 lam - 1) C_{k-1}."""
    previous, current = 1.0 + 0j, 2.0 * lam * x
    if n == 0:
        return previous
    for k in range(1, n):
        previous, current = current, (2.0 * (k + lam) * x * current - (k + 2.0 * lam - 1.0) * previous) / (k + 1)
    return current


def poly_eval(spec: PolyFamily, x: complex) -> EvalResult:
    """
    Evaluate a classical polynomial of the given family and degree.

    Args:
        spec: Family, degree and parameter (alpha for Laguerre, lambda for Gegenbauer)
        x: Argument

    Returns:
        EvalResult with a rounding-level error estimate

    Raises:
        DomainError: Unknown family or negative degree
        UnsupportedDegreeError: Euler polynomial of degree above 40
    """
    if spec.family not in FAMILIES:
        raise DomainError(f"Unknown polynomial family: {spec.family}")
    if spec.degree < 0:
        raise DomainError(f"Polynomial degree must be non-negative, got {spec.degree}")
    x = complex(x)
    parameter = complex(spec.parameter)
    if spec.family == "laguerre":
        value = laguerre(spec.degree, parameter, x)
    elif spec.family == "gegenbauer":
        value = gegenbauer(spec.degree, parameter, x)
    else:
        value = euler_polynomial(spec.degree, x)
    scale = max(1.0, abs(x)) ** spec.degree * max(1.0, abs(parameter)) ** min(spec.degree, 4)
    return EvalResult(value=value, abs_err=EPS * (spec.degree + 1) * max(abs(value), scale), terms_used=spec.degree + 1)
