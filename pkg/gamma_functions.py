#!/usr/bin/env python3
"""Gamma family: log-gamma, gamma, upper incomplete gamma, exponential integrals, polygamma."""

import cmath
import logging
import math

from bernoulli import bernoulli_number
from errors import DomainError, PoleError
from models import EvalResult
from numerics import EPS, EULER_GAMMA, LOG_2PI, complex_log, complex_pow, is_integer, is_nonpositive_integer
from utils import Accumulator

logger = logging.getLogger(__name__)

_STIRLING_TERMS = 12
_STIRLING = [float(bernoulli_number(2 * k)) / (2 * k * (2 * k - 1)) for k in range(1, _STIRLING_TERMS + 1)]
_SHIFT_TARGET = 15.0
_LENTZ_TINY = 1e-300


def _check_gamma_pole(z: complex, what: str) -> None:
    if is_nonpositive_integer(z):
        n = int(round(z.real))
        raise PoleError(f"{what} has a pole at z = {n}", location=n)


def _shift_count(z: complex, target: float) -> int:
    return max(0, int(math.ceil(target - z.real)))


def gamma_ln(z: complex) -> EvalResult:
    """
    Principal-branch log-gamma, continuous off the negative real axis.

    Shifts z upward until Re z >= 15 and applies the Stirling series with
    Bernoulli corrections: lnG(z) = lnG(z + N) - sum_{k<N} log(z + k).

    Raises:
        PoleError: At non-positive integers
    """
    z = complex(z)
    _check_gamma_pole(z, "log-gamma")
    n_shift = _shift_count(z, _SHIFT_TARGET)
    w = z + n_shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for coeff in _STIRLING:
        series += coeff * power
        power *= inv2
    log_w = complex_log(w)
    value = (w - 0.5) * log_w - w + 0.5 * LOG_2PI + series
    if n_shift:
        acc = Accumulator()
        for k in range(n_shift):
            acc.add(complex_log(z + k))
        value -= acc.value
    abs_err = EPS * (abs(value) + abs(w * log_w) + n_shift * 4.0)
    return EvalResult(value=value, abs_err=abs_err, terms_used=_STIRLING_TERMS + n_shift)


def gamma(z: complex) -> EvalResult:
    """Gamma function; real arguments use the correctly rounded real gamma."""
    z = complex(z)
    _check_gamma_pole(z, "gamma")
    if z.imag == 0 and z.real < 171.0:
        value = complex(math.gamma(z.real), 0.0)
        return EvalResult(value=value, abs_err=2 * EPS * abs(value), terms_used=1)
    lg = gamma_ln(z)
    try:
        value = cmath.exp(lg.value)
    except OverflowError:
        value = complex(math.inf, 0.0)
    return EvalResult(value=value, abs_err=abs(value) * (lg.abs_err + EPS), terms_used=lg.terms_used)


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), zero at the poles of Gamma."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return 0j
    if z.imag == 0 and z.real < 171.0:
        return complex(1.0 / math.gamma(z.real), 0.0)
    return cmath.exp(-gamma_ln(z).value)


def _lower_series_positive(s: complex, z: complex, max_terms: int) -> tuple[complex, float, int, bool]:
    """gamma(s, z) = z^s e^-z sum z^n / (s)_(n+1), for Re z >= 0."""
    term = 1.0 / s
    acc = Accumulator(term)
    converged = False
    n = 0
    for n in range(1, max_terms):
        term *= z / (s + n)
        acc.add(term)
        if abs(term) < EPS * abs(acc.value):
            converged = True
            break
    prefactor = cmath.exp(s * complex_log(z) - z)
    value = prefactor * acc.value
    return value, abs(prefactor) * acc.rounding_error() * 4, n + 1, converged


def _lower_series_negative(s: complex, z: complex, max_terms: int) -> tuple[complex, float, int, bool]:
    """gamma(s, z) = z^s sum (-z)^n / (n! (s + n)), for Re z < 0."""
    term = 1.0 + 0j
    acc = Accumulator(term / s)
    converged = False
    n = 0
    for n in range(1, max_terms):
        term *= -z / n
        contribution = term / (s + n)
        acc.add(contribution)
        if abs(contribution) < EPS * abs(acc.value) and n > abs(z):
            converged = True
            break
    prefactor = complex_pow(z, s)
    value = prefactor * acc.value
    return value, abs(prefactor) * acc.rounding_error() * 4, n + 1, converged


def _upper_continued_fraction(s: complex, z: complex, max_terms: int) -> tuple[complex, float, int, bool]:
    """Legendre continued fraction for Gamma(s, z), evaluated by modified Lentz."""
    b = z + 1.0 - s
    c = 1.0 / _LENTZ_TINY
    d = 1.0 / b
    h = d
    converged = False
    i = 0
    for i in range(1, max_terms):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = b + an / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            converged = True
            break
    value = cmath.exp(s * complex_log(z) - z) * h
    return value, abs(value) * EPS * (8 + math.sqrt(i)), i, converged


def _e1_series(z: complex, max_terms: int) -> tuple[complex, float, int, bool]:
    """E1(z) = -gamma - log z - sum (-z)^n / (n n!)."""
    term = 1.0 + 0j
    acc = Accumulator()
    converged = False
    n = 0
    for n in range(1, max_terms):
        term *= -z / n
        contribution = term / n
        acc.add(contribution)
        if abs(contribution) < EPS * max(abs(acc.value), 1e-300) and n > abs(z):
            converged = True
            break
    value = -EULER_GAMMA - complex_log(z) - acc.value
    return value, acc.rounding_error() * 4 + EPS * abs(value), n, converged


def _use_continued_fraction(s: complex, z: complex) -> bool:
    if abs(z) < 1.0:
        return False
    if z.real <= 0 and abs(z.imag) <= 1.0:
        return False
    return abs(z) >= s.real + 1.0 or abs(z) > 2.0 * abs(s)


def incomplete_gamma_upper(s: complex, z: complex, max_terms: int = 200000) -> EvalResult:
    """
    Upper incomplete gamma Gamma(s, z) on the principal branch.

    Args:
        s: Order, any complex value
        z: Lower limit; Gamma(s, 0) = Gamma(s) for Re s > 0
        max_terms: Series / continued-fraction budget

    Returns:
        EvalResult; converged is False if the budget ran out

    Raises:
        PoleError: For z = 0 with Re s <= 0
    """
    s = complex(s)
    z = complex(z)
    if z == 0:
        if s.real > 0:
            return gamma(s)
        raise PoleError(f"Gamma({s}, 0) diverges", location=(s, z))
    if _use_continued_fraction(s, z):
        value, err, used, converged = _upper_continued_fraction(s, z, max_terms)
        method = "continued_fraction"
    elif is_nonpositive_integer(s):
        m = -int(round(s.real))
        e1, err, used, converged = _e1_series(z, max_terms)
        # Gamma(-m, z) = (-1)^m/m! [E1(z) - e^-z sum_{k<m} (-1)^k k! / z^(k+1)]
        tail = 0j
        for k in range(m):
            tail += (-1) ** k * math.factorial(k) / z ** (k + 1)
        value = ((-1) ** m / math.factorial(m)) * (e1 - cmath.exp(-z) * tail)
        err = (err + EPS * abs(cmath.exp(-z) * tail)) / math.factorial(m)
        method = "e1_series"
    else:
        if z.real >= 0:
            lower, err, used, converged = _lower_series_positive(s, z, max_terms)
        else:
            lower, err, used, converged = _lower_series_negative(s, z, max_terms)
        complete = gamma(s)
        value = complete.value - lower
        err += complete.abs_err + EPS * abs(lower)
        method = "series"
    if not converged:
        logger.warning(f"Incomplete gamma Gamma({s}, {z}) did not converge via {method}")
    logger.debug(f"Gamma({s}, {z}) via {method} in {used} terms")
    return EvalResult(value=value, abs_err=max(err, EPS * abs(value)), terms_used=used, converged=converged)


def exp_integral_e(n: int, z: complex, max_terms: int = 200000) -> EvalResult:
    """
    Generalized exponential integral E_n(z) = z^(n-1) Gamma(1-n, z).

    Raises:
        DomainError: If n < 1
        PoleError: For E_1(0)
    """
    if n < 1:
        raise DomainError(f"E_n requires n >= 1, got {n}")
    z = complex(z)
    if z == 0:
        if n == 1:
            raise PoleError("E_1 has a pole at z = 0", location=0)
        return EvalResult(value=complex(1.0 / (n - 1)), abs_err=EPS, terms_used=0)
    upper = incomplete_gamma_upper(1 - n, z, max_terms)
    factor = complex_pow(z, n - 1)
    return EvalResult(
        value=factor * upper.value,
        abs_err=abs(factor) * upper.abs_err,
        terms_used=upper.terms_used,
        converged=upper.converged,
    )


def exp_integral_ei(z: complex, max_terms: int = 200000) -> EvalResult:
    """
    Exponential integral Ei(z).

    Re z < 0 goes through -E1(-z) +- i pi (real on the negative axis); elsewhere
    the principal extension gamma + (log z - log(1/z))/2 + sum z^n/(n n!).

    Raises:
        PoleError: At z = 0
    """
    z = complex(z)
    if z == 0:
        raise PoleError("Ei has a logarithmic singularity at z = 0", location=0)
    if z.real < 0:
        e1 = incomplete_gamma_upper(0, -z, max_terms)
        value = -e1.value
        if z.imag > 0:
            value += 1j * math.pi
        elif z.imag < 0:
            value -= 1j * math.pi
        else:
            value = complex(value.real, 0.0)
        return EvalResult(value=value, abs_err=e1.abs_err, terms_used=e1.terms_used, converged=e1.converged)
    if abs(z) > 40.0:
        return _ei_asymptotic(z)
    term = 1.0 + 0j
    acc = Accumulator()
    converged = False
    n = 0
    for n in range(1, max_terms):
        term *= z / n
        contribution = term / n
        acc.add(contribution)
        if abs(contribution) < EPS * max(abs(acc.value), 1e-300) and n > abs(z):
            converged = True
            break
    log_part = 0.5 * (complex_log(z) - complex_log(1.0 / z))
    value = EULER_GAMMA + log_part + acc.value
    if z.imag == 0:
        value = complex(value.real, 0.0)
    return EvalResult(value=value, abs_err=acc.rounding_error() * 4 + EPS * abs(value),
                      terms_used=n, converged=converged)


def _ei_asymptotic(z: complex) -> EvalResult:
    acc = Accumulator(1.0)
    term = 1.0 + 0j
    k = 0
    for k in range(1, 60):
        next_term = term * k / z
        if abs(next_term) > abs(term):
            break
        term = next_term
        acc.add(term)
        if abs(term) < EPS * abs(acc.value):
            break
    value = cmath.exp(z) / z * acc.value
    if z.imag > 0:
        value += 1j * math.pi
    elif z.imag < 0:
        value -= 1j * math.pi
    return EvalResult(value=value, abs_err=abs(value) * EPS * 16 + abs(term * cmath.exp(z) / z),
                      terms_used=k, converged=True)


def exp_integral(kind: str, z: complex, n: int = 1, max_terms: int = 200000) -> EvalResult:
    """Dispatch on kind: "E" for E_n(z), "Ei" for Ei(z)."""
    if kind == "E":
        return exp_integral_e(n, z, max_terms)
    if kind == "Ei":
        return exp_integral_ei(z, max_terms)
    raise DomainError(f"Unknown exponential integral kind {kind!r}")


def polygamma(n: int, z: complex) -> EvalResult:
    """
    Polygamma psi^(n)(z) by upward shift to Re z >= 15 + n and the asymptotic series.

    Raises:
        DomainError: If n < 0
        PoleError: At non-positive integers
    """
    if n < 0:
        raise DomainError(f"Polygamma order must be non-negative, got {n}")
    z = complex(z)
    _check_gamma_pole(z, f"polygamma({n})")
    n_shift = _shift_count(z, _SHIFT_TARGET + n)
    w = z + n_shift
    inv = 1.0 / w
    inv2 = inv * inv
    if n == 0:
        series = complex_log(w) - 0.5 * inv
        power = inv2
        for k in range(1, _STIRLING_TERMS + 1):
            series -= float(bernoulli_number(2 * k)) / (2 * k) * power
            power *= inv2
    else:
        fact_nm1 = math.factorial(n - 1)
        series = fact_nm1 * inv ** n + math.factorial(n) * 0.5 * inv ** (n + 1)
        power = inv ** (n + 2)
        for k in range(1, _STIRLING_TERMS + 1):
            coeff = float(bernoulli_number(2 * k)) * math.factorial(2 * k + n - 1) / math.factorial(2 * k)
            series += coeff * power
            power *= inv2
        series *= (-1) ** (n + 1)
    if n_shift:
        acc = Accumulator()
        for k in range(n_shift):
            acc.add((z + k) ** (-(n + 1)))
        series -= (-1) ** n * math.factorial(n) * acc.value
        err = EPS * (abs(series) + math.factorial(n) * acc.abs_sum) * 4
    else:
        err = EPS * abs(series) * 4
    return EvalResult(value=series, abs_err=err, terms_used=_STIRLING_TERMS + n_shift)


def harmonic(nu: complex) -> EvalResult:
    """Harmonic number H_nu = psi(nu + 1) + gamma."""
    nu = complex(nu)
    if is_integer(nu) and 0 <= nu.real <= 1000:
        acc = Accumulator()
        for k in range(1, int(round(nu.real)) + 1):
            acc.add(1.0 / k)
        return EvalResult(value=acc.value, abs_err=acc.rounding_error(), terms_used=acc.count)
    psi = polygamma(0, nu + 1)
    return EvalResult(value=psi.value + EULER_GAMMA, abs_err=psi.abs_err + EPS, terms_used=psi.terms_used)
