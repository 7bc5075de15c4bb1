#!/usr/bin/env python3
"""Hurwitz zeta, Stieltjes constants, the Lerch transcendent and the polylogarithm."""

import cmath
import logging
import math
from fractions import Fraction
from typing import Optional

from acceleration import richardson, wynn_epsilon
from bernoulli import bernoulli_number, bernoulli_polynomial
from config import EngineConfig
from errors import DomainError, PoleError
from gamma_functions import polygamma
from models import EvalResult
from numerics import EPS, complex_log, complex_pow, is_integer, is_nonpositive_integer
from utils import Accumulator

logger = logging.getLogger(__name__)

_EM_TERMS = 12
# B_2k / (2k)!
_EM_COEFFS = [float(bernoulli_number(2 * k)) / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)]
_CLOSED_FORM_MAX_K = 12
_MAX_ROTATION_DENOMINATOR = 64
_WYNN_TERMS = 96
_UNIT_CIRCLE_TOL = 1e-15


def _em_shift(s: complex) -> int:
    return max(10, 20 - math.ceil(max(0.0, -s.real))) + math.ceil(abs(s.imag))


def hurwitz_zeta(s: complex, a: complex, d: int = 0) -> EvalResult:
    """
    Hurwitz zeta zeta(s, a) (d = 0) or its s-derivative (d = 1).

    Euler-Maclaurin summation: the first N terms directly, then the integral,
    half-term and twelve Bernoulli corrections at w = a + N. The derivative
    differentiates each of those pieces analytically.

    Raises:
        PoleError: At s = 1
        DomainError: If Re a <= 0 or d is not 0 or 1
    """
    s = complex(s)
    a = complex(a)
    if d not in (0, 1):
        raise DomainError(f"zeta derivative order must be 0 or 1, got {d}")
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1", location=1)
    if a.real <= 0:
        raise DomainError(f"hurwitz_zeta requires Re(a) > 0, got a = {a}")

    if d == 0 and is_nonpositive_integer(s) and -s.real < 120:
        m = -int(round(s.real))
        value = -bernoulli_polynomial(m + 1, a) / (m + 1)
        return EvalResult(value=value, abs_err=EPS * max(1.0, abs(value)) * (m + 2), terms_used=m + 1)

    n_direct = _em_shift(s)
    acc = Accumulator()
    for n in range(n_direct):
        base = n + a
        term = complex_pow(base, -s)
        acc.add(term if d == 0 else -complex_log(base) * term)

    w = a + n_direct
    log_w = complex_log(w)
    w_pow = complex_pow(w, -s)
    tail = Accumulator()
    if d == 0:
        tail.add(w * w_pow / (s - 1))
        tail.add(0.5 * w_pow)
    else:
        tail.add(-log_w * w * w_pow / (s - 1) - w * w_pow / (s - 1) ** 2)
        tail.add(-0.5 * log_w * w_pow)

    # (s)_(2k-1) and its s-derivative, built up by the product rule
    poch, dpoch = s, 1.0 + 0j
    w_k = w_pow / w
    inv_w2 = 1.0 / (w * w)
    last = 0.0
    for k in range(1, _EM_TERMS + 1):
        coeff = _EM_COEFFS[k - 1]
        if d == 0:
            term = coeff * poch * w_k
        else:
            term = coeff * (dpoch - log_w * poch) * w_k
        tail.add(term)
        last = abs(term)
        f1, f2 = s + 2 * k - 1, s + 2 * k
        dpoch = dpoch * f1 * f2 + poch * (f1 + f2)
        poch = poch * f1 * f2
        w_k *= inv_w2
        if poch == 0 and dpoch == 0:
            last = 0.0
            break

    value = acc.value + tail.value
    abs_err = last + acc.rounding_error() + tail.rounding_error() + EPS * abs(value)
    return EvalResult(value=value, abs_err=abs_err, terms_used=n_direct + _EM_TERMS)


def _zeta_regular_part(h: float, a: complex) -> complex:
    """zeta(1 + h, a) - 1/h from the Euler-Maclaurin expansion, finite at h = 0."""
    s = 1.0 + h
    n_direct = 20
    acc = Accumulator()
    for n in range(n_direct):
        acc.add(complex_pow(n + a, -s))
    w = a + n_direct
    log_w = complex_log(w)
    x = -h * log_w
    # (w^-h - 1)/h = -log w * (e^x - 1)/x
    series, term, j = 1.0 + 0j, 1.0 + 0j, 1
    while abs(term) > EPS * 1e-2 and j < 40:
        term *= x / (j + 1)
        series += term
        j += 1
    acc.add(-log_w * series)
    w_pow = complex_pow(w, -s)
    acc.add(0.5 * w_pow)
    poch = s
    w_k = w_pow / w
    for k in range(1, _EM_TERMS + 1):
        acc.add(_EM_COEFFS[k - 1] * poch * w_k)
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        w_k /= w * w
    return acc.value


def stieltjes_gamma(n: int, a: complex = 1.0) -> EvalResult:
    """
    Generalized Stieltjes constants gamma_0(a) and gamma_1(a).

    zeta(s, a) = 1/(s-1) + sum_n (-1)^n gamma_n(a) (s-1)^n / n!, so gamma_0 is
    the regular part at s = 1 and gamma_1 is minus its slope, obtained by
    Richardson extrapolation of central differences at h = 2^-3 ... 2^-8.

    Raises:
        DomainError: If Re a <= 0 or n is not 0 or 1
    """
    a = complex(a)
    if n not in (0, 1):
        raise DomainError(f"Only Stieltjes constants of order 0 and 1 are supported, got {n}")
    if a.real <= 0:
        raise DomainError(f"stieltjes_gamma requires Re(a) > 0, got a = {a}")
    if n == 0:
        value = _zeta_regular_part(0.0, a)
        return EvalResult(value=value, abs_err=8 * EPS * max(1.0, abs(value)), terms_used=20 + _EM_TERMS)

    differences = []
    for j in range(3, 9):
        h = 2.0 ** -j
        differences.append((_zeta_regular_part(h, a) - _zeta_regular_part(-h, a)) / (2 * h))
    slope, err = richardson(differences, ratio=4.0)
    return EvalResult(value=-slope, abs_err=max(err, 1e3 * EPS), terms_used=12 * (20 + _EM_TERMS))


def _closed_form_negative_order(z: complex, k: int, a: complex) -> complex:
    """
    Phi(z, -k, a) = sum_j c_j u^j with u = 1/(1 - z).

    Generated from Phi(z, 0, a) = u by k applications of (a + z d/dz), using
    z d/dz u^j = j (u^(j+1) - u^j).
    """
    u = 1.0 / (1.0 - z)
    coeffs = [0j, 1.0 + 0j]
    for _ in range(k):
        following = [0j] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            following[j] += c * (a - j)
            following[j + 1] += c * j
        coeffs = following
    value = 0j
    for c in reversed(coeffs):
        value = value * u + c
    return value


def _lerch_term(z_pow: complex, base: complex, s: complex, d: int) -> complex:
    term = z_pow * complex_pow(base, -s)
    return term if d == 0 else -complex_log(base) * term


def _direct_series(z: complex, s: complex, a: complex, d: int, cfg: EngineConfig) -> EvalResult:
    acc = Accumulator()
    z_pow = 1.0 + 0j
    previous = None
    tail = math.inf
    converged = False
    n = 0
    min_terms = int(abs(s)) + 4
    for n in range(cfg.max_terms):
        term = _lerch_term(z_pow, n + a, s, d)
        acc.add(term)
        magnitude = abs(term)
        if previous and n >= min_terms:
            ratio = max(magnitude / previous, abs(z))
            if ratio < 1.0:
                tail = magnitude * ratio / (1.0 - ratio)
                if tail <= EPS * abs(acc.value) or (magnitude == 0 and acc.value == 0):
                    converged = True
                    break
        previous = magnitude
        z_pow *= z
        if z_pow == 0:
            tail = 0.0
            converged = True
            break
    value = acc.value
    return EvalResult(value=value, abs_err=min(tail, abs(value) + 1.0) + acc.rounding_error(),
                      terms_used=n + 1, converged=converged)


def _wynn_series(z: complex, s: complex, a: complex, d: int, count: int) -> tuple[complex, float]:
    partial = []
    acc = Accumulator()
    z_pow = 1.0 + 0j
    for n in range(count):
        acc.add(_lerch_term(z_pow, n + a, s, d))
        partial.append(acc.value)
        z_pow *= z
    return wynn_epsilon(partial)


def _accelerated_series(z: complex, s: complex, a: complex, d: int, cfg: EngineConfig) -> EvalResult:
    """Wynn epsilon on partial sums at two lengths; agreement means convergence."""
    short_value, short_err = _wynn_series(z, s, a, d, (_WYNN_TERMS * 3) // 4)
    value, err = _wynn_series(z, s, a, d, _WYNN_TERMS)
    spread = abs(value - short_value)
    abs_err = max(err, spread, EPS * abs(value))
    converged = abs_err <= max(cfg.tolerance(value), 1e3 * EPS * abs(value))
    return EvalResult(value=value, abs_err=abs_err, terms_used=_WYNN_TERMS, converged=converged)


def _rational_rotation(z: complex) -> Optional[Fraction]:
    theta = cmath.phase(z) / (2 * math.pi)
    frac = Fraction(theta).limit_denominator(_MAX_ROTATION_DENOMINATOR)
    if abs(theta - float(frac)) <= 1e-14:
        return frac
    return None


def _rotation_decomposition(z: complex, s: complex, a: complex, d: int, q: int) -> EvalResult:
    """
    Phi(z, s, a) = q^-s sum_r z^r zeta(s, (r + a)/q) for z^q = 1.

    At s = 1 the poles cancel and the digamma / Stieltjes form is used.
    """
    acc = Accumulator()
    err = 0.0
    log_q = math.log(q)
    z_pow = 1.0 + 0j
    roots = []
    for r in range(q):
        roots.append(z_pow)
        z_pow *= z
    # snap accumulated rounding back onto the circle
    roots = [root / abs(root) for root in roots]

    if s == 1:
        for r, root in enumerate(roots):
            x = (r + a) / q
            psi = polygamma(0, x)
            if d == 0:
                acc.add(-root * psi.value / q)
                err += psi.abs_err / q
            else:
                g1 = stieltjes_gamma(1, x)
                acc.add(root * (-g1.value + log_q * psi.value) / q)
                err += (g1.abs_err + log_q * psi.abs_err) / q
        return EvalResult(value=acc.value, abs_err=err + acc.rounding_error(), terms_used=q)

    q_pow = complex_pow(q, -s)
    for r, root in enumerate(roots):
        x = (r + a) / q
        zeta = hurwitz_zeta(s, x, 0)
        if d == 0:
            acc.add(root * q_pow * zeta.value)
            err += abs(q_pow) * zeta.abs_err
        else:
            dzeta = hurwitz_zeta(s, x, 1)
            acc.add(root * q_pow * (dzeta.value - log_q * zeta.value))
            err += abs(q_pow) * (dzeta.abs_err + log_q * zeta.abs_err)
    return EvalResult(value=acc.value, abs_err=err + acc.rounding_error(), terms_used=q)


def lerch_phi(
    z: complex,
    s: complex,
    a: complex,
    d: int = 0,
    config: Optional[EngineConfig] = None,
) -> EvalResult:
    """
    Lerch transcendent Phi(z, s, a) = sum_{n>=0} z^n / (n + a)^s, or its s-derivative.

    Strategy by region:
        z = 0                    a^-s
        z = 1                    Hurwitz zeta
        s = -k, k <= 12          closed rational form in 1/(1 - z)
        |z| <= 0.9               direct series with geometric tail bound
        0.9 < |z| < 1            Wynn-accelerated series, direct as fallback
        |z| = 1, rational angle  decomposition into Hurwitz zeta values
        |z| = 1 otherwise        Wynn-accelerated series (Re s > 0)

    Args:
        z: Argument
        s: Order
        a: Shift, not a non-positive integer
        d: 0 for Phi, 1 for d/ds Phi
        config: Engine budgets; defaults to EngineConfig()

    Returns:
        EvalResult with the value and its error estimate

    Raises:
        PoleError: If a is a non-positive integer
        DomainError: Outside the convergent region or its supported continuation
    """
    cfg = config or EngineConfig()
    z, s, a = complex(z), complex(s), complex(a)
    if d not in (0, 1):
        raise DomainError(f"Lerch derivative order must be 0 or 1, got {d}")
    if is_nonpositive_integer(a):
        raise PoleError(f"Lerch Phi has a pole at a = {int(round(a.real))}", location=a)

    if z == 0:
        value = complex_pow(a, -s)
        if d == 1:
            value = -complex_log(a) * value
        return EvalResult(value=value, abs_err=4 * EPS * abs(value), terms_used=1)

    integer_order = is_integer(s) and s.real <= 0
    if d == 0 and z != 1 and integer_order and -s.real <= _CLOSED_FORM_MAX_K:
        k = -int(round(s.real))
        value = _closed_form_negative_order(z, k, a)
        scale = abs(1.0 / (1.0 - z)) ** (k + 1) * max(1.0, abs(a)) ** k
        return EvalResult(value=value, abs_err=EPS * (abs(value) + scale) * (k + 2), terms_used=k + 1)

    if a.real <= 0:
        shift = math.ceil(1.0 - a.real)
        head = Accumulator()
        z_pow = 1.0 + 0j
        for n in range(shift):
            head.add(_lerch_term(z_pow, n + a, s, d))
            z_pow *= z
        rest = lerch_phi(z, s, a + shift, d, cfg)
        value = head.value + z_pow * rest.value
        return EvalResult(value=value, abs_err=abs(z_pow) * rest.abs_err + head.rounding_error(),
                          terms_used=rest.terms_used + shift, converged=rest.converged)

    if z == 1:
        return hurwitz_zeta(s, a, d)

    modulus = abs(z)
    try:
        if modulus <= 0.9:
            return _direct_series(z, s, a, d, cfg)
        if modulus < 1.0 - _UNIT_CIRCLE_TOL:
            result = _accelerated_series(z, s, a, d, cfg)
            if result.converged:
                return result
            logger.debug(f"Wynn acceleration inconclusive for Phi({z}, {s}, {a}); summing directly")
            return _direct_series(z, s, a, d, cfg)
        if modulus <= 1.0 + _UNIT_CIRCLE_TOL:
            rotation = _rational_rotation(z)
            if rotation is not None and rotation.denominator > 1:
                return _rotation_decomposition(z, s, a, d, rotation.denominator)
            if s.real <= 0:
                raise DomainError(f"Lerch Phi on |z| = 1 needs Re(s) > 0 for irrational angles, got s = {s}")
            return _accelerated_series(z, s, a, d, cfg)
    except (DomainError, PoleError):
        raise
    except Exception as e:
        logger.error(f"Failed to evaluate Lerch Phi({z}, {s}, {a}, d={d}): {e}")
        raise
    if integer_order:
        raise DomainError(f"Lerch Phi for |z| > 1 needs s = -k with k <= {_CLOSED_FORM_MAX_K} and d = 0 (z = {z}, s = {s})")
    raise DomainError(f"Lerch series diverges for |z| > 1 with non-integer s (z = {z}, s = {s})")


def polylog(s: complex, z: complex, d: int = 0, config: Optional[EngineConfig] = None) -> EvalResult:
    """Polylogarithm Li_s(z) = z Phi(z, s, 1), or its s-derivative for d = 1."""
    z = complex(z)
    if z == 0:
        return EvalResult(value=0j, abs_err=0.0, terms_used=0)
    phi = lerch_phi(z, s, 1.0, d, config)
    return EvalResult(value=z * phi.value, abs_err=abs(z) * phi.abs_err,
                      terms_used=phi.terms_used, converged=phi.converged, diagnostics=phi.diagnostics)
