#!/usr/bin/env python3
"""
Adaptive quadrature for complex-valued integrands of a real variable.

Smooth panels use 15-point Gauss-Kronrod with worst-panel-first bisection;
panels with endpoint singularities use tanh-sinh. Half-lines are split at
B = max(1, breakpoints): [0, B] by tanh-sinh and [B, oo) by x = B e^t
followed by exp-sinh, or by half-period pieces plus Wynn epsilon when the
integrand oscillates.
"""

import heapq
import logging
import math
from typing import Callable, Optional

import numpy as np

from acceleration import wynn_epsilon
from config import EngineConfig
from errors import DivergenceError, EvaluationError, NumericsError
from models import Integrand, QuadResult
from numerics import EPS, complex_pow

logger = logging.getLogger(__name__)

_PI_OVER_2 = math.pi / 2.0

# Kronrod abscissae (the odd entries are the 7-point Gauss nodes) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_WEIGHTS = np.zeros(15)
_G_WEIGHTS[[1, 3, 5]] = _WG[:3]
_G_WEIGHTS[7] = _WG[3]
_G_WEIGHTS[[9, 11, 13]] = _WG[2::-1]

_MAX_EXP_ARG = 700.0
_NEGLIGIBLE_WEIGHT = 1e-8
_OSCILLATORY_BATCH = 20
_OSCILLATORY_MAX_PIECES = 400


def _sample(f: Callable[[float], complex], x: float) -> complex:
    try:
        value = complex(f(x))
    except (OverflowError, ZeroDivisionError, NumericsError) as e:
        raise EvaluationError(f"Integrand failed at x = {x}: {e}") from e
    return value


def gauss_kronrod_panel(f: Callable[[float], complex], lo: float, hi: float) -> tuple[complex, float]:
    """
    One 15-point Kronrod panel on [lo, hi].

    Returns:
        (Kronrod estimate, |Kronrod - Gauss| error estimate)

    Raises:
        EvaluationError: If the integrand is non-finite at a node
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    values = np.array([_sample(f, center + half * x) for x in _GK_NODES], dtype=complex)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"Non-finite integrand value on [{lo}, {hi}]")
    kronrod = half * np.dot(_GK_WEIGHTS, values)
    gauss = half * np.dot(_G_WEIGHTS, values)
    err = abs(kronrod - gauss)
    return complex(kronrod), float(max(err, EPS * abs(kronrod)))


def adaptive_gauss_kronrod(f: Callable[[float], complex], lo: float, hi: float, cfg: EngineConfig) -> QuadResult:
    """Worst-panel-first bisection until the summed error meets the tolerance."""
    value, err = gauss_kronrod_panel(f, lo, hi)
    counter = 0
    heap = [(-err, counter, lo, hi, value, err, 0)]
    total_value, total_err = value, err
    evaluations, subdivisions = 15, 0
    converged = False
    while heap:
        if total_err <= cfg.tolerance(total_value):
            converged = True
            break
        if subdivisions >= cfg.max_subdivisions:
            break
        _, _, a, b, panel_value, panel_err, depth = heapq.heappop(heap)
        if depth >= cfg.max_quad_depth:
            # stays counted in the totals but is never split again
            continue
        mid = 0.5 * (a + b)
        left_value, left_err = gauss_kronrod_panel(f, a, mid)
        right_value, right_err = gauss_kronrod_panel(f, mid, b)
        evaluations += 30
        subdivisions += 1
        for panel in ((a, mid, left_value, left_err), (mid, b, right_value, right_err)):
            counter += 1
            heapq.heappush(heap, (-panel[3], counter, panel[0], panel[1], panel[2], panel[3], depth + 1))
        total_value += left_value + right_value - panel_value
        total_err += left_err + right_err - panel_err
    if not converged and total_err <= cfg.tolerance(total_value):
        converged = True
    return QuadResult(value=total_value, abs_err=total_err, evaluations=evaluations,
                      subdivisions=subdivisions, converged=converged)


def _tanh_sinh_node(t: float, half: float) -> tuple[float, float]:
    """Distance of the node from the nearer endpoint and its weight."""
    u = _PI_OVER_2 * math.sinh(t)
    if u > _MAX_EXP_ARG:
        return 0.0, 0.0
    decay = math.exp(-2.0 * u)
    distance = 2.0 * half * decay / (1.0 + decay)
    weight = half * _PI_OVER_2 * math.cosh(t) * 4.0 * decay / (1.0 + decay) ** 2
    return distance, weight


def tanh_sinh(f: Callable[[float], complex], lo: float, hi: float, cfg: EngineConfig) -> QuadResult:
    """
    Tanh-sinh quadrature on [lo, hi]; endpoint values are never sampled.

    Each level halves the step and adds only the new odd nodes; the error
    estimate is the difference between the last two levels.
    """
    half = 0.5 * (hi - lo)
    center = 0.5 * (lo + hi)
    evaluations = 0

    def node_sum(t: float) -> complex:
        nonlocal evaluations
        distance, weight = _tanh_sinh_node(t, half)
        if weight == 0.0:
            return 0j
        total = 0j
        for x in (lo + distance, hi - distance):
            if x <= lo or x >= hi:
                continue
            try:
                value = _sample(f, x)
            except EvaluationError:
                # removable singularities next to an endpoint
                if weight < _NEGLIGIBLE_WEIGHT:
                    continue
                raise
            evaluations += 1
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                if weight < _NEGLIGIBLE_WEIGHT:
                    continue
                raise EvaluationError(f"Non-finite integrand value at x = {x}")
            total += weight * value
        return total

    def sweep(h: float, first: int, stride: int) -> complex:
        total = 0j
        k = first
        cutoff = cfg.tanh_sinh_weight_cutoff * half
        while True:
            t = k * h
            distance, weight = _tanh_sinh_node(t, half)
            if distance == 0.0 or (lo + distance == lo and hi - distance == hi):
                break
            contribution = node_sum(t)
            total += contribution
            if weight < cutoff and abs(contribution) <= cutoff * max(1.0, abs(total)):
                break
            k += stride
        return total

    center_value = _sample(f, center)
    evaluations += 1
    if not (math.isfinite(center_value.real) and math.isfinite(center_value.imag)):
        raise EvaluationError(f"Non-finite integrand value at x = {center}")
    accumulated = half * _PI_OVER_2 * center_value + sweep(1.0, 1, 1)
    estimate = accumulated
    err = math.inf
    converged = False
    level = 0
    h = 1.0
    for level in range(1, cfg.tanh_sinh_max_level + 1):
        h *= 0.5
        accumulated += sweep(h, 1, 2)
        refined = h * accumulated
        err = abs(refined - estimate)
        estimate = refined
        if level >= 3 and err <= cfg.tolerance(estimate):
            converged = True
            break
    logger.debug(f"tanh-sinh on [{lo}, {hi}] reached level {level}, error {err:.3g}")
    return QuadResult(value=estimate, abs_err=max(err, EPS * abs(estimate)), evaluations=evaluations,
                      subdivisions=level, converged=converged)


def exp_sinh(g: Callable[[float], complex], cfg: EngineConfig) -> QuadResult:
    """Exp-sinh quadrature of g over (0, oo) via t = exp((pi/2) sinh tau); g = 0 beyond t = 700."""
    evaluations = 0

    def node(tau: float) -> tuple[complex, float]:
        nonlocal evaluations
        arg = _PI_OVER_2 * math.sinh(tau)
        if arg > math.log(_MAX_EXP_ARG):
            return 0j, 0.0
        t = math.exp(arg)
        weight = _PI_OVER_2 * math.cosh(tau) * t
        if t == 0.0:
            return 0j, weight
        try:
            value = _sample(g, t)
        except EvaluationError:
            if weight < _NEGLIGIBLE_WEIGHT:
                return 0j, weight
            raise
        evaluations += 1
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            if weight < _NEGLIGIBLE_WEIGHT or t > 1e3:
                return 0j, weight
            raise EvaluationError(f"Non-finite integrand value at t = {t}")
        return weight * value, weight

    def sweep(h: float, first: int, stride: int) -> complex:
        total = 0j
        for direction in (1.0, -1.0):
            k = first
            while True:
                tau = direction * k * h
                contribution, weight = node(tau)
                total += contribution
                if direction < 0 and weight < cfg.tanh_sinh_weight_cutoff:
                    break
                if direction > 0 and weight == 0.0:
                    break
                k += stride
        return total

    accumulated = node(0.0)[0] + sweep(1.0, 1, 1)
    estimate = accumulated
    err = math.inf
    converged = False
    level = 0
    h = 1.0
    for level in range(1, cfg.tanh_sinh_max_level + 1):
        h *= 0.5
        accumulated += sweep(h, 1, 2)
        refined = h * accumulated
        err = abs(refined - estimate)
        estimate = refined
        if level >= 3 and err <= cfg.tolerance(estimate):
            converged = True
            break
    return QuadResult(value=estimate, abs_err=max(err, EPS * abs(estimate)), evaluations=evaluations,
                      subdivisions=level, converged=converged)


def _combine(parts: list[QuadResult]) -> QuadResult:
    return QuadResult(
        value=sum((p.value for p in parts), 0j),
        abs_err=sum(p.abs_err for p in parts),
        evaluations=sum(p.evaluations for p in parts),
        subdivisions=sum(p.subdivisions for p in parts),
        converged=all(p.converged for p in parts),
    )


def _segment(f: Callable[[float], complex], lo: float, hi: float, singular: bool, cfg: EngineConfig) -> QuadResult:
    if singular:
        return tanh_sinh(f, lo, hi, cfg)
    try:
        result = adaptive_gauss_kronrod(f, lo, hi, cfg)
        if result.converged:
            return result
        logger.debug(f"Gauss-Kronrod did not converge on [{lo}, {hi}]; retrying with tanh-sinh")
    except EvaluationError as e:
        logger.debug(f"Gauss-Kronrod hit {e}; retrying with tanh-sinh")
        result = None
    fallback = tanh_sinh(f, lo, hi, cfg)
    if result is not None and result.abs_err < fallback.abs_err:
        return result
    return fallback


def _split_at_singular_ends(f: Integrand, lo: float, hi: float, cfg: EngineConfig) -> QuadResult:
    """
    Halves that touch a singular endpoint run tanh-sinh in the offset from that
    endpoint; the other half runs Gauss-Kronrod and never sees nodes crowded
    against the far endpoint.
    """
    mid = 0.5 * (lo + hi)
    parts = []
    if "lower" in f.singular_endpoints:
        from_lower = f.from_lower or (lambda u: f.eval(lo + u))
        parts.append(tanh_sinh(from_lower, 0.0, mid - lo, cfg))
    else:
        parts.append(_segment(f.eval, lo, mid, False, cfg))
    if "upper" in f.singular_endpoints:
        from_upper = f.from_upper or (lambda u: f.eval(hi - u))
        parts.append(tanh_sinh(from_upper, 0.0, hi - mid, cfg))
    else:
        parts.append(_segment(f.eval, mid, hi, False, cfg))
    return _combine(parts)


def integrate_finite(f: Integrand, lo: float, hi: float, config: Optional[EngineConfig] = None) -> QuadResult:
    """
    Integral of f over the finite interval (lo, hi).

    Args:
        f: Integrand with singular-endpoint flags and interior breakpoints
        lo: Lower limit
        hi: Upper limit
        config: Engine budgets; defaults to EngineConfig()

    Returns:
        QuadResult summed over the breakpoint segments
    """
    cfg = config or EngineConfig()
    lo, hi = float(lo), float(hi)
    if lo == hi:
        return QuadResult(value=0j, abs_err=0.0, evaluations=0, subdivisions=0, converged=True)
    if lo > hi:
        flipped = Integrand(eval=f.eval, singular_endpoints=frozenset(
            {"lower": "upper", "upper": "lower"}[e] for e in f.singular_endpoints), breakpoints=f.breakpoints)
        result = integrate_finite(flipped, hi, lo, cfg)
        result.value = -result.value
        return result
    cuts = sorted(b for b in f.breakpoints if lo < b < hi)
    edges = [lo] + cuts + [hi]
    parts = []
    try:
        if not cuts and f.singular_endpoints:
            parts.append(_split_at_singular_ends(f, lo, hi, cfg))
        else:
            for i in range(len(edges) - 1):
                parts.append(_segment(f.eval, edges[i], edges[i + 1], bool(cuts), cfg))
    except Exception as e:
        logger.error(f"Failed to integrate over [{lo}, {hi}]: {e}")
        raise
    result = _combine(parts)
    if not result.converged:
        logger.warning(f"Integral over [{lo}, {hi}] did not reach tolerance (error {result.abs_err:.3g})")
    return result


def _oscillatory_tail(f: Callable[[float], complex], start: float, omega: float, cfg: EngineConfig) -> QuadResult:
    """Half-period pieces summed with Wynn epsilon acceleration."""
    period = math.pi / abs(omega)
    partial_sums = []
    running = 0j
    evaluations = 0
    estimate, err = 0j, math.inf
    previous_estimate = None
    converged = False
    for k in range(_OSCILLATORY_MAX_PIECES):
        piece = adaptive_gauss_kronrod(f, start + k * period, start + (k + 1) * period, cfg)
        evaluations += piece.evaluations
        running += piece.value
        partial_sums.append(running)
        if (k + 1) % _OSCILLATORY_BATCH == 0:
            estimate, err = wynn_epsilon(partial_sums)
            if previous_estimate is not None:
                err = max(err, abs(estimate - previous_estimate))
                if err <= cfg.tolerance(estimate):
                    converged = True
                    break
            previous_estimate = estimate
            first, last = abs(partial_sums[0]), abs(piece.value)
            if k > 2 * _OSCILLATORY_BATCH and last > 10.0 * max(first, 1e-300):
                raise DivergenceError(f"Oscillatory integral pieces grow beyond x = {start + k * period}")
    return QuadResult(value=estimate, abs_err=err, evaluations=evaluations,
                      subdivisions=len(partial_sums), converged=converged)


def _check_decay(g: Callable[[float], complex]) -> None:
    """Raise if x f(x) (the integrand in t = log x) is not decaying."""
    try:
        near, far = abs(_sample(g, 20.0)), abs(_sample(g, 40.0))
    except EvaluationError:
        return
    if math.isfinite(near) and math.isfinite(far) and far >= near and far > 1e-8:
        raise DivergenceError("Integrand does not decay on the half-line")


def integrate_halfline(f: Integrand, config: Optional[EngineConfig] = None) -> QuadResult:
    """
    Integral of f over (0, oo).

    Raises:
        DivergenceError: When the integrand or oscillatory pieces fail to decay
    """
    cfg = config or EngineConfig()
    split = max([1.0] + [b for b in f.breakpoints if b > 0])
    head = integrate_finite(
        Integrand(eval=f.eval, singular_endpoints=frozenset({"lower"}), breakpoints=tuple(b for b in f.breakpoints if 0 < b < split)),
        0.0, split, cfg,
    )
    if f.oscillatory_hint:
        tail = _oscillatory_tail(f.eval, split, float(f.oscillatory_hint), cfg)
    else:
        def in_log_scale(t: float) -> complex:
            if t > _MAX_EXP_ARG:
                return 0j
            x = split * math.exp(t)
            try:
                value = complex(f.eval(x)) * x
            except (NumericsError, OverflowError):
                # overflow far out in a tail already checked for decay
                if x > 1e3:
                    return 0j
                raise
            if x > 1e3 and not (math.isfinite(value.real) and math.isfinite(value.imag)):
                return 0j
            return value

        _check_decay(in_log_scale)
        tail = exp_sinh(in_log_scale, cfg)
    result = _combine([head, tail])
    logger.debug(f"Half-line integral: head {head.value} tail {tail.value}")
    return result


def integrate_lower_limit_one(f: Integrand, config: Optional[EngineConfig] = None) -> QuadResult:
    """
    Integral of f over (1, oo) through x = e^u, with u = 0 flagged singular.

    An oscillatory integrand is shifted to (0, oo) in x instead, so its
    frequency hint still describes the tail.
    """
    cfg = config or EngineConfig()
    if f.oscillatory_hint:
        shifted = Integrand(
            eval=lambda t: f.eval(1.0 + t),
            singular_endpoints=frozenset({"lower"}) & f.singular_endpoints,
            oscillatory_hint=f.oscillatory_hint,
            breakpoints=tuple(b - 1.0 for b in f.breakpoints if b > 1),
        )
        return integrate_halfline(shifted, cfg)

    def substituted(u: float) -> complex:
        if u > _MAX_EXP_ARG:
            return 0j
        x = math.exp(u)
        return complex(f.eval(x)) * x

    mapped = Integrand(
        eval=substituted,
        singular_endpoints=frozenset({"lower"}),
        oscillatory_hint=None,
        breakpoints=tuple(math.log(b) for b in f.breakpoints if b > 1),
    )
    return integrate_halfline(mapped, cfg)


def mellin_sample(f: Integrand, s: complex, config: Optional[EngineConfig] = None) -> QuadResult:
    """Mellin transform value: integral over (0, oo) of x^(s-1) f(x)."""
    s = complex(s)

    def weighted(x: float) -> complex:
        return complex_pow(x, s - 1.0) * complex(f.eval(x))

    singular = set(f.singular_endpoints)
    if s.real < 1:
        singular.add("lower")
    return integrate_halfline(
        Integrand(eval=weighted, singular_endpoints=frozenset(singular),
                  oscillatory_hint=f.oscillatory_hint, breakpoints=f.breakpoints),
        config,
    )


def integrate(f: Integrand, lo: float, hi: float, config: Optional[EngineConfig] = None) -> QuadResult:
    """
    Integral over (lo, hi) with either limit possibly infinite.

    (0, oo) and (1, oo) go to their dedicated routines; other half-lines are
    shifted or reflected onto (0, oo) and the full line is split at 0.
    """
    cfg = config or EngineConfig()
    lo, hi = float(lo), float(hi)
    if lo > hi:
        flipped = Integrand(eval=f.eval, singular_endpoints=frozenset(
            {"lower": "upper", "upper": "lower"}[e] for e in f.singular_endpoints),
            oscillatory_hint=f.oscillatory_hint, breakpoints=f.breakpoints)
        result = integrate(flipped, hi, lo, cfg)
        result.value = -result.value
        return result
    if math.isfinite(lo) and math.isfinite(hi):
        return integrate_finite(f, lo, hi, cfg)
    if math.isfinite(lo):
        if lo == 0.0:
            return integrate_halfline(f, cfg)
        if lo == 1.0:
            return integrate_lower_limit_one(f, cfg)
        return integrate_halfline(Integrand(
            eval=lambda x: f.eval(x + lo), singular_endpoints=f.singular_endpoints - {"upper"},
            oscillatory_hint=f.oscillatory_hint, breakpoints=tuple(b - lo for b in f.breakpoints if b > lo)), cfg)
    if math.isfinite(hi):
        lower = frozenset({"lower"}) if "upper" in f.singular_endpoints else frozenset()
        return integrate_halfline(Integrand(
            eval=lambda x: f.eval(hi - x), singular_endpoints=lower,
            oscillatory_hint=f.oscillatory_hint, breakpoints=tuple(hi - b for b in f.breakpoints if b < hi)), cfg)
    right = integrate_halfline(Integrand(eval=f.eval, oscillatory_hint=f.oscillatory_hint,
                                         breakpoints=tuple(b for b in f.breakpoints if b > 0)), cfg)
    left = integrate_halfline(Integrand(eval=lambda x: f.eval(-x), oscillatory_hint=f.oscillatory_hint,
                                        breakpoints=tuple(-b for b in f.breakpoints if b < 0)), cfg)
    return _combine([right, left])
