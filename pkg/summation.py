#!/usr/bin/env python3
"""
Convergence-controlled series, bilateral series, multi-sums and products.

A series is classified from its trailing terms: geometric decay is summed
directly with a tail bound, alternating terms go through Euler averaging and
Levin-u, everything else through Levin-u and Wynn epsilon. A value is only
accepted when two budgets or two strategies agree.
"""

import logging
import math
from dataclasses import replace
from typing import Callable, Optional

from acceleration import euler_transform, levin_u, wynn_epsilon
from config import Acceleration, EngineConfig
from errors import DivergenceError, EvaluationError, PoleError
from models import AxisRange, SumResult, TermGenerator
from numerics import complex_log
from utils import Accumulator

logger = logging.getLogger(__name__)

STRATEGIES = ("direct", "wynn_epsilon", "levin_u", "euler_alternating", "exact", "shells", "mixed")

_LEADING_TERMS = 64
_TRAILING = 8
_GEOMETRIC_RATIO = 0.9
_LEVIN_BUDGETS = (14, 18, 22, 26, 30, 34)
_WYNN_BUDGETS = (40, 60, 80, 120, 160, 240)
_EULER_BUDGETS = (40, 60, 80, 120, 160)


class _ZeroFactor(Exception):
    """Raised inside a log-series when a product factor is exactly zero."""

    def __init__(self, index: int):
        super().__init__(f"zero factor at index {index}")
        self.index = index


class _Terms:
    """Lazily evaluated, cached terms a_0, a_1, ... of a unilateral series."""

    def __init__(self, term: Callable[[int], complex], start: int, limit: int):
        self._term = term
        self.start = start
        self.limit = limit
        self.values: list[complex] = []

    def extend_to(self, count: int) -> list[complex]:
        count = min(count, self.limit)
        while len(self.values) < count:
            n = self.start + len(self.values)
            try:
                value = complex(self._term(n))
            except PoleError as e:
                if e.index is None:
                    e.index = n
                raise
            except (OverflowError, ZeroDivisionError) as e:
                raise EvaluationError(f"Term evaluation failed at index {n}: {e}") from e
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise EvaluationError(f"Non-finite term at index {n}")
            self.values.append(value)
        return self.values[:count]

    def partial_sums(self, count: int) -> list[complex]:
        acc = Accumulator()
        sums = []
        for value in self.extend_to(count):
            acc.add(value)
            sums.append(acc.value)
        return sums


def _trailing_ratio(values: list[complex]) -> Optional[float]:
    """Largest |a_(k+1) / a_k| over the trailing non-zero terms, None if all are zero."""
    window = values[-2 * _TRAILING:]
    ratios = [abs(b / a) for a, b in zip(window, window[1:]) if a != 0 and b != 0]
    if not ratios:
        return None
    return max(ratios[-_TRAILING:])


def _is_alternating(values: list[complex]) -> bool:
    window = [v for v in values[-2 * _TRAILING:] if v != 0]
    if len(window) < 4:
        return False
    for a, b in zip(window, window[1:]):
        quotient = b / a
        if quotient.real >= 0 or abs(quotient.imag) > 0.1 * abs(quotient.real):
            return False
    return True


def _is_zero_tail(values: list[complex]) -> bool:
    return len(values) >= 2 * _TRAILING and all(v == 0 for v in values[-2 * _TRAILING:])


def _direct(terms: _Terms, cfg: EngineConfig) -> SumResult:
    """Plain summation with a geometric tail bound from the trailing ratio."""
    acc = Accumulator()
    tail = math.inf
    n = 0
    block = _LEADING_TERMS
    converged = False
    while n < terms.limit:
        values = terms.extend_to(n + block)
        if len(values) == n:
            break
        for value in values[n:]:
            acc.add(value)
        n = len(values)
        if _is_zero_tail(values):
            tail = 0.0
        else:
            ratio = _trailing_ratio(values)
            if ratio is not None and ratio < 1.0:
                last = max(abs(v) for v in values[-_TRAILING:])
                tail = last * ratio / (1.0 - ratio)
        if tail <= 0.1 * cfg.tolerance(acc.value):
            converged = True
            break
        block = min(2 * block, 65536)
    return SumResult(value=acc.value, abs_err=tail + acc.rounding_error(), terms_used=n,
                     strategy_used="direct", converged=converged)


def _budget_estimates(
    terms: _Terms,
    strategy: str,
    cfg: EngineConfig,
) -> SumResult:
    """Run one acceleration at increasing budgets until two consecutive budgets agree."""
    if strategy == "levin_u":
        budgets, transform = _LEVIN_BUDGETS, lambda n: levin_u(terms.extend_to(n))
    elif strategy == "wynn_epsilon":
        budgets, transform = _WYNN_BUDGETS, lambda n: wynn_epsilon(terms.partial_sums(n))
    else:
        budgets, transform = _EULER_BUDGETS, lambda n: euler_transform(terms.partial_sums(n))
    previous = None
    best = None
    used = 0
    for budget in budgets:
        if budget > terms.limit:
            break
        estimate, err = transform(budget)
        used = budget
        if not (math.isfinite(estimate.real) and math.isfinite(estimate.imag)):
            continue
        if previous is not None:
            spread = abs(estimate - previous)
            total_err = max(err, spread) if math.isfinite(err) else spread
            candidate = SumResult(value=estimate, abs_err=total_err, terms_used=used,
                                  strategy_used=strategy, converged=False)
            if best is None or candidate.abs_err < best.abs_err:
                best = candidate
            if spread <= cfg.tolerance(estimate):
                candidate.converged = True
                return candidate
        previous = estimate
    if best is None:
        best = SumResult(value=previous if previous is not None else 0j, abs_err=math.inf,
                         terms_used=used, strategy_used=strategy, converged=False)
    return best


def _check_divergence(terms: _Terms, cfg: EngineConfig) -> None:
    """Raise when the terms visibly fail to tend to zero."""
    horizon = min(terms.limit, 4096)
    if horizon < 256:
        return
    values = terms.extend_to(horizon)
    early = max(abs(v) for v in values[horizon // 4: horizon // 4 + _TRAILING])
    late = max(abs(v) for v in values[-_TRAILING:])
    if late >= early and late > cfg.target_abs_tol:
        raise DivergenceError(f"Series terms do not tend to zero (|a_n| ~ {late:.3g} at n = {terms.start + horizon})")


def _choose(results: list[SumResult], cfg: EngineConfig) -> SumResult:
    """Prefer a converged result; two agreeing strategies also count as convergence."""
    converged = [r for r in results if r.converged]
    if converged:
        return min(converged, key=lambda r: r.abs_err)
    finite = [r for r in results if math.isfinite(r.abs_err)]
    for i, first in enumerate(finite):
        for second in finite[i + 1:]:
            spread = abs(first.value - second.value)
            if spread <= cfg.tolerance(first.value):
                chosen = first if first.abs_err <= second.abs_err else second
                return replace(chosen, abs_err=max(spread, min(first.abs_err, second.abs_err)),
                               converged=True, strategy_used="mixed")
    if finite:
        return min(finite, key=lambda r: r.abs_err)
    return results[0]


def sum_series(g: TermGenerator, config: Optional[EngineConfig] = None, hint: Optional[str] = None) -> SumResult:
    """
    Sum a unilateral series sum_{n >= start} g(n).

    Args:
        g: Arity-1 term generator; a finite end delegates to sum_finite
        config: Engine budgets; a non-auto acceleration forces that strategy
        hint: "alternating" restricts to alternating acceleration, "conditional" to Levin-u

    Returns:
        SumResult naming the strategy that produced the accepted value

    Raises:
        PoleError: A term hit a pole (index attached)
        DivergenceError: Terms do not tend to zero
    """
    cfg = config or EngineConfig()
    if g.arity != 1:
        return sum_multi(g, cfg)
    axis = g.ranges[0]
    if not axis.is_infinite:
        return sum_finite(g)
    start, _ = axis.bounds(())
    terms = _Terms(lambda n: g.eval((n,)), start, cfg.max_terms)
    head = terms.extend_to(_LEADING_TERMS)

    forced = cfg.acceleration
    if forced != Acceleration.AUTO:
        if forced == Acceleration.DIRECT:
            result = _direct(terms, cfg)
        else:
            result = _budget_estimates(terms, forced.value, cfg)
        logger.debug(f"Series from {start} with forced {forced.value}: {result.value} +- {result.abs_err:.3g}")
        return result

    if _is_zero_tail(head) and _is_zero_tail(terms.extend_to(4 * _LEADING_TERMS)):
        acc = Accumulator()
        acc.extend(terms.values)
        return SumResult(value=acc.value, abs_err=acc.rounding_error(), terms_used=len(terms.values),
                         strategy_used="direct", converged=True)

    ratio = _trailing_ratio(head)
    if hint is None and ratio is not None and ratio < _GEOMETRIC_RATIO:
        result = _direct(terms, cfg)
        if result.converged:
            logger.debug(f"Series from {start} summed directly in {result.terms_used} terms")
            return result
    if hint == "conditional":
        candidates = ["levin_u"]
    elif hint == "alternating" or _is_alternating(head):
        candidates = ["euler_alternating", "levin_u"]
    else:
        candidates = ["levin_u", "wynn_epsilon"]

    results = []
    for strategy in candidates:
        result = _budget_estimates(terms, strategy, cfg)
        results.append(result)
        if result.converged:
            break
    chosen = _choose(results, cfg)
    if not chosen.converged:
        _check_divergence(terms, cfg)
        logger.warning(f"Series from {start} did not converge; best {chosen.strategy_used} "
                       f"estimate {chosen.value} +- {chosen.abs_err:.3g}")
        chosen.diagnostics.append(f"no strategy converged (tried {', '.join(candidates)})")
    logger.debug(f"Series from {start}: {chosen.strategy_used} gave {chosen.value} +- {chosen.abs_err:.3g}")
    return chosen


def sum_bilateral(g: TermGenerator, config: Optional[EngineConfig] = None, hint: Optional[str] = None) -> SumResult:
    """
    Sum over all integers as the n >= 0 and n < 0 halves.

    Raises:
        DivergenceError: Naming the half ("positive" or "negative") that diverges
    """
    cfg = config or EngineConfig()
    halves = []
    for direction, mapping in (("positive", lambda n: n), ("negative", lambda n: -n - 1)):
        half = TermGenerator(eval=lambda idx, m=mapping: g.eval((m(idx[0]),)), ranges=[AxisRange(start=0)])
        try:
            halves.append(sum_series(half, cfg, hint))
        except DivergenceError as e:
            logger.error(f"Bilateral series diverges in the {direction} direction: {e}")
            raise DivergenceError(f"{e.message} ({direction} direction)", direction=direction) from e
    positive, negative = halves
    strategy = positive.strategy_used if positive.strategy_used == negative.strategy_used else "mixed"
    return SumResult(
        value=positive.value + negative.value,
        abs_err=positive.abs_err + negative.abs_err,
        terms_used=positive.terms_used + negative.terms_used,
        strategy_used=strategy,
        converged=positive.converged and negative.converged,
        diagnostics=positive.diagnostics + negative.diagnostics,
    )


def _enumerate(g: TermGenerator, acc: Accumulator, shell: Optional[int] = None) -> int:
    """
    Add every term of g to acc; with shell set, infinite axes take offsets from
    their lower bound summing to exactly that shell index.
    """
    infinite_axes = [i for i, axis in enumerate(g.ranges) if axis.is_infinite]
    last_infinite = infinite_axes[-1] if infinite_axes else -1
    count = 0

    def walk(axis_index: int, outer: tuple[int, ...], remaining: int) -> None:
        nonlocal count
        if axis_index == g.arity:
            if shell is None or remaining == 0:
                try:
                    acc.add(g.eval(outer))
                except PoleError as e:
                    if e.index is None:
                        e.index = outer
                    raise
                count += 1
            return
        axis = g.ranges[axis_index]
        lo, hi = axis.bounds(outer)
        if axis.is_infinite:
            offsets = [remaining] if axis_index == last_infinite else range(remaining + 1)
            for offset in offsets:
                walk(axis_index + 1, outer + (lo + offset,), remaining - offset)
        else:
            for index in range(lo, hi + 1):
                walk(axis_index + 1, outer + (index,), remaining)

    walk(0, (), shell or 0)
    return count


def sum_finite(g: TermGenerator) -> SumResult:
    """Exact compensated sum over finite (possibly triangular) axes; end bounds inclusive."""
    if any(axis.is_infinite for axis in g.ranges):
        raise EvaluationError("sum_finite requires every axis to be finite")
    acc = Accumulator()
    count = _enumerate(g, acc)
    return SumResult(value=acc.value, abs_err=acc.rounding_error(), terms_used=count,
                     strategy_used="exact", converged=True)


def prod_finite(g: TermGenerator) -> SumResult:
    """Exact product over finite axes; the empty product is 1."""
    if any(axis.is_infinite for axis in g.ranges):
        raise EvaluationError("prod_finite requires every axis to be finite")
    value = 1.0 + 0j
    count = 0

    def walk(axis_index: int, outer: tuple[int, ...]) -> None:
        nonlocal value, count
        if axis_index == g.arity:
            try:
                value *= g.eval(outer)
            except PoleError as e:
                if e.index is None:
                    e.index = outer
                raise
            count += 1
            return
        lo, hi = g.ranges[axis_index].bounds(outer)
        for index in range(lo, hi + 1):
            walk(axis_index + 1, outer + (index,))

    walk(0, ())
    return SumResult(value=value, abs_err=abs(value) * 2.2e-16 * (count + 1), terms_used=count,
                     strategy_used="exact", converged=True)


def sum_multi(g: TermGenerator, config: Optional[EngineConfig] = None) -> SumResult:
    """
    Double or triple sum by diagonal shells over the infinite axes.

    Finite and triangular axes are enumerated exactly inside each shell; the
    shell sums form a unilateral series accelerated like any other.
    """
    cfg = config or EngineConfig()
    if not any(axis.is_infinite for axis in g.ranges):
        return sum_finite(g)
    shells: dict[int, tuple[complex, int]] = {}

    def shell_sum(index: tuple[int, ...]) -> complex:
        m = index[0]
        if m not in shells:
            acc = Accumulator()
            count = _enumerate(g, acc, shell=m)
            shells[m] = (acc.value, count)
        return shells[m][0]

    series = TermGenerator(eval=shell_sum, ranges=[AxisRange(start=0)])
    shell_cfg = replace(cfg, max_terms=min(cfg.max_terms, cfg.max_shells))
    result = sum_series(series, shell_cfg)
    terms = sum(count for _, count in shells.values())
    if not result.converged:
        logger.warning(f"Multi-sum shells did not converge after {len(shells)} shells")
    return SumResult(value=result.value, abs_err=result.abs_err, terms_used=terms,
                     strategy_used="shells", converged=result.converged,
                     diagnostics=result.diagnostics + [f"shell strategy: {result.strategy_used}"])


def prod_infinite(g: TermGenerator, config: Optional[EngineConfig] = None, hint: Optional[str] = None) -> SumResult:
    """
    Infinite product as exp of the summed principal logarithms of its factors.

    Summing logs keeps the winding of the partial products. A factor on the
    negative real axis is recorded in the diagnostics as a branch ambiguity;
    an exactly zero factor makes the product 0.
    """
    cfg = config or EngineConfig()
    if g.arity != 1:
        raise EvaluationError("prod_infinite supports a single product index")
    if not g.ranges[0].is_infinite:
        return prod_finite(g)
    diagnostics: list[str] = []

    def log_factor(index: tuple[int, ...]) -> complex:
        factor = complex(g.eval(index))
        if factor == 0:
            raise _ZeroFactor(index[0])
        if factor.imag == 0 and factor.real < 0:
            message = f"factor {index[0]} lies on the negative real axis (branch ambiguity)"
            if message not in diagnostics:
                diagnostics.append(message)
                logger.warning(f"Infinite product: {message}")
        return complex_log(factor)

    try:
        logs = sum_series(TermGenerator(eval=log_factor, ranges=g.ranges), cfg, hint)
    except _ZeroFactor as zero:
        logger.debug(f"Infinite product short-circuits to 0 at index {zero.index}")
        return SumResult(value=0j, abs_err=0.0, terms_used=zero.index + 1,
                         strategy_used="exact", converged=True, diagnostics=diagnostics)
    try:
        magnitude = math.exp(logs.value.real)
    except OverflowError:
        raise DivergenceError("Infinite product diverges (log-sum overflows)") from None
    value = magnitude * complex(math.cos(logs.value.imag), math.sin(logs.value.imag))
    return SumResult(value=value, abs_err=abs(value) * logs.abs_err, terms_used=logs.terms_used,
                     strategy_used=logs.strategy_used, converged=logs.converged,
                     diagnostics=diagnostics + logs.diagnostics)
