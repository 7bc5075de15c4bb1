#!/usr/bin/env python3
"""
Evaluation of expression trees against the numerical engines.

The top of a tree is evaluated node by node with first-order error
propagation. Quantifier bodies are compiled once into closures over a shared
variable environment and then called per node or term by the quadrature and
summation engines. Subtrees inside a body that depend only on parameters are
evaluated once per distinct binding and cached on the Evaluator instance.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from config import EngineConfig
from elementary import coth_minus_one, log1p_complex, log_cosh, log_cosh_ratio, log_coth_minus_one, log_sinh
from errors import DomainError, EvaluationError, NumericsError, PoleError, UnsupportedDegreeError
from expression import (BinOp, Call, Const, CothMinusOne, LogCoshRatio, Neg, Node, Number, Quantifier, Var, cancel_terms,
                        contains_quantifier, free_variables, label, pretty, substitute)
from function_table import FUNCTIONS, FunctionSpec
from gamma_functions import gamma_ln
from models import AxisRange, EvalResult, Hint, Integrand, TermGenerator
from numerics import EPS, complex_log, complex_pow, constant_pair, is_finite
from quadrature import integrate
from summation import prod_finite, prod_infinite, sum_bilateral, sum_finite, sum_multi, sum_series

logger = logging.getLogger(__name__)

_CONSTANT_NAMES = {"pi": "pi", "E": None, "EulerGamma": "euler_gamma", "Catalan": "catalan", "Glaisher": "glaisher"}
_MAX_AXES = 3
# argument errors below this relative size are not propagated through calls
_SIGNIFICANT_ERR = 16 * EPS
_INTEGER_TOL = 1e-9

Compiled = Callable[[dict], complex]

# logarithms of calls whose values overflow before their logarithms do
_LOG_FORMS: dict[str, Callable[[complex], complex]] = {
    "Exp": lambda z: z,
    "Sinh": log_sinh,
    "Cosh": log_cosh,
}


@dataclass
class _Value:
    value: complex
    err: float = 0.0
    converged: bool = True
    terms: int = 0
    diagnostics: list[str] = field(default_factory=list)


def constant_value(name: str) -> tuple[complex, float]:
    """Double value of a named constant and its representation error."""
    if name == "I":
        return 1j, 0.0
    if name == "E":
        value = math.e
        return complex(value, 0.0), EPS * value / 2
    if name == "inf":
        raise EvaluationError("inf is only valid as a summation or integration bound")
    hi, lo = constant_pair(_CONSTANT_NAMES[name])
    return complex(hi, 0.0), abs(lo)


def apply_binary(op: str, a: complex, b: complex) -> complex:
    """
    Arithmetic shared by evaluation and constant folding.

    Raises:
        PoleError: On division by exactly zero
    """
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise PoleError("division by zero", location=0j)
        return a / b
    if op == "^":
        return complex_pow(a, b)
    raise EvaluationError(f"Unknown operator {op!r}")


def _apply(spec: FunctionSpec, values: list[complex], cfg: EngineConfig) -> EvalResult:
    try:
        return spec.impl(values, cfg)
    except (ZeroDivisionError, OverflowError, ValueError) as e:
        raise EvaluationError(f"{spec.name}{tuple(values)} failed: {e}") from e


def _bound_number(value: complex, what: str) -> float:
    value = complex(value)
    if value.imag != 0 and abs(value.imag) > 1e-14 * max(1.0, abs(value.real)):
        raise EvaluationError(f"{what} must be real, got {value}")
    return value.real


def _index_bound(value: float, what: str) -> Optional[int]:
    """Integer summation bound; None stands for +inf."""
    if math.isinf(value):
        if value > 0:
            return None
        raise EvaluationError(f"{what} cannot be -inf here")
    nearest = round(value)
    if abs(value - nearest) > _INTEGER_TOL * max(1.0, abs(value)):
        raise EvaluationError(f"{what} must be an integer, got {value}")
    return int(nearest)


def _log_power(log_base: complex, exponent: complex) -> complex:
    if log_base.real == -math.inf:
        if exponent.real > 0:
            return log_base
        raise EvaluationError(f"0^{exponent} in log space")
    # principal branch of the base so non-integer powers match complex_pow
    principal = complex(log_base.real, math.remainder(log_base.imag, 2 * math.pi))
    return exponent * principal


def _offset_name(var: str) -> str:
    # not an identifier, so it cannot shadow a name from the registry
    return f"{var}'"


def _log_product(factors: Iterable[Compiled], env: dict) -> complex:
    """Sum of factor logarithms; an exact zero factor absorbs factors that only overflowed."""
    logs = []
    failure: Optional[NumericsError] = None
    for factor in factors:
        try:
            logs.append(factor(env))
        except (EvaluationError, UnsupportedDegreeError) as e:
            failure = failure or e
    if any(v.real == -math.inf for v in logs):
        return complex(-math.inf, 0.0)
    if failure is not None:
        raise failure
    return sum(logs, 0j)


def _with_breadcrumb(fn: Compiled, node: Node) -> Compiled:
    where = label(node)

    def wrapped(env: dict) -> complex:
        try:
            return fn(env)
        except NumericsError as e:
            e.path.insert(0, where)
            raise

    return wrapped


class Evaluator:
    """
    Evaluates expressions under one engine configuration.

    `cache` maps parameter-only subtrees (with their parameter values) to
    values and `cache_hits` counts reuses. A separate instance must be used
    for each side of an identity so the two sides never share results.
    """

    def __init__(self, config: Optional[EngineConfig] = None, hints: Iterable[Hint] = ()):
        self.config = config or EngineConfig()
        self.hints = list(hints)
        self.cache: dict[tuple, complex] = {}
        self.cache_hits = 0
        self._inner_failures: list[str] = []

    def evaluate(self, ast: Node, bindings: Optional[dict[str, complex]] = None) -> EvalResult:
        """
        Evaluate an expression with the given parameter values.

        Args:
            ast: Parsed expression
            bindings: Parameter values; every free variable must be bound

        Returns:
            EvalResult with a propagated absolute-error estimate

        Raises:
            NumericsError: Engine failure, with the AST path in `path`
        """
        env = {name: complex(value) for name, value in (bindings or {}).items()}
        self._inner_failures = []
        try:
            result = self._eval(ast, env, self.config, frozenset(), nested=False)
        except NumericsError as e:
            logger.error(f"Failed to evaluate {pretty(ast)[:80]}: {e}")
            raise
        if not is_finite(result.value):
            raise EvaluationError(f"Non-finite result {result.value}")
        diagnostics = result.diagnostics + self._inner_failures
        converged = result.converged and not self._inner_failures
        value = result.value
        abs_err = result.err + EPS * abs(value)
        return EvalResult(value=value, abs_err=abs_err, terms_used=result.terms,
                          converged=converged, diagnostics=diagnostics)

    # node-by-node evaluation with error propagation

    def _eval(self, node: Node, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        try:
            return self._eval_node(node, env, cfg, bound, nested)
        except NumericsError as e:
            e.path.insert(0, label(node))
            raise

    def _eval_node(self, node: Node, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        if isinstance(node, Number):
            return _Value(complex(node.value))
        if isinstance(node, Const):
            value, err = constant_value(node.name)
            return _Value(value, err)
        if isinstance(node, Var):
            if node.name not in env:
                raise EvaluationError(f"Unbound variable {node.name!r}")
            return _Value(env[node.name])
        if isinstance(node, Neg):
            inner = self._eval(node.operand, env, cfg, bound, nested)
            return _Value(-inner.value, inner.err, inner.converged, inner.terms, inner.diagnostics)
        if isinstance(node, BinOp):
            return self._eval_binary(node, env, cfg, bound, nested)
        if isinstance(node, CothMinusOne):
            arg = self._eval(node.arg, env, cfg, bound, nested)
            value = coth_minus_one(arg.value)
            err = 4 * EPS * abs(value) + self._propagated(lambda xs: coth_minus_one(xs[0]), [arg], value)
            return _Value(value, err, arg.converged, arg.terms, arg.diagnostics)
        if isinstance(node, LogCoshRatio):
            args = [self._eval(child, env, cfg, bound, nested) for child in node.children()]
            value = log_cosh_ratio(*(a.value for a in args))
            err = 4 * EPS * abs(value) + self._propagated(lambda xs: log_cosh_ratio(*xs), args, value)
            return _Value(value, err, all(a.converged for a in args), sum(a.terms for a in args),
                          [d for a in args for d in a.diagnostics])
        if isinstance(node, Call):
            return self._eval_call(node, env, cfg, bound, nested)
        if isinstance(node, Quantifier):
            return self._quantifier(node, env, cfg, bound, nested)
        raise EvaluationError(f"Unknown node type {type(node).__name__}")

    def _eval_binary(self, node: BinOp, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        a = self._eval(node.left, env, cfg, bound, nested)
        b = self._eval(node.right, env, cfg, bound, nested)
        value = apply_binary(node.op, a.value, b.value)
        if node.op in "+-":
            err = a.err + b.err
        elif node.op == "*":
            err = abs(b.value) * a.err + abs(a.value) * b.err
        elif node.op == "/":
            err = a.err / abs(b.value) + abs(value) * b.err / abs(b.value)
        else:
            err = 0.0
            if a.value != 0:
                err += abs(value * b.value / a.value) * a.err
                if b.err:
                    err += abs(value * complex_log(a.value)) * b.err
        err += EPS * abs(value)
        return _Value(value, err, a.converged and b.converged, a.terms + b.terms, a.diagnostics + b.diagnostics)

    def _eval_call(self, node: Call, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        spec = FUNCTIONS[node.name]
        args = [self._eval(arg, env, cfg, bound, nested) for arg in node.args]
        result = _apply(spec, [a.value for a in args], cfg)
        err = result.abs_err + self._propagated(lambda xs: _apply(spec, xs, cfg).value, args, result.value)
        diagnostics = [d for a in args for d in a.diagnostics] + result.diagnostics
        converged = result.converged and all(a.converged for a in args)
        if not result.converged:
            diagnostics.append(f"{node.name} did not converge")
        return _Value(result.value, err, converged, result.terms_used + sum(a.terms for a in args), diagnostics)

    @staticmethod
    def _propagated(fn: Callable[[list[complex]], complex], args: list[_Value], value: complex) -> float:
        """First-order error contributed by uncertain arguments, by central differences."""
        values = [a.value for a in args]
        extra = 0.0
        for i, arg in enumerate(args):
            scale = max(1.0, abs(arg.value))
            if arg.err <= _SIGNIFICANT_ERR * scale:
                continue
            h = max(arg.err, 1e-7 * scale)
            try:
                up = fn(values[:i] + [arg.value + h] + values[i + 1:])
                down = fn(values[:i] + [arg.value - h] + values[i + 1:])
                extra += abs(up - down) / (2 * h) * arg.err
            except NumericsError:
                extra += abs(value) * arg.err / max(abs(arg.value), EPS)
        return extra

    # compiled bodies

    def _compile(self, node: Node, bound: frozenset[str], cfg: EngineConfig) -> Compiled:
        if isinstance(node, Number):
            value = complex(node.value)
            return lambda env: value
        if isinstance(node, Const):
            value = constant_value(node.name)[0]
            return lambda env: value
        if isinstance(node, Var):
            name = node.name
            return lambda env: env[name]
        if not (free_variables(node) & bound):
            return self._cached(node, cfg)
        if isinstance(node, Neg):
            operand = self._compile(node.operand, bound, cfg)
            return lambda env: -operand(env)
        if isinstance(node, BinOp):
            return self._compile_binary(node, bound, cfg)
        if isinstance(node, CothMinusOne):
            arg = self._compile(node.arg, bound, cfg)
            return _with_breadcrumb(lambda env: coth_minus_one(arg(env)), node)
        if isinstance(node, LogCoshRatio):
            upper, lower, arg = (self._compile(child, bound, cfg) for child in node.children())
            return _with_breadcrumb(lambda env: log_cosh_ratio(upper(env), lower(env), arg(env)), node)
        if isinstance(node, Call):
            spec = FUNCTIONS[node.name]
            fns = [self._compile(arg, bound, cfg) for arg in node.args]

            def call(env: dict) -> complex:
                result = _apply(spec, [f(env) for f in fns], cfg)
                if not result.converged:
                    self._note_inner(f"{spec.name} did not converge inside a quantifier")
                return result.value

            return _with_breadcrumb(call, node)
        if isinstance(node, Quantifier):
            inner_cfg = cfg.tightened()

            def quantifier(env: dict) -> complex:
                result = self._quantifier(node, env, inner_cfg, bound, nested=True)
                if not result.converged:
                    self._note_inner(f"nested {node.kind}({node.var}) did not converge")
                return result.value

            return _with_breadcrumb(quantifier, node)
        raise EvaluationError(f"Unknown node type {type(node).__name__}")

    def _compile_binary(self, node: BinOp, bound: frozenset[str], cfg: EngineConfig) -> Compiled:
        left = self._compile(node.left, bound, cfg)
        right = self._compile(node.right, bound, cfg)
        if node.op == "+":
            return lambda env: left(env) + right(env)
        if node.op == "-":
            return lambda env: left(env) - right(env)
        if node.op == "*":
            return lambda env: left(env) * right(env)
        op = node.op
        return _with_breadcrumb(lambda env: apply_binary(op, left(env), right(env)), node)

    def _compile_term(self, node: Node, bound: frozenset[str], cfg: EngineConfig) -> Compiled:
        """
        Compile a series term that falls back to log space when a factor overflows.

        The fallback only rescues overflow: if the log-space form fails too or
        is itself non-finite, the original failure is raised.
        """
        direct = self._compile(node, bound, cfg)
        logged: Optional[Compiled] = None

        def term(env: dict) -> complex:
            nonlocal logged
            try:
                value = direct(env)
                if is_finite(value):
                    return value
                failure: NumericsError = EvaluationError(f"Non-finite term {value}")
            except (DomainError, EvaluationError, UnsupportedDegreeError) as e:
                failure = e
            if logged is None:
                logged = self._compile_log(node, bound, cfg)
            try:
                value = cmath.exp(logged(env))
            except (NumericsError, OverflowError, ValueError):
                raise failure from None
            if not is_finite(value):
                raise failure
            return value

        return term

    def _compile_log(self, node: Node, bound: frozenset[str], cfg: EngineConfig) -> Compiled:
        """Compile a logarithm of the node's value, on whatever branch is convenient."""
        if isinstance(node, Neg):
            operand = self._compile_log(node.operand, bound, cfg)
            return lambda env: operand(env) + 1j * math.pi
        if isinstance(node, BinOp) and node.op in "*/":
            left = self._compile_log(node.left, bound, cfg)
            right = self._compile_log(node.right, bound, cfg)
            if node.op == "*":
                return lambda env: _log_product((left, right), env)
            return lambda env: left(env) - right(env)
        if isinstance(node, BinOp) and node.op in "+-":
            return self._compile_log_sum(node, bound, cfg)
        if isinstance(node, BinOp) and node.op == "^":
            base = self._compile_log(node.left, bound, cfg)
            exponent = self._compile(node.right, bound, cfg)
            return lambda env: _log_power(base(env), exponent(env))
        if isinstance(node, CothMinusOne):
            arg = self._compile(node.arg, bound, cfg)
            return lambda env: log_coth_minus_one(arg(env))
        if isinstance(node, Call) and node.name in _LOG_FORMS:
            form = _LOG_FORMS[node.name]
            arg = self._compile(node.args[0], bound, cfg)
            return lambda env: form(arg(env))
        if isinstance(node, Call) and node.name == "Gamma" and len(node.args) == 1:
            arg = self._compile(node.args[0], bound, cfg)
            return lambda env: gamma_ln(arg(env)).value
        value = self._compile(node, bound, cfg)

        def log_value(env: dict) -> complex:
            z = value(env)
            if z == 0:
                return complex(-math.inf, 0.0)
            if not is_finite(z):
                raise EvaluationError(f"{label(node)} is not finite in log space")
            return complex_log(z)

        return log_value

    def _compile_log_sum(self, node: BinOp, bound: frozenset[str], cfg: EngineConfig) -> Compiled:
        left = self._compile_log(node.left, bound, cfg)
        right = self._compile_log(node.right, bound, cfg)
        flip = 1j * math.pi if node.op == "-" else 0j

        def log_sum(env: dict) -> complex:
            a, b = left(env), right(env) + flip
            if a.real < b.real:
                a, b = b, a
            if a.real == -math.inf:
                return a
            return a + log1p_complex(cmath.exp(b - a))

        return log_sum

    def _cached(self, node: Node, cfg: EngineConfig) -> Compiled:
        names = tuple(sorted(free_variables(node)))
        prefix = f"{pretty(node)}@{cfg.target_abs_tol!r}/{cfg.target_rel_tol!r}"

        def cached(env: dict) -> complex:
            key = (prefix, tuple(env[name] for name in names))
            if key in self.cache:
                self.cache_hits += 1
                return self.cache[key]
            result = self._eval(node, env, cfg, frozenset(), nested=True)
            if not result.converged:
                self._note_inner(f"{label(node)} did not converge")
            self.cache[key] = result.value
            return result.value

        return cached

    def _note_inner(self, message: str) -> None:
        if message not in self._inner_failures:
            self._inner_failures.append(message)
            logger.warning(message)

    # quantifiers

    def _hint_arg(self, name: str, env: dict, cfg: EngineConfig) -> list[float]:
        values = []
        for hint in self.hints:
            if hint.name == name and hint.arg is not None:
                value = self._eval(hint.arg, env, cfg, frozenset(), nested=True).value
                values.append(_bound_number(value, f"{name} hint"))
        return values

    def _series_hint(self, nested: bool) -> Optional[str]:
        if nested:
            return None
        names = {hint.name for hint in self.hints}
        if "conditional" in names:
            return "conditional"
        if "alternating" in names:
            return "alternating"
        return None

    def _bound_value(self, node: Node, env: dict, cfg: EngineConfig, what: str) -> float:
        if isinstance(node, Const) and node.name == "inf":
            return math.inf
        if isinstance(node, Neg) and isinstance(node.operand, Const) and node.operand.name == "inf":
            return -math.inf
        value = self._eval(node, env, cfg, frozenset(), nested=True).value
        return _bound_number(value, what)

    def _quantifier(self, node: Quantifier, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        missing = object()
        saved = env.get(node.var, missing)
        try:
            if node.kind == "Integral":
                return self._integral(node, env, cfg, bound, nested)
            return self._series(node, env, cfg, bound, nested)
        finally:
            if saved is missing:
                env.pop(node.var, None)
            else:
                env[node.var] = saved

    def _integral(self, node: Quantifier, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        lo = self._bound_value(node.lo, env, cfg, "Integral lower limit")
        hi = self._bound_value(node.hi, env, cfg, "Integral upper limit")
        body = self._compile(node.body, bound | {node.var}, cfg)
        var = node.var

        def f(x: float) -> complex:
            env[var] = complex(x)
            return body(env)

        singular: set[str] = set()
        oscillatory, breakpoints = None, ()
        if not nested:
            names = {hint.name for hint in self.hints}
            if "singular" in names or "singular_lower" in names:
                singular.add("lower")
            if "singular" in names or "singular_upper" in names:
                singular.add("upper")
            frequencies = self._hint_arg("oscillatory", env, cfg)
            oscillatory = abs(frequencies[0]) if frequencies else None
            breakpoints = tuple(self._hint_arg("breakpoint", env, cfg))
        for end, x in (("lower", lo), ("upper", hi)):
            if end not in singular and math.isfinite(x) and not self._regular_at(f, x):
                logger.debug(f"Integral({var}) endpoint {x} flagged singular")
                singular.add(end)

        offsets = {}
        if math.isfinite(lo) and math.isfinite(hi) and lo < hi and not contains_quantifier(node.body):
            for end, limit, op in (("lower", node.lo, "+"), ("upper", node.hi, "-")):
                if end in singular:
                    offsets[end] = self._from_endpoint(node, limit, op, env, bound, cfg)

        integrand = Integrand(eval=f, singular_endpoints=frozenset(singular), oscillatory_hint=oscillatory,
                              breakpoints=breakpoints, from_lower=offsets.get("lower"), from_upper=offsets.get("upper"))
        try:
            result = integrate(integrand, lo, hi, cfg)
        finally:
            env.pop(_offset_name(var), None)
        diagnostics = [] if result.converged else [f"Integral({var}) did not reach tolerance"]
        return _Value(result.value, result.abs_err, result.converged, result.evaluations, diagnostics)

    def _from_endpoint(self, node: Quantifier, limit: Node, op: str, env: dict, bound: frozenset[str],
                       cfg: EngineConfig) -> Callable[[float], complex]:
        """The body at limit + u or limit - u, with differences against the limit cancelled symbolically."""
        offset = _offset_name(node.var)
        shifted = cancel_terms(substitute(node.body, node.var, BinOp(op, limit, Var(offset))))
        body = self._compile(shifted, bound | {offset}, cfg)

        def g(u: float) -> complex:
            env[offset] = complex(u)
            return body(env)

        return g

    @staticmethod
    def _regular_at(f: Callable[[float], complex], x: float) -> bool:
        try:
            return is_finite(f(x))
        except (NumericsError, ArithmeticError, ValueError):
            return False

    def _series(self, node: Quantifier, env: dict, cfg: EngineConfig, bound: frozenset[str], nested: bool) -> _Value:
        what = f"{node.kind} bound"
        lo = self._bound_value(node.lo, env, cfg, what)
        hi = self._bound_value(node.hi, env, cfg, what)
        hint = self._series_hint(nested)

        if math.isinf(lo):
            if lo > 0 or hi == -math.inf:
                raise EvaluationError(f"{node.kind}({node.var}) has an empty infinite range")
            if node.kind == "Prod":
                raise DomainError("Products over negative-infinite ranges are not supported")
            body = self._compile_term(node.body, bound | {node.var}, cfg)
            var = node.var
            if math.isinf(hi):
                def term(idx: tuple[int, ...]) -> complex:
                    env[var] = complex(idx[0])
                    return body(env)

                result = sum_bilateral(TermGenerator(eval=term, ranges=[AxisRange(start=0)], bilateral=True), cfg, hint)
            else:
                top = _index_bound(hi, what)

                def term(idx: tuple[int, ...]) -> complex:
                    env[var] = complex(top - idx[0])
                    return body(env)

                result = sum_series(TermGenerator(eval=term, ranges=[AxisRange(start=0)]), cfg, hint)
            return _Value(result.value, result.abs_err, result.converged, result.terms_used, result.diagnostics)

        start = _index_bound(lo, what)
        end = _index_bound(hi, what)
        if node.kind == "Sum":
            chain = _nested_chain(node, bound)
            if len(chain.axes) > 1:
                return self._multi_sum(chain, start, end, env, cfg, bound)
        body = self._compile_term(node.body, bound | {node.var}, cfg)
        var = node.var

        def term(idx: tuple[int, ...]) -> complex:
            env[var] = complex(idx[0])
            return body(env)

        g = TermGenerator(eval=term, ranges=[AxisRange(start=start, end=end)])
        if node.kind == "Prod":
            result = prod_finite(g) if end is not None else prod_infinite(g, cfg, hint)
        else:
            result = sum_finite(g) if end is not None else sum_series(g, cfg, hint)
        return _Value(result.value, result.abs_err, result.converged, result.terms_used, result.diagnostics)

    def _multi_sum(self, chain: "_Chain", start: int, end: Optional[int], env: dict,
                   cfg: EngineConfig, bound: frozenset[str]) -> _Value:
        variables = [axis.var for axis in chain.axes]
        scopes = [bound | frozenset(variables[:k + 1]) for k in range(len(variables))]
        body = self._compile_term(chain.body, scopes[-1], cfg)
        factors = [(level, self._compile(factor, scopes[level], cfg)) for level, factor in chain.factors]
        ranges = [AxisRange(start=start, end=end)]
        for k, axis in enumerate(chain.axes[1:], start=1):
            ranges.append(self._axis_range(axis, variables[:k], env, cfg, scopes[k - 1]))

        def term(idx: tuple[int, ...]) -> complex:
            for var, index in zip(variables, idx):
                env[var] = complex(index)
            value = body(env)
            for _, factor in factors:
                value *= factor(env)
            return value

        g = TermGenerator(eval=term, ranges=ranges)
        introduced = [var for var in variables[1:] if var not in env]
        try:
            if any(axis.is_infinite for axis in ranges):
                result = sum_multi(g, cfg)
            else:
                result = sum_finite(g)
        finally:
            for var in introduced:
                env.pop(var, None)
        logger.debug(f"Multi-sum over {', '.join(variables)}: {result.strategy_used}, {result.terms_used} terms")
        return _Value(result.value, result.abs_err, result.converged, result.terms_used, result.diagnostics)

    def _axis_range(self, axis: "_Axis", outer: list[str], env: dict, cfg: EngineConfig,
                    scope: frozenset[str]) -> AxisRange:
        what = f"Sum({axis.var}) bound"
        if isinstance(axis.lo, Neg) and isinstance(axis.lo.operand, Const) and axis.lo.operand.name == "inf":
            raise EvaluationError(f"{what}: inner sums cannot start at -inf")
        hi_infinite = isinstance(axis.hi, Const) and axis.hi.name == "inf"

        def resolver(expr: Node) -> Callable[[tuple[int, ...]], int]:
            fn = self._compile(expr, scope, cfg)

            def resolve(indices: tuple[int, ...]) -> int:
                for var, index in zip(outer, indices):
                    env[var] = complex(index)
                value = _index_bound(_bound_number(fn(env), what), what)
                if value is None:
                    raise EvaluationError(f"{what} evaluated to inf")
                return value

            return resolve

        depends = set(outer)
        range_ = AxisRange()
        if free_variables(axis.lo) & depends:
            range_.lower_fn = resolver(axis.lo)
        else:
            range_.start = _index_bound(self._bound_value(axis.lo, env, cfg, what), what)
        if hi_infinite:
            return range_
        if free_variables(axis.hi) & depends:
            range_.upper_fn = resolver(axis.hi)
        else:
            range_.end = _index_bound(self._bound_value(axis.hi, env, cfg, what), what)
        return range_


@dataclass
class _Axis:
    var: str
    lo: Node
    hi: Node


@dataclass
class _Chain:
    axes: list[_Axis]
    factors: list[tuple[int, Node]]
    body: Node


def _nested_chain(node: Quantifier, bound: frozenset[str]) -> _Chain:
    """
    Directly nested Sums, allowing multiplication by factors that depend only on outer indices.

    factors holds (level, expression) where level is the index of the innermost
    axis the factor may depend on.
    """
    axes = [_Axis(node.var, node.lo, node.hi)]
    factors: list[tuple[int, Node]] = []
    body = node.body
    while len(axes) < _MAX_AXES:
        outer_vars = {axis.var for axis in axes}
        inner, pending = _split_inner_sum(body, outer_vars)
        if inner is None or _is_negative_infinity(inner.lo):
            break
        if inner.var in outer_vars or inner.var in bound:
            break
        level = len(axes) - 1
        factors.extend((level, factor) for factor in pending)
        axes.append(_Axis(inner.var, inner.lo, inner.hi))
        body = inner.body
    return _Chain(axes=axes, factors=factors, body=body)


def _split_inner_sum(body: Node, outer_vars: set[str]) -> tuple[Optional[Quantifier], list[Node]]:
    if isinstance(body, Quantifier) and body.kind == "Sum":
        return body, []
    if isinstance(body, BinOp) and body.op == "*":
        for inner, factor in ((body.right, body.left), (body.left, body.right)):
            if isinstance(inner, Quantifier) and inner.kind == "Sum" and inner.var not in free_variables(factor):
                return inner, [factor]
    return None, []


def _is_negative_infinity(node: Node) -> bool:
    return isinstance(node, Neg) and isinstance(node.operand, Const) and node.operand.name == "inf"


def evaluate(
    ast: Node,
    bindings: Optional[dict[str, complex]] = None,
    config: Optional[EngineConfig] = None,
    hints: Iterable[Hint] = (),
) -> EvalResult:
    """Evaluate with a fresh Evaluator."""
    return Evaluator(config, hints).evaluate(ast, bindings)


def evaluate_constant(ast: Node, bindings: Optional[dict[str, complex]] = None) -> complex:
    """Value of a constant expression such as a sample value or a domain bound."""
    return evaluate(ast, bindings).value
