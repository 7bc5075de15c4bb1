#!/usr/bin/env python3
"""The closed table of functions an identity expression may call."""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from bernoulli import euler_number
from config import EngineConfig
from elementary import coth, cot, csc, csch, gudermannian, sec, sech
from errors import DomainError, PoleError
from gamma_functions import (
    exp_integral,
    gamma,
    gamma_ln,
    harmonic,
    incomplete_gamma_upper,
    polygamma,
    reciprocal_gamma,
)
from hypergeometric import bessel_j, hyp1f1, hyp2f1, hypergeometric_pfq, incomplete_beta
from models import EvalResult, PochhammerSpec, PolyFamily
from numerics import EPS, complex_log, is_integer, is_nonpositive_integer
from polynomials import poly_eval
from q_functions import q_digamma, q_pochhammer, rising_factorial
from zeta_functions import hurwitz_zeta, lerch_phi, polylog, stieltjes_gamma

logger = logging.getLogger(__name__)

Impl = Callable[[Sequence[complex], EngineConfig], EvalResult]


@dataclass(frozen=True)
class FunctionSpec:
    """A callable name with its accepted argument counts."""

    name: str
    arities: frozenset[int]
    impl: Impl

    def describe_arity(self) -> str:
        counts = sorted(self.arities)
        if len(counts) == 1:
            return f"{counts[0]} argument{'s' if counts[0] != 1 else ''}"
        return f"{' or '.join(str(c) for c in counts)} arguments"


def _rounded(value: complex, terms: int = 1) -> EvalResult:
    value = complex(value)
    return EvalResult(value=value, abs_err=4 * EPS * abs(value), terms_used=terms)


def _as_int(z: complex, what: str) -> int:
    if not is_integer(z, 1e-12):
        raise DomainError(f"{what} must be an integer, got {z}")
    return int(round(complex(z).real))


def _as_real(z: complex, what: str) -> float:
    z = complex(z)
    if abs(z.imag) > 1e-14 * max(1.0, abs(z.real)):
        raise DomainError(f"{what} must be real, got {z}")
    return z.real


def _elementary(fn: Callable[[complex], complex]) -> Impl:
    def impl(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
        try:
            return _rounded(fn(complex(args[0])))
        except ZeroDivisionError:
            raise PoleError(f"{fn.__name__} has a pole at {args[0]}", location=args[0]) from None
        except ValueError as e:
            raise DomainError(f"{fn.__name__}({args[0]}): {e}") from None
        except OverflowError:
            raise DomainError(f"{fn.__name__} overflows at {args[0]}") from None
    return impl


def _gamma(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    if len(args) == 2:
        return incomplete_gamma_upper(args[0], args[1], cfg.max_terms)
    return gamma(args[0])


def _gamma_inc(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return incomplete_gamma_upper(args[0], args[1], cfg.max_terms)


def _log_gamma(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return gamma_ln(args[0])


def _hurwitz(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return hurwitz_zeta(args[0], args[1])


def _hurwitz_ds(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return hurwitz_zeta(args[0], args[1], d=1)


def _lerch(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    order = _as_int(args[3], "LerchPhi derivative order") if len(args) == 4 else 0
    return lerch_phi(args[0], args[1], args[2], order, cfg)


def _lerch_ds(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return lerch_phi(args[0], args[1], args[2], 1, cfg)


def _stieltjes(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    a = args[1] if len(args) == 2 else 1.0
    return stieltjes_gamma(_as_int(args[0], "Stieltjes index"), a)


def _polygamma(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    if len(args) == 1:
        return polygamma(0, args[0])
    return polygamma(_as_int(args[0], "PolyGamma order"), args[1])


def _q_digamma(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return q_digamma(args[0], args[1], cfg)


def _q_pochhammer(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    count = _as_int(args[2], "QPochhammer count") if len(args) == 3 else None
    return q_pochhammer(PochhammerSpec(base=complex(args[0]), q=complex(args[1]), count=count), cfg)


def _pochhammer(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return rising_factorial(args[0], args[1])


def _hyp1f1(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return hyp1f1(args[0], args[1], args[2], cfg)


def _hyp2f1(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return hyp2f1(args[0], args[1], args[2], args[3], cfg)


def _hyp3f3(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return hypergeometric_pfq(args[0:3], args[3:6], args[6], cfg)


def _laguerre(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    alpha = args[1] if len(args) == 3 else 0.0
    family = PolyFamily("laguerre", _as_int(args[0], "Laguerre degree"), complex(alpha))
    return poly_eval(family, args[-1])


def _gegenbauer(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    family = PolyFamily("gegenbauer", _as_int(args[0], "Gegenbauer degree"), complex(args[1]))
    return poly_eval(family, args[2])


def _euler_e(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    n = _as_int(args[0], "Euler index")
    if len(args) == 1:
        if n < 0:
            raise DomainError(f"Euler number index must be non-negative, got {n}")
        return EvalResult(value=complex(euler_number(n)), abs_err=0.0, terms_used=n + 1)
    return poly_eval(PolyFamily("euler_poly", n), args[1])


def _bessel(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return bessel_j(args[0], args[1], cfg)


def _beta_inc(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return incomplete_beta(args[0], args[1], args[2], cfg)


def _exp_int_e(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return exp_integral("E", args[1], _as_int(args[0], "ExpIntE order"), cfg.max_terms)


def _ei(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return exp_integral("Ei", args[0], max_terms=cfg.max_terms)


def _polylog(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return polylog(args[0], args[1], 0, cfg)


def _polylog_ds(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return polylog(args[0], args[1], 1, cfg)


def _gd(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return gudermannian(args[0])


def _harmonic(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return harmonic(args[0])


def _log(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    try:
        return _rounded(complex_log(args[0]))
    except DomainError:
        raise PoleError("Log has a logarithmic singularity at 0", location=0j) from None


def _exp(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    try:
        return _rounded(cmath.exp(args[0]))
    except OverflowError:
        raise DomainError(f"Exp overflows at {args[0]}") from None


def _sqrt(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    z = complex(args[0])
    if z.imag == 0 and z.real >= 0:
        return _rounded(complex(math.sqrt(z.real), 0.0))
    return _rounded(cmath.sqrt(z))


def _abs(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return _rounded(complex(abs(complex(args[0])), 0.0))


def _conj(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return EvalResult(value=complex(args[0]).conjugate(), abs_err=0.0, terms_used=1)


def _re(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return EvalResult(value=complex(complex(args[0]).real, 0.0), abs_err=0.0, terms_used=1)


def _im(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    return EvalResult(value=complex(complex(args[0]).imag, 0.0), abs_err=0.0, terms_used=1)


def _floor(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    x = _as_real(args[0], "Floor argument")
    return EvalResult(value=complex(math.floor(x), 0.0), abs_err=0.0, terms_used=1)


def _binomial(args: Sequence[complex], cfg: EngineConfig) -> EvalResult:
    n, k = complex(args[0]), complex(args[1])
    if is_integer(n) and is_integer(k) and n.real >= 0:
        top, bottom = int(round(n.real)), int(round(k.real))
        value = math.comb(top, bottom) if bottom >= 0 else 0
        return EvalResult(value=complex(value, 0.0), abs_err=0.0, terms_used=1)
    if is_nonpositive_integer(n + 1):
        raise PoleError(f"Binomial({n}, {k}) has a pole in Gamma(n + 1)", location=n)
    numerator = gamma(n + 1)
    value = numerator.value * reciprocal_gamma(k + 1) * reciprocal_gamma(n - k + 1)
    return EvalResult(value=value, abs_err=8 * EPS * abs(value) + numerator.abs_err * abs(value / numerator.value),
                      terms_used=numerator.terms_used)


def _spec(name: str, arities: Sequence[int], impl: Impl) -> tuple[str, FunctionSpec]:
    return name, FunctionSpec(name, frozenset(arities), impl)


FUNCTIONS: dict[str, FunctionSpec] = dict([
    _spec("Gamma", (1, 2), _gamma),
    _spec("GammaInc", (2,), _gamma_inc),
    _spec("LogGamma", (1,), _log_gamma),
    _spec("HurwitzZeta", (2,), _hurwitz),
    _spec("HurwitzZetaDs", (2,), _hurwitz_ds),
    _spec("LerchPhi", (3, 4), _lerch),
    _spec("LerchPhiDs", (3,), _lerch_ds),
    _spec("StieltjesGamma", (1, 2), _stieltjes),
    _spec("PolyGamma", (1, 2), _polygamma),
    _spec("QDigamma", (2,), _q_digamma),
    _spec("QPochhammer", (2, 3), _q_pochhammer),
    _spec("Pochhammer", (2,), _pochhammer),
    _spec("Hyp1F1", (3,), _hyp1f1),
    _spec("Hyp2F1", (4,), _hyp2f1),
    _spec("Hyp3F3", (7,), _hyp3f3),
    _spec("LaguerreL", (2, 3), _laguerre),
    _spec("GegenbauerC", (3,), _gegenbauer),
    _spec("EulerE", (1, 2), _euler_e),
    _spec("BesselJ", (2,), _bessel),
    _spec("BetaInc", (3,), _beta_inc),
    _spec("ExpIntE", (2,), _exp_int_e),
    _spec("Ei", (1,), _ei),
    _spec("PolyLog", (2,), _polylog),
    _spec("PolyLogDs", (2,), _polylog_ds),
    _spec("Gd", (1,), _gd),
    _spec("Harmonic", (1,), _harmonic),
    _spec("Binomial", (2,), _binomial),
    _spec("Log", (1,), _log),
    _spec("Exp", (1,), _exp),
    _spec("Sin", (1,), _elementary(cmath.sin)),
    _spec("Cos", (1,), _elementary(cmath.cos)),
    _spec("Tan", (1,), _elementary(cmath.tan)),
    _spec("Cot", (1,), _elementary(cot)),
    _spec("Sec", (1,), _elementary(sec)),
    _spec("Csc", (1,), _elementary(csc)),
    _spec("Sinh", (1,), _elementary(cmath.sinh)),
    _spec("Cosh", (1,), _elementary(cmath.cosh)),
    _spec("Tanh", (1,), _elementary(cmath.tanh)),
    _spec("Coth", (1,), _elementary(coth)),
    _spec("Sech", (1,), _elementary(sech)),
    _spec("Csch", (1,), _elementary(csch)),
    _spec("ArcTan", (1,), _elementary(cmath.atan)),
    _spec("ArcTanh", (1,), _elementary(cmath.atanh)),
    _spec("Sqrt", (1,), _sqrt),
    _spec("Abs", (1,), _abs),
    _spec("Conj", (1,), _conj),
    _spec("Re", (1,), _re),
    _spec("Im", (1,), _im),
    _spec("Floor", (1,), _floor),
])


def lookup(name: str) -> FunctionSpec:
    """
    Find a function by name.

    Raises:
        KeyError: If the name is not in the table
    """
    return FUNCTIONS[name]


def call(name: str, args: Sequence[complex], config: EngineConfig) -> EvalResult:
    """Apply a table function to already evaluated arguments."""
    spec = FUNCTIONS[name]
    if len(args) not in spec.arities:
        raise DomainError(f"{name} expects {spec.describe_arity()}, got {len(args)}")
    return spec.impl([complex(a) for a in args], config)
