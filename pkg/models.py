#!/usr/bin/env python3

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

from config import EngineConfig


@dataclass
class EvalResult:
    """A complex value with an absolute-error estimate and convergence diagnostics."""

    value: complex
    abs_err: float
    terms_used: int = 0
    converged: bool = True
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class QuadResult:
    """Outcome of one numerical integration."""

    value: complex
    abs_err: float
    evaluations: int
    subdivisions: int
    converged: bool


@dataclass
class SumResult:
    """Outcome of one series, multi-sum or product evaluation."""

    value: complex
    abs_err: float
    terms_used: int
    strategy_used: str
    converged: bool
    diagnostics: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class PolyFamily:
    """Selects a classical polynomial: laguerre, gegenbauer or euler_poly."""

    family: str
    degree: int
    parameter: complex = 0j


@dataclass(frozen=True)
class PochhammerSpec:
    """(base; q)_count; q=None is the rising factorial, count=None the infinite product."""

    base: complex
    q: Optional[complex] = None
    count: Optional[int] = 0


@dataclass
class Integrand:
    """
    Complex-valued function of a real variable plus its singularity hints.

    from_lower and from_upper, when set, evaluate f(lo + u) and f(hi - u) from
    the offset u directly, for use next to a singular endpoint.
    """

    eval: Callable[[float], complex]
    singular_endpoints: frozenset[str] = frozenset()
    oscillatory_hint: Optional[float] = None
    breakpoints: tuple[float, ...] = ()
    from_lower: Optional[Callable[[float], complex]] = None
    from_upper: Optional[Callable[[float], complex]] = None


@dataclass
class AxisRange:
    """Index range of one summation axis; callables take the outer indices."""

    start: int = 0
    end: Optional[int] = None
    lower_fn: Optional[Callable[[tuple[int, ...]], int]] = None
    upper_fn: Optional[Callable[[tuple[int, ...]], int]] = None

    def bounds(self, outer: tuple[int, ...]) -> tuple[int, Optional[int]]:
        """Resolve the range for the given outer indices (end None = infinite)."""
        lo = self.lower_fn(outer) if self.lower_fn else self.start
        hi = self.upper_fn(outer) if self.upper_fn else self.end
        return lo, hi

    @property
    def is_infinite(self) -> bool:
        return self.end is None and self.upper_fn is None


@dataclass
class TermGenerator:
    """Summand or factor as a function of an index tuple."""

    eval: Callable[[tuple[int, ...]], complex]
    ranges: list[AxisRange]
    bilateral: bool = False

    @property
    def arity(self) -> int:
        return len(self.ranges)


@dataclass(frozen=True)
class ParamDecl:
    """Declared identity parameter with its domain."""

    name: str
    domain: str
    bounds: tuple[float, ...]


@dataclass(frozen=True)
class Hint:
    """Registry hint flag, optionally carrying an expression argument."""

    name: str
    arg: Any = None


@dataclass
class Identity:
    """One registry entry: two expressions, parameters, samples and expected status."""

    id: str
    lhs: Any
    rhs: Any
    params: list[ParamDecl] = field(default_factory=list)
    constraints: list[tuple[Any, Any]] = field(default_factory=list)
    hints: list[Hint] = field(default_factory=list)
    samples: list[dict[str, complex]] = field(default_factory=list)
    expected_status: str = "verify"
    provenance: str = ""
    note: str = ""
    source: str = ""
    line: int = 0

    def has_hint(self, name: str) -> bool:
        return any(h.name == name for h in self.hints)


@dataclass
class VerificationRecord:
    """Per-identity, per-sample verification outcome."""

    identity_id: str
    provenance: str
    sample_index: int
    sample_point: dict[str, complex]
    lhs: EvalResult
    rhs: EvalResult
    abs_diff: float
    rel_diff: float
    status: str
    wall_time_ms: float
    message: str = ""
    expected_status: str = "verify"


@dataclass
class RegistryManifest:
    """All loaded identities plus per-section counts."""

    entries: list[Identity]
    counts_by_section: dict[str, int]
    sources: dict[str, str] = field(default_factory=dict)

    @property
    def sample_count(self) -> int:
        return sum(len(entry.samples) for entry in self.entries)


@dataclass
class Report:
    """Completed verification run."""

    config: dict[str, Any]
    summary: dict[str, Any]
    records: list[VerificationRecord]
    exit_code: int = 0


def engine_config_dict(cfg: EngineConfig) -> dict[str, Any]:
    """Plain-dict view of an engine configuration for reports."""
    view = asdict(cfg)
    view["acceleration"] = cfg.acceleration.value
    return view
