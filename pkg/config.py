#!/usr/bin/env python3

import os
from dataclasses import dataclass, field, replace
from enum import Enum


class Acceleration(str, Enum):
    """Series acceleration strategies selectable from the configuration."""

    DIRECT = "direct"
    WYNN_EPSILON = "wynn_epsilon"
    LEVIN_U = "levin_u"
    EULER_ALTERNATING = "euler_alternating"
    AUTO = "auto"


DEFAULT_REGISTRY_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "registry")


@dataclass(frozen=True)
class EngineConfig:
    """Precision targets and budgets shared by every numerical engine."""

    target_abs_tol: float = 1e-12
    target_rel_tol: float = 1e-10
    max_terms: int = 200000
    max_quad_depth: int = 30
    acceleration: Acceleration = Acceleration.AUTO
    max_shells: int = 2000
    max_subdivisions: int = 2000
    tanh_sinh_max_level: int = 12
    tanh_sinh_weight_cutoff: float = 1e-17
    inner_tol_factor: float = 100.0

    def __post_init__(self):
        if self.target_abs_tol <= 0 or self.target_rel_tol <= 0:
            raise ValueError("Tolerances must be positive")
        if self.max_terms < 1 or self.max_quad_depth < 1 or self.max_shells < 1:
            raise ValueError("Budgets must be positive")
        if self.tanh_sinh_max_level < 1:
            raise ValueError("tanh_sinh_max_level must be at least 1")
        # accepts either the enum or its string value
        object.__setattr__(self, "acceleration", Acceleration(self.acceleration))

    def tolerance(self, value: complex) -> float:
        """Absolute tolerance that applies to a result of the given magnitude."""
        return max(self.target_abs_tol, self.target_rel_tol * abs(value))

    def tightened(self) -> "EngineConfig":
        """Configuration used for quantifiers nested inside another quantifier."""
        return replace(
            self,
            target_abs_tol=max(1e-15, self.target_abs_tol / self.inner_tol_factor),
            target_rel_tol=max(1e-13, self.target_rel_tol / self.inner_tol_factor),
        )


@dataclass
class VerifierConfig:
    """Verification tolerances, parallelism and output locations."""

    registry_dir: str = DEFAULT_REGISTRY_DIR
    output_dir: str = "output"
    tol_rel: float = 1e-8
    tol_abs: float = 1e-10
    jobs: int = 1
    engine: EngineConfig = field(default_factory=EngineConfig)

    def __post_init__(self):
        if self.tol_rel <= 0 or self.tol_abs <= 0:
            raise ValueError("Verification tolerances must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @property
    def report_json(self) -> str:
        """Get path for the JSON report in output directory."""
        return os.path.join(self.output_dir, "report.json")

    @property
    def report_csv(self) -> str:
        """Get path for the CSV report in output directory."""
        return os.path.join(self.output_dir, "report.csv")

    @property
    def report_markdown(self) -> str:
        """Get path for the Markdown report in output directory."""
        return os.path.join(self.output_dir, "report.md")

    def report_path(self, report_format: str) -> str:
        """Get the default report path for a format name."""
        return {
            "json": self.report_json,
            "csv": self.report_csv,
            "markdown": self.report_markdown,
        }[report_format]

    def figure_csv(self, figure_id: str) -> str:
        """Get path for a figure-data grid in output directory."""
        return os.path.join(self.output_dir, f"{figure_id}.csv")

    def ensure_output_dir(self) -> None:
        """Create output directory if it doesn't exist."""
        os.makedirs(self.output_dir, exist_ok=True)
