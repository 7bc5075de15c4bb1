#!/usr/bin/env python3

import os
import sys
import textwrap

import mpmath
import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from config import DEFAULT_REGISTRY_DIR, EngineConfig, VerifierConfig  # noqa: E402
from identity_parser import parse_identities  # noqa: E402
from registry import load_registry  # noqa: E402

mpmath.mp.dps = 30


def mp_complex(value) -> complex:
    """Round an mpmath oracle value to a Python complex."""
    return complex(mpmath.mpc(value))


@pytest.fixture
def engine_config():
    return EngineConfig()


@pytest.fixture
def verifier_config(tmp_path):
    return VerifierConfig(output_dir=str(tmp_path / "output"))


@pytest.fixture(scope="session")
def shipped_manifest():
    return load_registry(DEFAULT_REGISTRY_DIR)


@pytest.fixture
def rng():
    return np.random.default_rng(20240131)


@pytest.fixture
def parse_one():
    """Parse a single identity block."""
    def parse(text: str):
        entries = parse_identities(textwrap.dedent(text), "<test>")
        assert len(entries) == 1
        return entries[0]
    return parse


@pytest.fixture
def write_registry(tmp_path):
    """Write identity files into a fresh registry directory and return its path."""
    def write(**files: str) -> str:
        directory = tmp_path / "registry"
        directory.mkdir(exist_ok=True)
        for name, text in files.items():
            (directory / f"{name}.idt").write_text(textwrap.dedent(text), encoding="utf-8")
        return str(directory)
    return write


TRIVIAL_ENTRY = """
identity "one_equals_one" {
  lhs = 1;
  rhs = 1;
  provenance "S3.T1";
}
"""

WRONG_RHS_ENTRY = """
identity "off_by_a_thousandth" {
  lhs = Sum(p, 1, inf, 1/p^2);
  rhs = pi^2/6*(1 + 1/1000);
  provenance "S4.3.E1";
}
"""

POLE_ENTRY = """
identity "pole_in_sample" {
  param a in Real(-5, 5);
  lhs = Gamma(a);
  rhs = 1;
  sample a = -2;
  provenance "S4.3.E2";
}
"""

CONSTRAINED_ENTRY = """
identity "violates_constraint" {
  param alpha in Real(0.1, 10);
  param beta in Real(0.1, 10);
  constraint alpha*beta = pi;
  lhs = alpha*beta;
  rhs = pi;
  sample alpha = 1, beta = 2;
  provenance "S3.T2";
}
"""

AMBIGUOUS_ENTRY = """
identity "unclear_branch" {
  lhs = 2;
  rhs = 3;
  status ambiguous;
  provenance "S4.2.E1";
  note "Branch not stated.";
}
"""


@pytest.fixture
def fixture_entries():
    return {
        "trivial": TRIVIAL_ENTRY,
        "wrong_rhs": WRONG_RHS_ENTRY,
        "pole": POLE_ENTRY,
        "constrained": CONSTRAINED_ENTRY,
        "ambiguous": AMBIGUOUS_ENTRY,
    }


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: evaluates the whole shipped registry")
