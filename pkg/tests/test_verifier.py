#!/usr/bin/env python3

import math

import pytest

from config import VerifierConfig
from registry import load_registry
from verifier import (STATUSES, entry_status, exit_code_for, relative_difference, run_all, summarize,
                      verify_identity)

from conftest import AMBIGUOUS_ENTRY, POLE_ENTRY, TRIVIAL_ENTRY, WRONG_RHS_ENTRY


def test_trivial_identity_passes(parse_one, verifier_config):
    [record] = verify_identity(parse_one(TRIVIAL_ENTRY), verifier_config)
    assert record.status == "pass"
    assert record.abs_diff == 0
    assert record.sample_point == {}
    assert record.provenance == "S3.T1"


def test_wrong_rhs_fails(parse_one, verifier_config):
    [record] = verify_identity(parse_one(WRONG_RHS_ENTRY), verifier_config)
    assert record.status == "fail"
    assert record.rel_diff == pytest.approx(1e-3, rel=1e-2)
    assert record.lhs.value == pytest.approx(math.pi ** 2 / 6, rel=1e-9)


def test_loose_tolerance_passes(parse_one, tmp_path):
    cfg = VerifierConfig(output_dir=str(tmp_path), tol_rel=1e-2)
    [record] = verify_identity(parse_one(WRONG_RHS_ENTRY), cfg)
    assert record.status == "pass"


def test_pole_at_sample(parse_one, verifier_config):
    [record] = verify_identity(parse_one(POLE_ENTRY), verifier_config)
    assert record.status == "pole_at_sample"
    assert record.message.startswith("lhs:")
    assert math.isnan(record.lhs.value.real)
    assert record.rhs.value == 1


def test_registry_status_is_copied(parse_one, verifier_config):
    [record] = verify_identity(parse_one(AMBIGUOUS_ENTRY), verifier_config)
    assert record.status == "ambiguous"
    assert record.expected_status == "ambiguous"
    assert record.message == "Branch not stated."


def test_one_record_per_sample(parse_one, verifier_config):
    entry = parse_one("""
        identity "two_points" {
          param x in Real(0, 2);
          lhs = Integral(t, 0, x, 2*t);
          rhs = x^2;
          sample x = 1;
          sample x = 1.5;
        }
    """)
    records = verify_identity(entry, verifier_config)
    assert [r.sample_index for r in records] == [0, 1]
    assert all(r.status == "pass" for r in records)


def test_entry_status_takes_the_worst(parse_one, verifier_config):
    records = verify_identity(parse_one(TRIVIAL_ENTRY), verifier_config)
    failing = verify_identity(parse_one(WRONG_RHS_ENTRY), verifier_config)
    failing[0].identity_id = records[0].identity_id
    assert entry_status(records + failing) == "fail"
    assert entry_status(records) == "pass"


def test_exit_codes(parse_one, verifier_config):
    ambiguous = verify_identity(parse_one(AMBIGUOUS_ENTRY), verifier_config)
    pole = verify_identity(parse_one(POLE_ENTRY), verifier_config)
    failing = verify_identity(parse_one(WRONG_RHS_ENTRY), verifier_config)
    assert exit_code_for(ambiguous + pole) == 0
    assert exit_code_for(ambiguous + failing) == 1


def test_summarize(parse_one, verifier_config):
    records = []
    for text in (TRIVIAL_ENTRY, WRONG_RHS_ENTRY, AMBIGUOUS_ENTRY):
        records += verify_identity(parse_one(text), verifier_config)
    summary = summarize(records, 1234.5)
    assert summary["entries"] == 3
    assert summary["records"] == 3
    assert set(summary["record_counts"]) == set(STATUSES)
    assert summary["entry_counts"]["pass"] == 1
    assert summary["entry_counts"]["fail"] == 1
    assert summary["entry_counts"]["ambiguous"] == 1
    assert len(summary["slowest"]) == 3
    assert summary["total_time_ms"] == 1234.5


def test_run_all_orders_by_provenance(write_registry, verifier_config):
    path = write_registry(first=WRONG_RHS_ENTRY + AMBIGUOUS_ENTRY, second=TRIVIAL_ENTRY)
    report = run_all(load_registry(path), verifier_config)
    assert [r.provenance for r in report.records] == ["S3.T1", "S4.2.E1", "S4.3.E1"]
    assert report.exit_code == 1
    assert report.summary["exit_code"] == 1
    assert report.config["tol_rel"] == 1e-8
    assert report.config["engine"]["acceleration"] == "auto"


def test_parallel_run_matches_serial(write_registry, tmp_path):
    path = write_registry(entries=TRIVIAL_ENTRY + AMBIGUOUS_ENTRY + POLE_ENTRY)
    manifest = load_registry(path)
    serial = run_all(manifest, VerifierConfig(output_dir=str(tmp_path)))
    parallel = run_all(manifest, VerifierConfig(output_dir=str(tmp_path), jobs=2))
    assert [(r.identity_id, r.status) for r in serial.records] == [(r.identity_id, r.status) for r in parallel.records]
    assert parallel.exit_code == 0


def test_relative_difference():
    assert relative_difference(0, 0) == 0
    assert relative_difference(1, 1.5) == pytest.approx(1 / 3)
    assert relative_difference(1j, -1j) == 2


MOMENT_RECIPROCITY = """
    identity "moment_reciprocity" {
      param alpha in Real(0.2, 10);
      param beta in Real(0.2, 10);
      lhs = Sum(p, 1, inf, p*(alpha^2*(Coth(alpha^2*p) - 1) + beta^2*(Coth(beta^2*p) - 1)));
      rhs = 1/12*(alpha^2 + beta^2 - 6);
      sample alpha = 1, beta = pi;
      sample alpha = Sqrt(2), beta = pi/Sqrt(2);
      sample alpha = 1, beta = 2;
    }
"""


def test_reciprocity_needs_the_constraint(parse_one, verifier_config):
    records = verify_identity(parse_one(MOMENT_RECIPROCITY), verifier_config)
    assert [r.status for r in records] == ["pass", "pass", "fail"]
    assert records[0].rel_diff <= 1e-9
