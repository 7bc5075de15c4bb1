#!/usr/bin/env python3

import json

import pytest

from main import EXIT_FAILURES, EXIT_IO, EXIT_OK, EXIT_USAGE, main

from conftest import AMBIGUOUS_ENTRY, TRIVIAL_ENTRY, WRONG_RHS_ENTRY


def test_eval_prints_value(capsys):
    assert main(["eval", "Gamma(1/2)^2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "value:     3.14159265358979" in out
    assert "converged: True" in out


def test_eval_with_parameters(capsys):
    assert main(["eval", "Sum(p, 1, inf, a^p/p^2)", "--param", "a=1/2", "--tol", "1e-12"]) == EXIT_OK
    assert "value:     0.58224052646501" in capsys.readouterr().out


def test_eval_usage_errors():
    assert main(["eval", "a + 1"]) == EXIT_USAGE
    assert main(["eval", "1 +"]) == EXIT_USAGE
    assert main(["eval", "a", "--param", "a"]) == EXIT_USAGE


def test_eval_pole_is_a_failure():
    assert main(["eval", "Gamma(-2)"]) == EXIT_FAILURES


def test_list(capsys):
    assert main(["list"]) == EXIT_OK
    assert "Total: 86 identities" in capsys.readouterr().out
    assert main(["list", "--section", "S4.1"]) == EXIT_OK
    assert "Total: 11 identities" in capsys.readouterr().out


def test_verify_writes_report(write_registry, tmp_path):
    registry = write_registry(entries=TRIVIAL_ENTRY + AMBIGUOUS_ENTRY)
    out = tmp_path / "report.json"
    assert main(["verify", "--registry", registry, "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["summary"]["entries"] == 2


def test_verify_failure_exit_code(write_registry, tmp_path):
    registry = write_registry(entries=TRIVIAL_ENTRY + WRONG_RHS_ENTRY)
    out = tmp_path / "report.md"
    assert main(["verify", "--registry", registry, "--report", "markdown", "--out", str(out)]) == EXIT_FAILURES
    assert main(["verify", "--registry", registry, "--id", "one_equals_one", "--out", str(out)]) == EXIT_OK


def test_verify_usage_and_io_errors(write_registry, tmp_path):
    assert main(["verify", "--registry", str(tmp_path / "missing")]) == EXIT_USAGE
    registry = write_registry(entries=TRIVIAL_ENTRY)
    assert main(["verify", "--registry", registry, "--id", "nope"]) == EXIT_USAGE
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert main(["verify", "--registry", registry, "--out", str(blocker / "report.json")]) == EXIT_IO


def test_sample(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    args = ["sample", "--figure", "fig1", "--re-min", "-1", "--re-max", "1", "--im-min", "-1", "--im-max", "1"]
    assert main(args + ["--res", "4", "--out", str(out)]) == EXIT_OK
    assert "Grid points: 16" in capsys.readouterr().out
    assert len(out.read_text(encoding="utf-8").splitlines()) == 17
    assert main(args + ["--res", "1", "--out", str(out)]) == EXIT_USAGE


def test_argument_errors_exit_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
