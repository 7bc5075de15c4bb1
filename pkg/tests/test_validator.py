#!/usr/bin/env python3

import os

import pytest

from config import DEFAULT_REGISTRY_DIR
from errors import ValidationError
from expression import BinOp, Const, Number, Var
from expression_parser import parse_expression
from identity_parser import parse_identities
from validator import check_samples, fold_constants, require_valid, validate, validate_identity


def test_unbound_variable_listed():
    report = validate(parse_expression("a + q*Sum(p, 1, 3, p)"), ["a"])
    assert not report.ok
    assert report.errors == ["unbound variable: q"]


def test_clean_expression():
    report = validate(parse_expression("Sum(p, 1, inf, a^p/p^2)"), ["a"])
    assert report.ok
    assert report.warnings == []


def test_parameter_shadowing_constant():
    report = validate(parse_expression("pi"), ["pi"])
    assert any("shadow constants" in e for e in report.errors)


def test_quantifier_shadowing_is_a_warning():
    report = validate(parse_expression("Sum(a, 1, 3, a)"), ["a"])
    assert report.ok
    assert any("shadows a parameter" in w for w in report.warnings)
    report = validate(parse_expression("Sum(p, 1, 3, Sum(p, 1, 2, p))"), [])
    assert any("enclosing variable" in w for w in report.warnings)


@pytest.mark.parametrize("text", ["inf", "1 + inf", "Sum(p, inf, 3, p)", "Sum(p, 1, -inf, p)", "Sum(p, 1, 2*inf, p)"])
def test_infinity_placement(text):
    assert not validate(parse_expression(text), []).ok


def test_infinity_as_bounds():
    assert validate(parse_expression("Sum(p, -inf, inf, Exp(-p^2))"), []).ok


def test_division_by_literal_zero_warns():
    report = validate(parse_expression("1/(2 - 2)"), [])
    assert report.ok
    assert any("division by a literal zero" in w for w in report.warnings)


def test_fold_constants():
    folded = fold_constants(parse_expression("2*3 + x^(1 + 1) - pi"))
    assert folded == BinOp("-", BinOp("+", Number(6.0), BinOp("^", Var("x"), Number(2.0))), Const("pi"))
    # division by zero is left for evaluation
    assert isinstance(fold_constants(parse_expression("1/0")), BinOp)


def _entry(text):
    return parse_identities(text, "<test>")[0]


def test_constraint_violation(fixture_entries):
    entry = _entry(fixture_entries["constrained"])
    problems = check_samples(entry)
    assert len(problems) == 1
    assert "violates constraint" in problems[0]


def test_domain_and_binding_problems():
    entry = _entry("""
    identity "bad_samples" {
      param n in Int(1, 5);
      param x in Real(0, 1);
      lhs = n*x;
      rhs = 0;
      sample n = 1.5, x = 0.5;
      sample n = 2, x = 3;
      sample n = 2;
      sample n = 2, x = 0.5, y = 1;
    }
    """)
    problems = check_samples(entry)
    assert any("n is outside Int" in p for p in problems)
    assert any("x is outside Real" in p for p in problems)
    assert any("does not bind x" in p for p in problems)
    assert any("binds undeclared y" in p for p in problems)


def test_reciprocity_entry_is_clean():
    with open(os.path.join(DEFAULT_REGISTRY_DIR, "theorems.idt"), encoding="utf-8") as f:
        entries = parse_identities(f.read())
    entry = next(e for e in entries if e.provenance == "S3.T25")
    report = validate_identity(entry)
    assert report.errors == []
    assert report.warnings == []


def test_require_valid_raises_with_all_problems(fixture_entries):
    entry = _entry(fixture_entries["constrained"])
    with pytest.raises(ValidationError) as info:
        require_valid(entry)
    assert info.value.problems
    assert "violates_constraint" in str(info.value)


def test_hint_arguments_are_checked():
    entry = _entry("""
    identity "hinted" {
      hint breakpoint(c);
      lhs = Integral(x, 0, 2, x);
      rhs = 2;
    }
    """)
    assert any("hint breakpoint" in e for e in validate_identity(entry).errors)
