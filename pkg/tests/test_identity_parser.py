#!/usr/bin/env python3

import math

import pytest

from errors import ParseError
from expression import Var
from identity_parser import parse_identities


def test_full_block(parse_one):
    entry = parse_one("""
        identity "demo" {
          param a in Real(0.1, 10);
          param n in Int(1, 6);
          param z in Complex(-1, 1, -2, 2);
          constraint a*n = 2;
          hint alternating;
          hint breakpoint(1/2);
          lhs = Sum(p, 1, inf, (-1)^p*a^p/p^n);
          rhs = z;
          sample a = 2, n = 1, z = 0.5 + 0.2*I;
          sample a = 1, n = 2, z = a - 1;
          status verify;
          provenance "S4.3.E7";
          note "first";
          note "second";
        }
    """)
    assert entry.id == "demo"
    assert [p.name for p in entry.params] == ["a", "n", "z"]
    assert entry.params[2].bounds == (-1.0, 1.0, -2.0, 2.0)
    assert len(entry.constraints) == 1
    assert entry.has_hint("alternating")
    assert [h.name for h in entry.hints] == ["alternating", "breakpoint"]
    assert entry.samples[0]["z"] == pytest.approx(0.5 + 0.2j)
    # later sample values may use earlier ones
    assert entry.samples[1]["z"] == 0
    assert entry.rhs == Var("z")
    assert entry.provenance == "S4.3.E7"
    assert entry.note == "first second"
    assert entry.line == 2


def test_defaults_and_implicit_sample(parse_one):
    entry = parse_one("""
        identity "constant" {
          lhs = Gamma(1/2)^2;
          rhs = pi;
        }
    """)
    assert entry.expected_status == "verify"
    assert entry.samples == [{}]
    assert entry.note == ""


def test_sample_values_are_evaluated(parse_one):
    entry = parse_one("""
        identity "sample_math" {
          param alpha in Real(0.1, 10);
          param beta in Real(0.1, 10);
          lhs = alpha;
          rhs = beta;
          sample alpha = Sqrt(2), beta = pi/alpha;
        }
    """)
    point = entry.samples[0]
    assert point["alpha"] == pytest.approx(math.sqrt(2))
    assert point["beta"] == pytest.approx(math.pi / math.sqrt(2))


def test_multiple_blocks_in_order():
    text = """
    identity "first" { lhs = 1; rhs = 1; }
    identity "second" { lhs = 2; rhs = 2; }
    """
    assert [e.id for e in parse_identities(text)] == ["first", "second"]


@pytest.mark.parametrize("body, fragment", [
    ('lhs = 1;', "no rhs"),
    ('lhs = 1; rhs = 1; lhs = 2;', "Duplicate lhs"),
    ('param a in Real(0, 1); lhs = a; rhs = a;', "no sample"),
    ('param a in Real(0, 1); param a in Real(0, 1); lhs = a; rhs = a; sample a = 1;', "Duplicate parameter"),
    ('param a in Natural(0, 1); lhs = a; rhs = a; sample a = 1;', "Unknown domain"),
    ('param a in Real(0, 1, 2); lhs = a; rhs = a; sample a = 1;', "takes 2 bounds"),
    ('param a in Real(0, I); lhs = a; rhs = a; sample a = 1;', "not real"),
    ('hint fast; lhs = 1; rhs = 1;', "Unknown hint"),
    ('hint breakpoint; lhs = 1; rhs = 1;', "needs an argument"),
    ('status maybe; lhs = 1; rhs = 1;', "Unknown status"),
    ('lhs = 1; rhs = 1; sample a = 1, a = 2;', "twice"),
    ('lhs = 1; rhs = 1; sample a = 1/0;', "Cannot evaluate constant"),
    ('lhs = 1 rhs = 1;', "Expected"),
    ('foo = 1;', "Unexpected"),
])
def test_grammar_errors(body, fragment):
    with pytest.raises(ParseError) as info:
        parse_identities(f'identity "bad" {{ {body} }}', "bad.idt")
    assert fragment in str(info.value)
    assert info.value.filename == "bad.idt"


def test_empty_id_rejected():
    with pytest.raises(ParseError):
        parse_identities('identity "" { lhs = 1; rhs = 1; }')


def test_error_position():
    text = 'identity "x" {\n  lhs = 1;\n  rhs = 1 +;\n}'
    with pytest.raises(ParseError) as info:
        parse_identities(text)
    assert (info.value.line, info.value.column) == (3, 12)
