#!/usr/bin/env python3
"""Static checks on parsed expressions and identities."""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from errors import NumericsError, ValidationError
from evaluator import apply_binary, evaluate_constant
from expression import (CONSTANTS, BinOp, Call, Const, CothMinusOne, LogCoshRatio, Neg, Node, Number, Quantifier,
                        free_variables, pretty, walk)
from helpers import format_bindings
from models import Identity, ParamDecl

logger = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-14


@dataclass
class ValidationReport:
    """Problems found in one expression or identity; `folded` is the constant-folded tree."""

    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    folded: Optional[Node] = None

    @property
    def ok(self) -> bool:
        return not self.errors

    def merge(self, other: "ValidationReport", prefix: str) -> None:
        self.errors.extend(f"{prefix}: {message}" for message in other.errors)
        self.warnings.extend(f"{prefix}: {message}" for message in other.warnings)


def fold_constants(node: Node) -> Node:
    """
    Replace negations and binary operations on numeric literals by their value.

    Named constants and function calls are left alone, and so is any division
    by a literal zero.
    """
    if isinstance(node, Neg):
        operand = fold_constants(node.operand)
        if isinstance(operand, Number):
            return Number(-operand.value, pos=node.pos)
        return Neg(operand, pos=node.pos)
    if isinstance(node, BinOp):
        left, right = fold_constants(node.left), fold_constants(node.right)
        if isinstance(left, Number) and isinstance(right, Number):
            try:
                value = apply_binary(node.op, left.value, right.value)
            except NumericsError:
                value = None
            if value is not None and math.isfinite(abs(value)):
                return Number(value, pos=node.pos)
        return BinOp(node.op, left, right, pos=node.pos)
    if isinstance(node, Call):
        return Call(node.name, tuple(fold_constants(arg) for arg in node.args), pos=node.pos)
    if isinstance(node, CothMinusOne):
        return CothMinusOne(fold_constants(node.arg), pos=node.pos)
    if isinstance(node, LogCoshRatio):
        return LogCoshRatio(fold_constants(node.upper), fold_constants(node.lower), fold_constants(node.arg), pos=node.pos)
    if isinstance(node, Quantifier):
        return replace(node, lo=fold_constants(node.lo), hi=fold_constants(node.hi), body=fold_constants(node.body))
    return node


def _where(node: Node) -> str:
    return f"line {node.pos[0]}, column {node.pos[1]}"


def _is_infinity(node: Node) -> bool:
    if isinstance(node, Neg):
        node = node.operand
    return isinstance(node, Const) and node.name == "inf"


def _check_infinity(node: Node, report: ValidationReport) -> None:
    """inf may appear only as a whole quantifier bound."""
    if isinstance(node, Const) and node.name == "inf":
        report.errors.append(f"inf used outside a quantifier bound at {_where(node)}")
        return
    if isinstance(node, Quantifier):
        for bound in (node.lo, node.hi):
            if not _is_infinity(bound):
                _check_infinity(bound, report)
        if isinstance(node.lo, Const) and node.lo.name == "inf":
            report.errors.append(f"{node.kind} lower bound cannot be +inf at {_where(node)}")
        if isinstance(node.hi, Neg) and _is_infinity(node.hi):
            report.errors.append(f"{node.kind} upper bound cannot be -inf at {_where(node)}")
        _check_infinity(node.body, report)
        return
    for child in node.children():
        _check_infinity(child, report)


def _check_scopes(node: Node, outer: frozenset[str], params: frozenset[str], report: ValidationReport) -> None:
    if not isinstance(node, Quantifier):
        for child in node.children():
            _check_scopes(child, outer, params, report)
        return
    if node.var in outer:
        report.warnings.append(f"{node.kind} variable {node.var!r} shadows an enclosing variable at {_where(node)}")
    elif node.var in params:
        report.warnings.append(f"{node.kind} variable {node.var!r} shadows a parameter at {_where(node)}")
    _check_scopes(node.lo, outer, params, report)
    _check_scopes(node.hi, outer, params, report)
    _check_scopes(node.body, outer | {node.var}, params, report)


def validate(ast: Node, params: Iterable[str]) -> ValidationReport:
    """
    Check an expression against the declared parameter names.

    Args:
        ast: Parsed expression
        params: Names the expression may reference freely

    Returns:
        Report with unbound-variable errors, warnings for divisions by a
        literal zero and shadowed names, and the constant-folded tree
    """
    names = frozenset(params)
    report = ValidationReport()
    unbound = sorted(free_variables(ast) - names)
    if unbound:
        report.errors.append(f"unbound variable{'s' if len(unbound) > 1 else ''}: {', '.join(unbound)}")
    reserved = sorted(names & set(CONSTANTS))
    if reserved:
        report.errors.append(f"parameter names shadow constants: {', '.join(reserved)}")
    _check_scopes(ast, frozenset(), names, report)
    _check_infinity(ast, report)
    for node in walk(ast):
        if isinstance(node, BinOp) and node.op == "/":
            denominator = fold_constants(node.right)
            if isinstance(denominator, Number) and denominator.value == 0:
                report.warnings.append(f"division by a literal zero at {_where(node)}")
    report.folded = fold_constants(ast)
    return report


def _in_domain(param: ParamDecl, value: complex) -> bool:
    value = complex(value)
    tol = CONSTRAINT_TOL * max(1.0, abs(value))
    if param.domain == "Complex":
        re_lo, re_hi, im_lo, im_hi = param.bounds
        return re_lo - tol <= value.real <= re_hi + tol and im_lo - tol <= value.imag <= im_hi + tol
    if abs(value.imag) > tol:
        return False
    lo, hi = param.bounds
    if not lo - tol <= value.real <= hi + tol:
        return False
    if param.domain == "Int":
        return abs(value.real - round(value.real)) <= tol
    return True


def check_samples(identity: Identity) -> list[str]:
    """Problems with the sample points: missing or extra bindings, domain and constraint violations."""
    problems = []
    declared = {param.name: param for param in identity.params}
    for index, point in enumerate(identity.samples, start=1):
        where = f"sample {index} ({format_bindings(point)})"
        missing = sorted(set(declared) - set(point))
        extra = sorted(set(point) - set(declared))
        if missing:
            problems.append(f"{where} does not bind {', '.join(missing)}")
        if extra:
            problems.append(f"{where} binds undeclared {', '.join(extra)}")
        if missing:
            continue
        for name, param in declared.items():
            if not _in_domain(param, point[name]):
                problems.append(f"{where}: {name} is outside {param.domain}{param.bounds}")
        for left, right in identity.constraints:
            text = f"{pretty(left)} = {pretty(right)}"
            try:
                l_value = evaluate_constant(left, point)
                r_value = evaluate_constant(right, point)
            except NumericsError as e:
                problems.append(f"{where}: constraint {text} cannot be evaluated: {e}")
                continue
            if abs(l_value - r_value) > CONSTRAINT_TOL * max(1.0, abs(r_value)):
                problems.append(f"{where} violates constraint {text} ({l_value} != {r_value})")
    return problems


def validate_identity(identity: Identity) -> ValidationReport:
    """Validate both sides, constraints, hint arguments and every sample point."""
    params = [param.name for param in identity.params]
    report = ValidationReport()
    for side in ("lhs", "rhs"):
        report.merge(validate(getattr(identity, side), params), side)
    for left, right in identity.constraints:
        report.merge(validate(left, params), "constraint")
        report.merge(validate(right, params), "constraint")
    for hint in identity.hints:
        if hint.arg is not None:
            report.merge(validate(hint.arg, params), f"hint {hint.name}")
    report.errors.extend(check_samples(identity))
    if identity.expected_status == "verify" and not identity.samples:
        report.errors.append("a verify entry needs at least one sample point")
    return report


def require_valid(identity: Identity) -> ValidationReport:
    """
    Validate an identity and raise if anything is wrong.

    Raises:
        ValidationError: Listing every problem, positioned at the identity block
    """
    report = validate_identity(identity)
    for warning in report.warnings:
        logger.warning(f"{identity.source}:{identity.line}: {identity.id}: {warning}")
    if report.errors:
        message = f"identity {identity.id!r} is invalid: {'; '.join(report.errors)}"
        logger.error(message)
        raise ValidationError(message, report.errors, identity.line, 1, identity.source or None)
    return report
