#!/usr/bin/env python3
"""Functional equations checked at seeded random points."""

import mpmath
import numpy as np
import pytest

from gamma_functions import gamma, polygamma
from hypergeometric import hyp2f1
from zeta_functions import hurwitz_zeta, lerch_phi

from conftest import mp_complex

_rng = np.random.default_rng(7)


def _complex_points(count, re, im):
    return [complex(x, y) for x, y in zip(_rng.uniform(*re, count), _rng.uniform(*im, count))]


def _away_from_one(points):
    return [s for s in points if abs(s - 1) > 0.1]


HURWITZ_CASES = list(zip(
    _away_from_one(_complex_points(120, (-2.0, 4.0), (-3.0, 3.0)))[:100],
    _complex_points(100, (0.2, 3.0), (-1.0, 1.0)),
))
LERCH_CASES = [
    (0.8 * np.sqrt(r) * np.exp(1j * t), s, a)
    for r, t, s, a in zip(
        _rng.uniform(0.0, 1.0, 100),
        _rng.uniform(-np.pi, np.pi, 100),
        _complex_points(100, (0.5, 3.0), (-2.0, 2.0)),
        _complex_points(100, (0.3, 3.0), (-0.5, 0.5)),
    )
]
GAMMA_CASES = _complex_points(100, (-4.0, 6.0), (0.1, 3.0))
DIGAMMA_CASES = _complex_points(100, (-4.0, 6.0), (0.1, 3.0))
HYP2F1_CASES = [
    (float(a), float(b), float(c), z)
    for a, b, c, z in zip(
        _rng.uniform(-1.5, 2.5, 60),
        _rng.uniform(-1.5, 2.5, 60),
        _rng.uniform(0.5, 3.5, 60),
        _complex_points(60, (-0.5, 0.5), (-0.5, 0.5)),
    )
]


@pytest.mark.parametrize("s, a", HURWITZ_CASES)
def test_hurwitz_shift(s, a):
    lhs = hurwitz_zeta(s, a).value - hurwitz_zeta(s, a + 1).value
    np.testing.assert_allclose(lhs, a ** -s, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("z, s, a", LERCH_CASES)
def test_lerch_shift(z, s, a):
    lhs = lerch_phi(z, s, a).value - z * lerch_phi(z, s, a + 1).value
    scale = abs(lerch_phi(z, s, a).value)
    np.testing.assert_allclose(lhs, a ** -s, rtol=1e-9, atol=1e-12 * scale)


@pytest.mark.parametrize("z", GAMMA_CASES)
def test_gamma_recurrence(z):
    np.testing.assert_allclose(gamma(z + 1).value, z * gamma(z).value, rtol=1e-12)


@pytest.mark.parametrize("z", DIGAMMA_CASES)
def test_digamma_recurrence(z):
    lhs = polygamma(0, z + 1).value - polygamma(0, z).value
    np.testing.assert_allclose(lhs, 1 / z, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("a, b, c, z", HYP2F1_CASES)
def test_hyp2f1_against_oracle(a, b, c, z):
    np.testing.assert_allclose(hyp2f1(a, b, c, z).value, mp_complex(mpmath.hyp2f1(a, b, c, z)), rtol=1e-10, atol=1e-13)
