#!/usr/bin/env python3

import math

import numpy as np
import pytest

from acceleration import euler_transform, levin_u, richardson, wynn_epsilon


def alternating_harmonic_partial_sums(count):
    n = np.arange(1, count + 1)
    return np.cumsum((-1.0) ** (n + 1) / n)


def test_wynn_epsilon_alternating_harmonic():
    estimate, err = wynn_epsilon(alternating_harmonic_partial_sums(20))
    assert estimate == pytest.approx(math.log(2), abs=1e-10)
    assert err < 1e-8


def test_wynn_epsilon_geometric_is_exact():
    partial = np.cumsum(0.5 ** np.arange(8))
    estimate, _ = wynn_epsilon(partial)
    assert estimate == pytest.approx(2.0, rel=1e-12)


def test_wynn_epsilon_short_input():
    assert wynn_epsilon([3.0]) == (3.0, math.inf)
    estimate, err = wynn_epsilon([1.0, 1.5])
    assert estimate == 1.5 and err == 0.5


def test_levin_u_logarithmic_convergence():
    terms = 1.0 / np.arange(1, 21) ** 2
    estimate, err = levin_u(terms)
    assert estimate == pytest.approx(math.pi ** 2 / 6, rel=1e-8)
    assert err < 1e-6


def test_levin_u_falls_back_on_zero_terms():
    estimate, err = levin_u([1.0, 0.0, 0.5])
    assert estimate == 1.5
    assert err == 0.5


def test_euler_transform_alternating():
    estimate, err = euler_transform(alternating_harmonic_partial_sums(30))
    assert estimate == pytest.approx(math.log(2), abs=1e-8)
    assert err < 1e-6
    assert euler_transform([2.0]) == (2.0, math.inf)


def test_richardson_trapezoid():
    estimates = []
    for level in range(6):
        x = np.linspace(0.0, 1.0, 2 ** level + 1)
        y = np.exp(x)
        h = 1.0 / 2 ** level
        estimates.append(h * (y.sum() - 0.5 * (y[0] + y[-1])))
    estimate, err = richardson(estimates, ratio=4.0)
    assert estimate == pytest.approx(math.e - 1, abs=1e-12)
    assert err < 1e-9


@pytest.mark.parametrize("transform", [wynn_epsilon, levin_u, euler_transform, richardson])
def test_empty_input_rejected(transform):
    with pytest.raises(ValueError):
        transform([])
