#!/usr/bin/env python3

import csv
import math

import mpmath
import pytest

from figure_grid import GRID_HEADER, fig1, fig2, sample_grid, sample_point

from conftest import mp_complex

EULER_GAMMA = 0.5772156649015329


def fig1_oracle(a):
    a = mpmath.mpmathify(a)
    pi = mpmath.pi
    cube = pi ** 3 * a ** 3
    return (cube * mpmath.csc(pi * a) ** 2 - 1j * cube * mpmath.csch(pi * a) ** 2 - 2) / (8 * pi * a ** 4)


def test_digamma_figure():
    assert fig2(1).real == pytest.approx(1 - EULER_GAMMA, rel=1e-14)
    assert fig2(0.5 + 2j) == pytest.approx(mp_complex(mpmath.digamma(1.5 + 2j)), rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 0.3 + 0.4j, -1.7 + 0.2j])
def test_cosecant_figure(a):
    assert fig1(a) == pytest.approx(mp_complex(fig1_oracle(a)), rel=1e-11)


def test_poles_sample_as_nan():
    for figure, z in (("fig1", 1), ("fig1", 0), ("fig1", 2j), ("fig2", -1), ("fig2", -3)):
        value = sample_point(figure, z)
        assert math.isnan(value.real) and math.isnan(value.imag)


def test_sample_grid(tmp_path):
    path = tmp_path / "grids" / "fig2.csv"
    rows = sample_grid("fig2", (-2.0, 2.0, -1.0, 1.0), 5, str(path))
    assert rows == 25
    with open(path, newline="", encoding="utf-8") as f:
        data = list(csv.reader(f))
    assert data[0] == GRID_HEADER
    assert len(data) == 26
    # first row is the corner (re_min, im_min); re varies fastest
    assert float(data[1][0]) == -2.0 and float(data[1][1]) == -1.0
    assert float(data[2][0]) == -1.0
    # z = -1 + 0i is a pole of psi(z + 1)
    centre_row = next(row for row in data[1:] if float(row[0]) == -1.0 and float(row[1]) == 0.0)
    assert centre_row[2] == "nan"


@pytest.mark.parametrize("figure, region, res", [
    ("fig1", (0.0, 1.0, 0.0, 1.0), 1),
    ("fig1", (0.0, 1.0, 0.0, 1.0), 4096),
    ("fig1", (1.0, 1.0, 0.0, 1.0), 8),
    ("fig3", (0.0, 1.0, 0.0, 1.0), 8),
])
def test_sample_grid_rejects(figure, region, res, tmp_path):
    with pytest.raises(ValueError):
        sample_grid(figure, region, res, str(tmp_path / "grid.csv"))
