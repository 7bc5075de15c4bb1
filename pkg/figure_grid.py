#!/usr/bin/env python3
"""Complex-plane sample grids of the plotted functions, written as CSV."""

import csv
import logging
import math
import os
from typing import Callable

import numpy as np

from elementary import csc, csch
from errors import NumericsError
from gamma_functions import polygamma
from helpers import format_real
from numerics import PI

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 2
MAX_RESOLUTION = 2048
GRID_HEADER = ["re", "im", "f_re", "f_im", "f_abs"]


def fig1(a: complex) -> complex:
    """(pi^3 a^3 csc^2(pi a) - i pi^3 a^3 csch^2(pi a) - 2) / (8 pi a^4)."""
    a = complex(a)
    if a == 0:
        return complex(math.nan, math.nan)
    cube = PI ** 3 * a ** 3
    numerator = cube * csc(PI * a) ** 2 - 1j * cube * csch(PI * a) ** 2 - 2.0
    return numerator / (8.0 * PI * a ** 4)


def fig2(z: complex) -> complex:
    """Digamma psi(z + 1)."""
    return polygamma(0, complex(z) + 1.0).value


FIGURES: dict[str, Callable[[complex], complex]] = {"fig1": fig1, "fig2": fig2}


def sample_point(figure_id: str, z: complex) -> complex:
    """Value at one point; poles and overflow give nan + nan i."""
    try:
        value = complex(FIGURES[figure_id](z))
    except (NumericsError, ZeroDivisionError, OverflowError):
        return complex(math.nan, math.nan)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        return complex(math.nan, math.nan)
    return value


def sample_grid(
    figure_id: str,
    region: tuple[float, float, float, float],
    resolution: int,
    path: str,
) -> int:
    """
    Write f over a resolution x resolution grid of the rectangle to CSV.

    Args:
        figure_id: "fig1" or "fig2"
        region: (re_min, re_max, im_min, im_max)
        resolution: Points per axis, 2..2048
        path: Output CSV path

    Returns:
        Number of rows written

    Raises:
        ValueError: Unknown figure, bad resolution or an empty region
        OSError: If the file cannot be written
    """
    if figure_id not in FIGURES:
        raise ValueError(f"Unknown figure {figure_id!r}; expected one of {', '.join(FIGURES)}")
    if not MIN_RESOLUTION <= resolution <= MAX_RESOLUTION:
        raise ValueError(f"Resolution must be in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {resolution}")
    re_min, re_max, im_min, im_max = (float(v) for v in region)
    if not (re_min < re_max and im_min <= im_max):
        raise ValueError(f"Empty region {region}")

    re_axis = np.linspace(re_min, re_max, resolution)
    im_axis = np.linspace(im_min, im_max, resolution)
    rows = 0
    poles = 0
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(GRID_HEADER)
            for im in im_axis:
                for re in re_axis:
                    value = sample_point(figure_id, complex(float(re), float(im)))
                    if math.isnan(value.real):
                        poles += 1
                    w.writerow([
                        repr(float(re)), repr(float(im)),
                        format_real(value.real, 17), format_real(value.imag, 17), format_real(abs(value), 17),
                    ])
                    rows += 1
    except OSError as e:
        logger.error(f"Failed to write {figure_id} grid to {path}: {e}")
        raise
    logger.info(f"{figure_id} grid of {rows} points ({poles} non-finite) saved to: {path}")
    return rows
