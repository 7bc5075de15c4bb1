#!/usr/bin/env python3

import math


SECTION_TITLES = {
    "S3": "Theorems",
    "S4.1": "Integrals",
    "S4.2": "Products",
    "S4.3": "Series",
}


def section_of(provenance: str) -> str:
    """Section part of a provenance locator ("S4.1.E2" -> "S4.1", "S3.T7" -> "S3")."""
    parts = provenance.split(".")
    if len(parts) >= 3:
        return ".".join(parts[:2])
    return parts[0]


def section_title(provenance: str) -> str:
    """Convert a provenance locator to its report section title."""
    return SECTION_TITLES.get(section_of(provenance), "Other")


def provenance_sort_key(provenance: str) -> tuple:
    """
    Sort key that orders locators numerically within each section.

    Args:
        provenance: Locator such as "S3.T12" or "S4.2.E3"

    Returns:
        Tuple comparing "S4.1.E10" after "S4.1.E9"

    Example:
        sorted(["S3.T10", "S3.T9"], key=provenance_sort_key) -> ["S3.T9", "S3.T10"]
    """
    key = []
    for part in provenance.split("."):
        digits = part.lstrip("STE")
        prefix = part[:len(part) - len(digits)]
        key.append((prefix, int(digits) if digits.isdigit() else math.inf, part))
    return tuple(key)


def format_real(x: float, digits: int = 12) -> str:
    """Format a real with `digits` significant digits; non-finite values become "nan"/"inf"."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{digits}g}"


def format_complex(z: complex, digits: int = 12) -> str:
    """
    Format a complex number compactly, dropping a zero imaginary part.

    Args:
        z: Value to format
        digits: Significant digits per component

    Returns:
        Formatted string (e.g., "0.405800442", "0.5+0.2i", "-1.5-2i")
    """
    z = complex(z)
    if z.imag == 0:
        return format_real(z.real, digits)
    if z.real == 0:
        return f"{format_real(z.imag, digits)}i"
    sign = "-" if z.imag < 0 else "+"
    return f"{format_real(z.real, digits)}{sign}{format_real(abs(z.imag), digits)}i"


def format_bindings(point: dict[str, complex], digits: int = 8) -> str:
    """Format a parameter binding as "a=1, b=3.14159265"; the empty binding is "-"."""
    if not point:
        return "-"
    return ", ".join(f"{name}={format_complex(value, digits)}" for name, value in point.items())


def format_duration(ms: float) -> str:
    """
    Format a wall time with an appropriate unit (ms, s, min).

    Args:
        ms: Duration in milliseconds

    Returns:
        Formatted string (e.g., "850 ms", "2.4 s", "3.1 min")
    """
    if ms < 1000:
        return f"{ms:.0f} ms"
    if ms < 60_000:
        return f"{ms / 1000:.1f} s"
    return f"{ms / 60_000:.1f} min"
