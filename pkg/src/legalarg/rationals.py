"""Exact rational helpers shared across the package.

Every number that enters the engine is converted to `fractions.Fraction`
once, at the boundary.  Floats are rejected because they silently lose
exactness; decimal strings like "0.7" are parsed as exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RatLike = Union[Fraction, int, str]


def as_rat(value: RatLike) -> Fraction:
    """Convert an int, Fraction or string ("0.7", "7/10", "-1") to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(
        f"expected int, Fraction or string for an exact rational, got {type(value).__name__}"
    )


def fmt_exact(x: Fraction) -> str:
    """Render a rational as "p" or "p/q"."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_display(x: Fraction) -> str:
    """Two-digit decimal rendering with trailing zeros trimmed.

    Rounds half away from zero: 1/3 -> "0.33", 8/9 -> "0.89", 7/10 -> "0.7",
    1 -> "1".  Used for human-facing tables; stored values stay exact.
    """
    sign = "-" if x < 0 else ""
    y = -x if x < 0 else x
    scaled = y * 100
    hundredths = scaled.numerator // scaled.denominator
    if (scaled - hundredths) * 2 >= 1:
        hundredths += 1
    whole, cents = divmod(hundredths, 100)
    if cents == 0:
        return f"{sign}{whole}"
    text = f"{whole}.{cents:02d}".rstrip("0")
    return sign + text


def fmt_interval(lower: Fraction, upper: Fraction, exact: bool = False) -> str:
    """Render an interval, collapsing degenerate ones to a single value."""
    fmt = fmt_exact if exact else fmt_display
    if lower == upper:
        return fmt(lower)
    return f"[{fmt(lower)}, {fmt(upper)}]"
