"""Small shared numeric helpers."""

from __future__ import annotations

import math
from fractions import Fraction


def exact_fraction(value: float) -> Fraction:
    """The decimal a float parameter stands for (0.35 -> 7/20), so floor-based
    quotas follow the stated fraction rather than its binary approximation."""
    return Fraction(value).limit_denominator(10**9)


def floor_scaled(n: int, factor: float) -> int:
    """floor(n * factor) with factor treated as its decimal value."""
    return int(exact_fraction(factor) * n)


def iround(x: float) -> int:
    """Round half away from zero (symmetric, unlike banker's rounding)."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))
