"""Exact rational helpers: parsing, validation and display."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import InvalidModelError

#: Default cap on the number of assignments any dense enumeration may touch.
DEFAULT_MAX_STATES = 10**7

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` (``b > 0``) into a Fraction."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise InvalidModelError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InvalidModelError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings; floats are refused."""
    if isinstance(value, bool):
        raise InvalidModelError(f"booleans are not probabilities: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise InvalidModelError(f"expected an exact rational, got {type(value).__name__} {value!r}")


def as_probability(value) -> Fraction:
    p = as_fraction(value)
    if p < 0 or p > 1:
        raise InvalidModelError(f"probability out of [0, 1]: {p}")
    return p


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_approx(value: Fraction) -> str:
    return f"{float(value):.6f}"


def format_exact(value: Fraction) -> str:
    """``"a/b (≈ d.dddddd)"``, the display form used by the CLI."""
    return f"{format_fraction(value)} (≈ {format_approx(value)})"
