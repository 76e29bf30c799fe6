from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob.errors import InvalidModelError
from cfprob.exact import as_fraction, as_probability, format_exact, format_fraction, parse_rational


def test_parse_rational_forms():
    assert parse_rational("3") == 3
    assert parse_rational(" 2 / 6 ") == Fraction(1, 3)
    assert parse_rational("-1/2") == Fraction(-1, 2)


@pytest.mark.parametrize("text", ["0.5", "1/0", "a/b", "", "1//2"])
def test_parse_rational_rejects(text):
    with pytest.raises(InvalidModelError):
        parse_rational(text)


def test_floats_and_bools_refused():
    with pytest.raises(InvalidModelError):
        as_fraction(0.5)
    with pytest.raises(InvalidModelError):
        as_fraction(True)


def test_probability_range():
    assert as_probability("1/3") == Fraction(1, 3)
    with pytest.raises(InvalidModelError):
        as_probability("4/3")


def test_display():
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_exact(Fraction(1, 3)) == "1/3 (≈ 0.333333)"
    assert format_exact(Fraction(0)) == "0 (≈ 0.000000)"


@given(st.fractions())
def test_format_parse_roundtrip(x):
    assert parse_rational(format_fraction(x)) == x
