import re
from fractions import Fraction

import pytest

from cfprob.catalog import Check, Fixture, examples_catalog, format_value, report


@pytest.mark.parametrize("name", list(examples_catalog()))
def test_fixture_checks_pass(name):
    fx = examples_catalog()[name]
    results = fx.run()
    assert results
    bad = [(r.check.name, r.actual, r.error) for r in results if not r.passed]
    assert not bad


def test_checks_carry_provenance_and_quotes():
    for fx in examples_catalog().values():
        for c in fx.checks:
            assert c.provenance in {"PAPER", "DERIVED", "TRIVIAL"}
            assert c.citation
            # Citations quote phrases; they never point at numbered sections.
            assert not re.search(r"§|\bsection\b|\beq\.", c.citation, re.I)


def test_drift_is_reported():
    fx = Fixture("drift", "wrong on purpose", "none", lambda: None,
                 (Check("one", Fraction(1, 2), "TRIVIAL", "n/a", lambda: Fraction(1, 3)),
                  Check("boom", Fraction(1), "TRIVIAL", "n/a", lambda: 1 / 0)))
    lines, ok = report(fx)
    assert not ok
    assert "FAIL  one: expected 1/2, got 1/3" in lines[1]
    assert "ZeroDivisionError" in lines[2]


def test_format_value():
    assert format_value((Fraction(0), Fraction(39, 40))) == "(0, 39/40)"
    assert format_value(True) == "yes"
