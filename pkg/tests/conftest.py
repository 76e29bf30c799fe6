import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import HealthCheck, settings

from cfprob import CausalModel, Dag, Signature

settings.register_profile("cfprob", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("cfprob")


def chain_model() -> CausalModel:
    """U -> A -> B with a three-valued B and one zero entry."""
    sig = Signature(("U",), ("A", "B"), {"U": ("0", "1"), "A": ("0", "1"), "B": ("x", "y", "z")})
    dag = Dag.from_edges(sig.variables, [("U", "A"), ("A", "B")])
    return CausalModel(sig, dag, {"U": {"0": Fraction(1, 4), "1": Fraction(3, 4)}}, {
        "A": {("0",): {"0": Fraction(2, 3), "1": Fraction(1, 3)}, ("1",): {"0": Fraction(1, 5), "1": Fraction(4, 5)}},
        "B": {("0",): {"x": Fraction(1, 2), "y": Fraction(1, 2), "z": 0},
              ("1",): {"x": Fraction(1, 6), "y": Fraction(1, 3), "z": Fraction(1, 2)}},
    })


def brute_joint(model: CausalModel) -> dict[tuple[str, ...], Fraction]:
    """Dense product of every factor, straight from the definition."""
    sig = model.signature
    out = {}
    for values in product(*(sig.ranges[v] for v in sig.variables)):
        a = dict(zip(sig.variables, values))
        w = Fraction(1)
        for v in sig.variables:
            w *= model.factor(v, a)
        out[values] = w
    return out


@pytest.fixture
def chain():
    return chain_model()


@pytest.fixture
def rng():
    return random.Random(2024)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
