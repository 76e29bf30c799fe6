import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob.abstraction import Coarsening, coarsen
from cfprob.catalog import example_41, example_41_coarsening, example_41_low, example_42, example_51
from cfprob.errors import InvalidModelError
from cfprob.model import Dag, joint
from cfprob.randmodels import random_model


def test_example_41_pushforward():
    s = example_41()
    assert s.signature.exogenous == ("Z",)
    assert s.conditional("Y", "2", {"Z": "0"}) == Fraction(1, 2)
    assert s.conditional("Y", "1", {"Z": "1"}) == 1
    assert not s.deterministic["Y"]
    assert s.markov.holds
    m = s.promote()
    assert m.priors["Z"]["1"] == Fraction(1, 3)


def test_example_42_violation():
    s = example_42()
    assert not s.markov.holds
    v = s.markov.find("Y", {"Z": "0"}, {"A": "10"}, "10")
    assert (v.complement_conditional, v.complement_marginal) == (0, Fraction(39, 40))
    with pytest.raises(InvalidModelError, match="Markov"):
        s.promote()


def test_coarsening_validation():
    low = example_41_low()
    sig = low.signature
    with pytest.raises(InvalidModelError, match="surjective"):
        Coarsening.build(sig, {"Z": (("U",), ("0", "1", "2"), lambda u: "1" if u == "1" else "0")}).validate(sig)
    with pytest.raises(InvalidModelError, match="exogenous"):
        Coarsening.build(sig, {"Z": (("Y",), ("0",), lambda y: "0")}).validate(sig)
    with pytest.raises(InvalidModelError, match="range"):
        Coarsening.build(sig, {"Z": (("U",), ("0",), lambda u: u)}).validate(sig)


def test_zero_mass_value_rejected():
    low = example_41_low(weights=(Fraction(1, 2), Fraction(1, 2), Fraction(0)))
    tau, dag = example_41_coarsening(low, "3")
    with pytest.raises(InvalidModelError, match="probability zero"):
        coarsen(low, tau, dag)


def test_candidate_dag_must_fit():
    low = example_41_low()
    tau, _ = example_41_coarsening(low)
    with pytest.raises(InvalidModelError):
        coarsen(low, tau, Dag.from_edges(("Z", "Y"), []))


def test_identity_coarsening_keeps_model():
    m = example_51()
    s = coarsen(m, Coarsening.identity(m.signature), m.dag)
    assert s.markov.holds
    assert s.promote() == m
    assert s.joint == joint(m)


@given(st.integers(0, 10**6))
def test_identity_coarsening_on_random_models(seed):
    m = random_model(random.Random(seed), max_endogenous=3, zero_rate=0)
    s = coarsen(m, Coarsening.identity(m.signature), m.dag)
    assert s.markov.holds
    assert s.promote().cpds == m.cpds
