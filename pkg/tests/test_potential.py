import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob import Atom
from cfprob.catalog import example_51, roulette
from cfprob.errors import ModelTooLargeError, UndefinedConditionalError
from cfprob.potential import (build_gh_scm, build_po_scm, n_basic, n_basic_extended, n_complex,
                              n_conditional, po_exogenous_size)
from cfprob.randmodels import random_atoms, random_evidence, random_model
from cfprob.scm import complex_cf
from cfprob.selfcheck import brute_complex

from conftest import chain_model


def test_po_variables_and_priors():
    po = build_po_scm(example_51())
    assert set(po.variables) == {"X[U_X=0]", "X[U_X=1]", "Y[X=0]", "Y[X=1]"}
    assert po.name("Y", ("0",)) == "Y[X=0]"
    assert po.prior("Y", {"X": "1"})["1"] == Fraction(1, 3)
    assert po.scm.signature.exogenous[0] == "U_X"
    assert po_exogenous_size(po) == 2 ** 5


def test_po_cap():
    with pytest.raises(ModelTooLargeError):
        build_po_scm(chain_model(), max_variables=3)


def test_n_basic_keeps_unrealized_outcomes_uncertain():
    m = example_51()
    world = {"U_X": "1", "X": "1", "Y": "1"}
    assert n_basic(m, {"X": "0"}, {"Y": "0"}, world) == Fraction(1, 3)
    # The realized potential outcome is pinned down.
    assert n_basic(m, {"X": "1"}, {"Y": "1"}, world) == 1


def test_n_basic_extended_is_zero_or_one():
    po = build_po_scm(example_51())
    u = {"U_X": "1", "X[U_X=0]": "0", "X[U_X=1]": "1", "Y[X=0]": "0", "Y[X=1]": "1"}
    v = {"X": "1", "Y": "1"}
    assert n_basic_extended(po, {"X": "0"}, {"Y": "0"}, u, v) == 1
    assert n_basic_extended(po, {"X": "0"}, {"Y": "1"}, u, v) == 0


def test_zero_world_raises():
    m = chain_model()
    with pytest.raises(UndefinedConditionalError):
        n_basic(m, {"A": "1"}, {"B": "x"}, {"U": "0", "A": "0", "B": "z"})


def test_roulette_independence():
    m = roulette()
    # Y[Z=1] is independent of everything observed about Y[Z=0].
    assert n_conditional(m, {"Z": "1"}, {"Y": "1"}, {"Z": "0", "Y": "1"}) == Fraction(1, 7)


def test_pns_product_under_n():
    p, q = Fraction(1, 3), Fraction(2, 3)
    atoms = [Atom.of({"Y": "1"}, {"X": "1"}), Atom.of({"Y": "0"}, {"X": "0"})]
    assert n_complex(example_51(), atoms) == p * (1 - q)


@given(st.integers(0, 10**6))
def test_n_equals_gh(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3)
    atoms = random_atoms(rng, m)
    ev = random_evidence(rng, m) if rng.random() < 0.5 else None
    assert n_complex(m, atoms, ev) == complex_cf(build_gh_scm(m), atoms, ev)


@given(st.integers(0, 10**6))
def test_n_equals_exhaustive_po_enumeration(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3, max_values=2)
    po = build_po_scm(m)
    if po_exogenous_size(po) > 5000:
        return
    atoms = random_atoms(rng, m)
    ev = random_evidence(rng, m) if rng.random() < 0.5 else None
    assert n_complex(m, atoms, ev, po=po) == brute_complex(po.scm, atoms, ev)
