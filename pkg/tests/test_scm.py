import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob import Atom, Dag, Scm, Signature, World, basic_cf, complex_cf, induced_model, joint, solve, solve_under
from cfprob.errors import InvalidModelError, ModelTooLargeError, UndefinedConditionalError
from cfprob.potential import build_gh_scm
from cfprob.randmodels import random_atoms, random_evidence, random_model
from cfprob.scm import event_probability, interventional
from cfprob.selfcheck import brute_complex, brute_many


def xor_scm() -> Scm:
    sig = Signature(("U1", "U2"), ("X", "Y"), {"U1": ("0", "1"), "U2": ("0", "1"), "X": ("0", "1"), "Y": ("0", "1")})
    dag = Dag.from_edges(sig.variables, [("U1", "X"), ("X", "Y"), ("U2", "Y")])
    return Scm.from_tables(sig, dag, {
        "X": {("0",): "0", ("1",): "1"},
        "Y": {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"},
    }, {"U1": {"0": Fraction(1, 3), "1": Fraction(2, 3)}, "U2": {"0": Fraction(3, 4), "1": Fraction(1, 4)}})


def test_from_tables_checks():
    scm = xor_scm()
    with pytest.raises(InvalidModelError, match="cover"):
        Scm.from_tables(scm.signature, scm.dag, {"X": {("0",): "0"}, "Y": {}}, scm.priors)
    with pytest.raises(InvalidModelError, match="out-of-range"):
        Scm.from_tables(scm.signature, scm.dag, {"X": {("0",): "0", ("1",): "2"},
                                                 "Y": {k: "0" for k in [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]}},
                        scm.priors)


def test_solve_and_mutilate():
    scm = xor_scm()
    assert solve(scm, {"U1": "1", "U2": "1"}) == {"X": "1", "Y": "0"}
    assert solve_under(scm, {"U1": "1", "U2": "1"}, {"X": "0"}) == {"X": "0", "Y": "1"}
    with pytest.raises(InvalidModelError):
        solve(scm, {"U1": "1"})


def test_basic_cf_is_extremal():
    scm = xor_scm()
    u = {"U1": "1", "U2": "0"}
    w = World(u, solve(scm, u))
    assert basic_cf(scm, {"Y": "0"}, {"X": "0"}, w) == 1
    assert basic_cf(scm, {"Y": "1"}, {"X": "0"}, w) == 0


def test_induced_model_tables():
    m = induced_model(xor_scm())
    assert m.cpd("Y", "1", ("0", "1")) == 1
    assert m.is_deterministic()
    assert joint(m).prob({"Y": "1"}) == Fraction(1, 3) * Fraction(1, 4) + Fraction(2, 3) * Fraction(3, 4)


def test_interventional_marginal():
    assert interventional(xor_scm(), {"X": "1"}, ["Y"]) == {("0",): Fraction(1, 4), ("1",): Fraction(3, 4)}


def test_twin_query_by_hand():
    scm = xor_scm()
    # P(Y_{X=0}=1, Y_{X=1}=1) is zero: XOR flips Y when X flips.
    atoms = [Atom.of({"Y": "1"}, {"X": "0"}), Atom.of({"Y": "1"}, {"X": "1"})]
    assert complex_cf(scm, atoms) == 0
    # X=1, Y=0 forces U2=1, and then X=0 gives Y=1.
    assert complex_cf(scm, [Atom.of({"Y": "1"}, {"X": "0"})], {"X": "1", "Y": "0"}) == 1


def test_contradictions_are_zero_and_zero_given_raises():
    scm = xor_scm()
    assert complex_cf(scm, [Atom((("Y", "0"), ("Y", "1")))]) == 0
    assert complex_cf(scm, [Atom.of({"X": "1"}, {"X": "0"})]) == 0
    with pytest.raises(UndefinedConditionalError):
        complex_cf(scm, [Atom.of({"Y": "1"})], {"U1": "0", "X": "1"})


def test_state_cap():
    with pytest.raises(ModelTooLargeError):
        event_probability(xor_scm(), [Atom.of({"Y": "1"}, {"X": "0"})], {"U1": "0", "U2": "0"}, max_states=0)


def test_brute_many_matches_single_calls():
    scm = xor_scm()
    qs = [([Atom.of({"Y": "1"}, {"X": "0"})], None), ([Atom.of({"Y": "0"})], {"X": "1"})]
    assert brute_many(scm, qs) == [brute_complex(scm, *q) for q in qs]


@given(st.integers(0, 10**6))
def test_lazy_engine_equals_exhaustive(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3, max_values=2)
    scm = build_gh_scm(m)
    atoms = random_atoms(rng, m)
    given_ = random_evidence(rng, m) if rng.random() < 0.5 else None
    assert complex_cf(scm, atoms, given_) == brute_complex(scm, atoms, given_)


@given(st.integers(0, 10**6))
def test_exogenous_evidence(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3, max_values=2)
    scm = build_gh_scm(m)
    u = rng.choice(m.signature.exogenous)
    given_ = {u: rng.choice(m.signature.ranges[u])}
    atoms = random_atoms(rng, m)
    assert complex_cf(scm, atoms, given_) == brute_complex(scm, atoms, given_)
