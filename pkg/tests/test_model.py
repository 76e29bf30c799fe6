import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob import CausalModel, Dag, Distribution, Signature, check_markov, intervene, joint
from cfprob.errors import InvalidModelError, ModelTooLargeError
from cfprob.model import condition, marginal, markov_factorization
from cfprob.randmodels import random_model

from conftest import brute_joint


def test_signature_validation():
    with pytest.raises(InvalidModelError):
        Signature(("U",), ("U",), {"U": ("0",)})
    with pytest.raises(InvalidModelError):
        Signature(("U",), ("X",), {"U": ("0",)})
    with pytest.raises(InvalidModelError):
        Signature(("U",), ("X",), {"U": ("0", "0"), "X": ("0",)})
    with pytest.raises(InvalidModelError):
        Signature(("U",), ("X",), {"U": ("0",), "X": ()})


def test_dag_checks():
    with pytest.raises(InvalidModelError, match="cycle"):
        Dag.from_edges(("A", "B"), [("A", "B"), ("B", "A")])
    sig = Signature(("U",), ("X",), {"U": ("0",), "X": ("0",)})
    with pytest.raises(InvalidModelError, match="root"):
        Dag.from_edges(sig.variables, [("X", "U")]).check_compatible(sig)
    with pytest.raises(InvalidModelError, match="parent"):
        Dag.from_edges(sig.variables, []).check_compatible(sig)


def test_dag_order_is_declaration_stable():
    d = Dag.from_edges(("U", "C", "B", "A"), [("U", "A"), ("U", "B"), ("U", "C"), ("B", "A")])
    assert d.topological_order == ("U", "C", "B", "A")
    assert d.parents("A") == ("U", "B")
    assert d.descendants("U") == {"A", "B", "C"}


def test_model_table_errors(chain):
    bad = {x: dict(rows) for x, rows in chain.cpds.items()}
    bad["A"] = {("0",): {"0": Fraction(1, 2), "1": Fraction(1, 3)}, ("1",): {"1": 1}}
    with pytest.raises(InvalidModelError, match="sums"):
        CausalModel(chain.signature, chain.dag, chain.priors, bad)
    bad["A"] = {("0",): {"0": 1}}
    with pytest.raises(InvalidModelError, match="no row"):
        CausalModel(chain.signature, chain.dag, chain.priors, bad)


def test_joint_matches_dense_product(chain):
    j = joint(chain)
    dense = brute_joint(chain)
    assert j.dense() == dense
    # Sparse storage keeps only positive masses.
    assert all(m > 0 for m in j.masses.values())
    assert len(j.masses) == sum(1 for m in dense.values() if m)


def test_intervene_truncated_factorization(chain):
    d = intervene(chain, {"A": "1"})
    # P_do(A=1)(B=z) = P(B=z | A=1) = 1/2 regardless of U.
    assert d.prob({"B": "z"}) == Fraction(1, 2)
    assert d.prob({"A": "0"}) == 0
    assert d.prob({"U": "1"}) == Fraction(3, 4)


def test_distribution_rejects_bad_mass():
    with pytest.raises(InvalidModelError):
        Distribution(("X",), {"X": ("0", "1")}, {("0",): Fraction(1, 2)})
    with pytest.raises(InvalidModelError):
        Distribution(("X",), {"X": ("0", "1")}, {("2",): 1})


def test_marginal_and_condition(chain):
    j = joint(chain)
    m = marginal(j, ("A",))
    pa1 = Fraction(1, 4) * Fraction(1, 3) + Fraction(3, 4) * Fraction(4, 5)
    assert m.mass(("1",)) == pa1
    c = condition(j, {"A": "1"})
    assert c.prob({"U": "1"}) == Fraction(3, 4) * Fraction(4, 5) / pa1


def test_space_cap(chain):
    with pytest.raises(ModelTooLargeError):
        joint(chain, max_states=5)


def test_markov_holds_on_models():
    rng = random.Random(5)
    for _ in range(10):
        m = random_model(rng, max_endogenous=3)
        rep = check_markov(m.signature, m.dag, joint(m))
        assert rep.holds and not rep.violations


def test_markov_detects_dependence():
    sig = Signature(("U",), ("X", "Y"), {"U": ("0", "1"), "X": ("0", "1"), "Y": ("0", "1")})
    dag = Dag.from_edges(sig.variables, [("U", "X"), ("U", "Y")])
    # Y always equals X, yet the graph has no edge between them.
    masses = {("0", "0", "0"): Fraction(1, 4), ("0", "1", "1"): Fraction(1, 4),
              ("1", "0", "0"): Fraction(1, 4), ("1", "1", "1"): Fraction(1, 4)}
    d = Distribution(sig.variables, sig.ranges, masses)
    rep = check_markov(sig, dag, d)
    assert not rep.holds
    v = rep.find("Y", {"U": "0"}, {"X": "0"}, "0")
    assert (v.conditional, v.marginal) == (1, Fraction(1, 2))
    # X sees Y in its context as well, so both are flagged.
    assert rep.violating_variables() == ("X", "Y")


@given(st.integers(0, 10**6))
def test_markov_factorization_reproduces_markov_joint(seed):
    m = random_model(random.Random(seed), max_endogenous=3, max_values=2)
    j = joint(m)
    assert markov_factorization(m.signature, m.dag, j) == dict(j.masses)


@given(st.integers(0, 10**6))
def test_interventional_marginals_sum_to_one(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3)
    x = rng.choice(m.signature.endogenous)
    for v in m.signature.ranges[x]:
        d = intervene(m, {x: v})
        assert sum(d.masses.values()) == 1
        assert d.prob({x: v}) == 1
        # Non-descendants keep their observational marginal.
        for nd in m.signature.variables:
            if nd != x and nd not in m.dag.descendants(x):
                for val in m.signature.ranges[nd]:
                    assert d.prob({nd: val}) == joint(m).prob({nd: val})
