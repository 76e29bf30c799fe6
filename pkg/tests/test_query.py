import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfprob import Atom, CounterfactualQuery
from cfprob.catalog import PN_QUERY, SEC71_QUERY, example_51, roulette
from cfprob.errors import QuerySyntaxError, UndefinedConditionalError, UnsupportedQueryError
from cfprob.potential import build_gh_scm
from cfprob.query import (Semantics, causation_query, compare_semantics, evaluate, format_query, parse_query,
                          prob_of_causation, query_class)
from cfprob.randmodels import random_atoms, random_evidence, random_model

SIG = example_51().signature


def test_parse_basic_structure():
    q = parse_query(PN_QUERY)
    assert q.atoms == (Atom((("Y", "0"),), (("X", "0"),)),)
    assert q.given == (("X", "1"), ("Y", "1"))


def test_arrow_alias_and_whitespace():
    assert parse_query("P( (Y = 0) [ X <- 0 ] | X=1 )") == parse_query("P((Y=0)[X=0] | X=1)")


def test_observations_merge():
    q = parse_query("P(X=1, Y=0, (Y=1)[X=0])")
    assert len(q.atoms) == 2 and q.atoms[0].targets == (("X", "1"), ("Y", "0"))


def test_empty_given_is_none():
    assert CounterfactualQuery((Atom.of({"Y": "1"}),), ()).given is None


@pytest.mark.parametrize("text,pos", [
    ("P(Y=1", 5),
    ("Q(Y=1)", 0),
    ("P((Y=1)[X=0] | (Y=1)[X=1])", 16),
    ("P(Y=1) extra", 7),
    ("P((Y=1)[X=0, X=1])", 8),
])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(QuerySyntaxError) as err:
        parse_query(text)
    assert err.value.position == pos


def test_signature_checks():
    with pytest.raises(QuerySyntaxError, match="unknown variable"):
        parse_query("P(W=1)", SIG)
    with pytest.raises(QuerySyntaxError, match="unknown value"):
        parse_query("P(Y=2)", SIG)
    with pytest.raises(QuerySyntaxError, match="exogenous"):
        parse_query("P((U_X=1)[X=0])", SIG)
    # Exogenous evidence is fine in the conditioning event.
    assert parse_query("P(Y=1 | U_X=1)", SIG).given == (("U_X", "1"),)


def test_evaluate_dispatch():
    m = example_51()
    assert evaluate(m, PN_QUERY, "n") == Fraction(1, 3)
    assert evaluate(m, SEC71_QUERY, Semantics.B) == Fraction(2, 9)
    assert evaluate(m, PN_QUERY, "BOUNDS") == (0, 1)
    assert evaluate(build_gh_scm(m), PN_QUERY, "SCM") == Fraction(1, 3)
    with pytest.raises(UnsupportedQueryError):
        evaluate(m, PN_QUERY, "SCM")
    with pytest.raises(UnsupportedQueryError):
        evaluate(m, PN_QUERY, "XYZ")


def test_evaluate_conditioning_errors():
    m = example_51()
    with pytest.raises(UndefinedConditionalError):
        evaluate(m, "P(Y=1 | X=1, X=0)", "N")
    with pytest.raises(UndefinedConditionalError):
        evaluate(m, "P(Y=1 | U_X=0, X=1)", "B")
    with pytest.raises(UnsupportedQueryError, match="full-world"):
        evaluate(m, "P((Y=0)[X=0] | U_X=1, X=1, Y=1)", "BOUNDS")


def test_causation_queries():
    q = causation_query(SIG, "X", "Y", "PN")
    assert format_query(q) == "P((Y=0)[X=0] | X=1, Y=1)"
    assert format_query(causation_query(SIG, "X", "Y", "PS")) == "P((Y=1)[X=1] | X=0, Y=0)"
    assert format_query(causation_query(SIG, "X", "Y", "PNS")) == "P((Y=1)[X=1], (Y=0)[X=0])"
    m = example_51()
    for sem in ("B", "N", "GH", "IC"):
        assert prob_of_causation(m, "X", "Y", "PNS", sem) == Fraction(1, 9)


def test_causation_needs_binary():
    m = random_model(random.Random(1), max_values=3)
    sig = m.signature
    multi = [v for v in sig.endogenous if len(sig.ranges[v]) > 2]
    if multi:
        other = next(v for v in sig.endogenous if v != multi[0])
        with pytest.raises(UnsupportedQueryError):
            causation_query(sig, other, multi[0], "PN")


def test_query_classes():
    assert query_class(parse_query("P(Y=1 | X=0)"), SIG) == "observational"
    assert query_class(parse_query(PN_QUERY), SIG) == "conditional"
    assert query_class(parse_query("P((Y=0)[X=0] | U_X=1, X=1, Y=1)"), SIG) == "basic-with-world"
    assert query_class(causation_query(SIG, "X", "Y", "PNS"), SIG) == "PN/PS/PNS"
    assert query_class(parse_query(SEC71_QUERY), SIG) == "general complex"


def test_compare_table():
    c = compare_semantics(example_51(), SEC71_QUERY)
    assert c.agree
    assert "B differs from N" in c.verdict
    rows = dict(c.rows())
    assert rows["B"] == "2/9 (≈ 0.222222)"
    assert rows["N"] == "0 (≈ 0.000000)"
    c = compare_semantics(roulette(), "P((Y=1)[Z=1] | Z=0, Y=1)")
    assert c.agree and c.query_class == "conditional"


names = st.sampled_from(["X", "Y", "Z_1", "W'"])
values = st.sampled_from(["0", "1", "a", "-2", "x.y"])
assigns = st.lists(st.tuples(names, values), min_size=1, max_size=3)


@st.composite
def queries(draw):
    atoms = []
    for _ in range(draw(st.integers(1, 3))):
        targets = draw(assigns)
        if draw(st.booleans()):
            do = dict(draw(assigns))
            atoms.append(Atom(tuple(targets), tuple(do.items())))
        else:
            atoms.append(Atom(tuple(targets)))
    given = draw(st.one_of(st.none(), assigns))
    return CounterfactualQuery(tuple(atoms), tuple(given) if given else None)


@given(queries())
def test_format_parse_roundtrip(q):
    assert parse_query(format_query(q)) == q
    assert format_query(parse_query(format_query(q))) == format_query(q)


@given(st.integers(0, 10**6))
def test_random_queries_roundtrip_against_signature(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_endogenous=3)
    atoms = random_atoms(rng, m)
    ev = random_evidence(rng, m)
    q = CounterfactualQuery(tuple(atoms), tuple(ev.items()))
    assert parse_query(str(q), m.signature) == q
