"""Prebuilt fixtures with expected values and where each value comes from.

Every check records a provenance tag:

* ``PAPER``: the number is stated in the source text.
* ``DERIVED``: computed by hand from stated formulas with the chosen parameters.
* ``TRIVIAL``: follows directly from the construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .abstraction import Coarsening, InducedStructure, coarsen
from .canonical import bound_query, canonical_frame, canonical_scm, independent_canonical
from .exact import format_fraction
from .model import CausalModel, Dag, Signature, intervene, joint
from .potential import build_gh_scm, build_po_scm, n_basic
from .query import evaluate, parse_query, prob_of_causation
from .scm import Scm, World, basic_cf, induced_model, solve

Value = Fraction | tuple | bool


@dataclass(frozen=True)
class Check:
    name: str
    expected: Value
    provenance: str
    citation: str
    compute: Callable[[], Value]


@dataclass(frozen=True)
class CheckResult:
    check: Check
    actual: Value | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.actual == self.check.expected


@dataclass(frozen=True)
class Fixture:
    name: str
    title: str
    citation: str
    build: Callable[[], object]
    checks: tuple[Check, ...] = field(default=())

    def run(self) -> list[CheckResult]:
        out = []
        for c in self.checks:
            try:
                out.append(CheckResult(c, c.compute()))
            except Exception as exc:  # reported, never swallowed silently
                out.append(CheckResult(c, None, f"{type(exc).__name__}: {exc}"))
        return out


def format_value(value: Value | None) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    return str(value)


# -- models -------------------------------------------------------------------

def _binary_cause_model(x: str, y: str, p_true: Fraction, q_true: Fraction, prior_x: Fraction) -> CausalModel:
    """``U_x -> x -> y`` with ``P(y=1 | x=1) = p_true`` and ``P(y=1 | x=0) = q_true``.

    ``x`` copies a uniform-or-biased binary exogenous parent, since every
    endogenous variable needs a parent.
    """
    u = f"U_{x}"
    sig = Signature((u,), (x, y), {u: ("0", "1"), x: ("0", "1"), y: ("0", "1")})
    dag = Dag.from_edges(sig.variables, [(u, x), (x, y)])
    priors = {u: {"0": 1 - prior_x, "1": prior_x}}
    cpds = {
        x: {("0",): {"0": 1}, ("1",): {"1": 1}},
        y: {("0",): {"0": 1 - q_true, "1": q_true}, ("1",): {"0": 1 - p_true, "1": p_true}},
    }
    return CausalModel(sig, dag, priors, cpds)


def example_51(p: Fraction = Fraction(1, 3), q: Fraction = Fraction(2, 3),
               prior_x: Fraction = Fraction(1, 2)) -> CausalModel:
    """Binary ``X -> Y`` with ``P(Y=1|X=1) = p`` and ``P(Y=1|X=0) = q``."""
    return _binary_cause_model("X", "Y", Fraction(p), Fraction(q), Fraction(prior_x))


def roulette() -> CausalModel:
    """``Z`` picks a gun, ``Y=1`` is survival: ``1/6`` with ``Z=0``, ``1/7`` with ``Z=1``."""
    return _binary_cause_model("Z", "Y", Fraction(1, 7), Fraction(1, 6), Fraction(1, 2))


def example_41_low(weights: tuple[Fraction, ...] = (Fraction(1, 3),) * 3,
                   f: tuple[str, ...] = ("1", "2", "3")) -> Scm:
    """``Y = f(U)`` with ``U`` over ``1..n`` and the given prior."""
    n = len(weights)
    values = tuple(str(i) for i in range(1, n + 1))
    y_range = tuple(dict.fromkeys(f))
    sig = Signature(("U",), ("Y",), {"U": values, "Y": y_range})
    dag = Dag.from_edges(sig.variables, [("U", "Y")])
    return Scm.from_tables(sig, dag, {"Y": {(u,): y for u, y in zip(values, f)}},
                           {"U": dict(zip(values, weights))})


def example_41_coarsening(low: Scm, u_prime: str = "1") -> tuple[Coarsening, Dag]:
    tau = Coarsening.build(low.signature, {"Z": (("U",), ("0", "1"), lambda u: "1" if u == u_prime else "0")})
    dag = Dag.from_edges(("Z", "Y"), [("Z", "Y")])
    return tau, dag


def example_41(u_prime: str = "1") -> InducedStructure:
    low = example_41_low()
    tau, dag = example_41_coarsening(low, u_prime)
    return coarsen(low, tau, dag)


def example_42_low() -> Scm:
    values = tuple(str(i) for i in range(1, 101))
    sig = Signature(("X",), ("Y", "A"), {"X": values, "Y": values, "A": values})
    dag = Dag.from_edges(sig.variables, [("X", "Y"), ("X", "A")])
    ident = {(v,): v for v in values}
    return Scm.from_tables(sig, dag, {"Y": ident, "A": ident}, {"X": {v: Fraction(1, 100) for v in values}})


def example_42() -> InducedStructure:
    low = example_42_low()
    tau = Coarsening.build(low.signature, {"Z": (("X",), ("0", "1"), lambda x: "0" if int(x) <= 40 else "1")})
    dag = Dag.from_edges(("Z", "Y", "A"), [("Z", "Y"), ("Z", "A")])
    return coarsen(low, tau, dag)


# -- fixture checks -------------------------------------------------------------

P, Q = Fraction(1, 3), Fraction(2, 3)
PN_QUERY = "P((Y=0)[X=0] | X=1, Y=1)"
SEC71_QUERY = "P((Y=1)[X=1], (Y=0)[X=1] | X=0, Y=0)"


def _ex51_first_scm():
    """The canonical SCM chosen in the text: identity ``p``, negation ``q``, constant-1 ``0``."""
    m = example_51()
    frame = canonical_frame(m)
    fx = frame.functions("X")
    x_dist = {frame.find("X", ("0", "1")).label: 1}
    ident, neg = frame.find("Y", ("0", "1")), frame.find("Y", ("1", "0"))
    c0, c1 = frame.find("Y", ("0", "0")), frame.find("Y", ("1", "1"))
    y_dist = {ident.label: P, neg.label: Q, c1.label: 0, c0.label: 1 - P - Q}
    assert set(x_dist) <= set(fx)
    return frame, canonical_scm(frame, {"X": x_dist, "Y": y_dist}), (ident, neg, c0, c1)


def _ex51_pn_in_first_scm(shift: bool) -> Fraction:
    frame, scm, (ident, neg, c0, c1) = _ex51_first_scm()
    rv_y, rv_x = frame.response_vars["Y"], frame.response_vars["X"]
    u = {"U_X": "1", rv_x: frame.find("X", ("0", "1")).label, rv_y: (c1 if shift else ident).label}
    if shift:
        # Move all identity mass to constant-1: P(Y=1|X=1) is unchanged.
        y_dist = {ident.label: 0, neg.label: Q - P, c1.label: P, c0.label: 1 - Q}
        scm = canonical_scm(frame, {"X": {frame.find("X", ("0", "1")).label: 1}, "Y": y_dist})
    return basic_cf(scm, {"Y": "0"}, {"X": "0"}, World(u, solve(scm, u)))


def _ex51_checks() -> tuple[Check, ...]:
    m = example_51
    ic_y = lambda: independent_canonical(m()).priors["U_Y"]  # noqa: E731
    frame = lambda: canonical_frame(m())  # noqa: E731
    return (
        Check("joint P(X=1, Y=1)", Fraction(1, 6), "DERIVED", "two-factor product with P(X=1)=1/2",
              lambda: joint(m()).prob({"X": "1", "Y": "1"})),
        Check("P_do(X=0)(Y=1)", Q, "PAPER", "P(Y=1 | X=0)=q",
              lambda: intervene(m(), {"X": "0"}).prob({"Y": "1"})),
        Check("|R(U_Y)|", Fraction(4), "PAPER", "a four-valued response variable",
              lambda: Fraction(len(frame().response_ranges["Y"]))),
        Check("identity world: (Y=0)[X=0] given X=1, Y=1", Fraction(1), "PAPER", "identity mechanism gives =1",
              lambda: _ex51_pn_in_first_scm(False)),
        Check("constant-1 world: same counterfactual", Fraction(0), "PAPER", "the same computation results in =0",
              lambda: _ex51_pn_in_first_scm(True)),
        Check("bounds " + PN_QUERY, (Fraction(0), Fraction(1)), "PAPER", "entirely unbounded",
              lambda: bound_query(m(), parse_query(PN_QUERY))),
        Check("IC P(U_Y=identity)", P * (1 - Q), "DERIVED", "independent canonical product p(1-q)",
              lambda: ic_y()[frame().find("Y", ("0", "1")).label]),
        Check("IC P(U_Y=constant-1)", P * Q, "DERIVED", "independent canonical product pq",
              lambda: ic_y()[frame().find("Y", ("1", "1")).label]),
        Check("PNS under N", P * (1 - Q), "DERIVED", "independence of potential outcomes",
              lambda: prob_of_causation(m(), "X", "Y", "PNS", "N")),
    )


def _ex61_checks() -> tuple[Check, ...]:
    m = example_51
    world = {"U_X": "1", "X": "1", "Y": "1"}
    checks = [
        Check("P^N(Y[X=1]=1)", P, "PAPER", "P^N(Y_1=1)=p",
              lambda: build_po_scm(m()).prior("Y", ("1",))["1"]),
        Check("P^N(Y[X=0]=1)", Q, "PAPER", "P^N(Y_0=1)=q",
              lambda: build_po_scm(m()).prior("Y", ("0",))["1"]),
        Check("n_basic (Y=0)[X=0] at world X=1, Y=1", 1 - Q, "PAPER", "P^N(Y_0=0)=1-q",
              lambda: n_basic(m(), {"X": "0"}, {"Y": "0"}, world)),
    ]
    for sem in ("N", "GH", "IC", "B"):
        checks.append(Check(f"{PN_QUERY} under {sem}", 1 - Q, "PAPER", "point-identified, =1-q",
                            lambda sem=sem: evaluate(m(), PN_QUERY, sem)))
    return tuple(checks)


def _sec71_checks() -> tuple[Check, ...]:
    m = example_51
    checks = [Check(f"{SEC71_QUERY} under B", P * (1 - P), "PAPER", "=p(1-p), whereas",
                    lambda: evaluate(m(), SEC71_QUERY, "B"))]
    for sem in ("N", "GH", "IC"):
        checks.append(Check(f"{SEC71_QUERY} under {sem}", Fraction(0), "PAPER", "P^N(...) = 0",
                            lambda sem=sem: evaluate(m(), SEC71_QUERY, sem)))
    return tuple(checks)


def _ex41_checks() -> tuple[Check, ...]:
    def p_y2() -> Fraction:
        return example_41().conditional("Y", "2", {"Z": "0"})
    return (
        Check("P(Y=2 | Z=0)", Fraction(1, 2), "DERIVED", "exact pushforward, uniform U on {1,2,3}", p_y2),
        Check("0 < P(Y=2 | Z=0) < 1", True, "PAPER", "thus 0 < p < 1", lambda: 0 < p_y2() < 1),
        Check("Y deterministic given Z", False, "PAPER", "the correct causal model is not an SCM",
              lambda: example_41().deterministic["Y"]),
    )


def _ex42_witness() -> tuple[Fraction, Fraction]:
    v = example_42().markov.find("Y", {"Z": "0"}, {"A": "10"}, "10")
    return v.complement_conditional, v.complement_marginal


def _ex42_checks() -> tuple[Check, ...]:
    return (
        Check("joint mass (X=7, Y=7, A=7)", Fraction(1, 100), "PAPER", "uniform P(X)",
              lambda: joint(induced_model(example_42_low())).mass({"X": "7", "Y": "7", "A": "7"})),
        Check("Markov condition holds", False, "PAPER", "the Markov condition does not hold",
              lambda: example_42().markov.holds),
        Check("P(Y!=10 | Z=0, A=10) vs P(Y!=10 | Z=0)", (Fraction(0), Fraction(39, 40)), "PAPER",
              "P(Y != 10 | Z=0, A=10) = 0, whereas P(Y != 10 | Z=0) = 39/40", _ex42_witness),
    )


def _roulette_checks() -> tuple[Check, ...]:
    m = roulette
    return (
        Check("P(Y[Z=0]=1)", Fraction(1, 6), "PAPER", "survival probabilities 1/6 and 1/7", lambda: build_po_scm(m()).prior("Y", ("0",))["1"]),
        Check("P(Y[Z=1]=1)", Fraction(1, 7), "PAPER", "survival probabilities 1/6 and 1/7", lambda: build_po_scm(m()).prior("Y", ("1",))["1"]),
        Check("P^N((Y=1)[Z=1] | Z=0, Y=1)", Fraction(1, 7), "DERIVED",
              "potential outcomes taken to be independent", lambda: evaluate(m(), "P((Y=1)[Z=1] | Z=0, Y=1)", "N")),
        Check("GH response law equals N on the same query", Fraction(1, 7), "DERIVED", "product response law equals the PO-SCM",
              lambda: evaluate(build_gh_scm(m()), "P((Y=1)[Z=1] | Z=0, Y=1)", "SCM")),
    )


def examples_catalog() -> dict[str, Fixture]:
    return {
        "ex-4.1": Fixture("ex-4.1", "coarsening a deterministic model yields a nondeterministic one",
                          "coarsened single-cause model", example_41, _ex41_checks()),
        "ex-4.2": Fixture("ex-4.2", "coarsening breaks the Markov condition", "coarsened common-cause model",
                          example_42, _ex42_checks()),
        "ex-5.1": Fixture("ex-5.1", "canonical SCMs leave the probability of necessity unbounded",
                          "binary X -> Y, p=1/3, q=2/3, P(X=1)=1/2", example_51, _ex51_checks()),
        "ex-6.1": Fixture("ex-6.1", "the PO-SCM point-identifies the same query",
                          "binary X -> Y, p=1/3, q=2/3", example_51, _ex61_checks()),
        "sec-7.1": Fixture("sec-7.1", "B and N disagree on a complex counterfactual",
                           "binary X -> Y, p=1/3, q=2/3", example_51, _sec71_checks()),
        "roulette": Fixture("roulette", "two guns with survival chances 1/6 and 1/7",
                            "Russian roulette with two guns", roulette, _roulette_checks()),
    }


def report(fixture: Fixture) -> tuple[list[str], bool]:
    lines = [f"{fixture.name}: {fixture.title} [{fixture.citation}]"]
    ok = True
    for r in fixture.run():
        c = r.check
        status = "PASS" if r.passed else "FAIL"
        ok &= r.passed
        got = r.error if r.error else format_value(r.actual)
        lines.append(f"  {status}  {c.name}: expected {format_value(c.expected)}, got {got}"
                     f"  [{c.provenance}: {c.citation}]")
    return lines, ok


__all__ = ["Check", "CheckResult", "Fixture", "examples_catalog", "example_51", "example_41",
           "example_41_low", "example_41_coarsening", "example_42", "example_42_low", "roulette",
           "report"]
