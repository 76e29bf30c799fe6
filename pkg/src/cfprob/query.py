"""Counterfactual query language: parser, printer and semantics dispatch.

Grammar (whitespace-insensitive)::

    query  := "P(" event ( "|" event )? ")"
    event  := term ( "," term )*
    term   := assign | cfatom
    cfatom := "(" assign ( "," assign )* ")" "[" assign ( "," assign )* "]"
    assign := IDENT "=" VALUE

Inside square brackets ``<-`` may be written instead of ``=``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .canonical import bound_query, independent_canonical
from .errors import (CausalError, InvalidModelError, QuerySyntaxError, UndefinedConditionalError,
                     UnsupportedQueryError)
from .events import Atom, CounterfactualQuery, merge_pairs
from .model import CausalModel, Signature
from .potential import build_gh_scm, n_complex
from .refinement import b_complex
from .scm import Scm, complex_cf, induced_model

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_VALUE = re.compile(r"[A-Za-z0-9_.+\-]+")


class Semantics(enum.Enum):
    B = "B"
    N = "N"
    GH = "GH"
    IC = "IC"
    SCM = "SCM"
    BOUNDS = "BOUNDS"

    @classmethod
    def parse(cls, text: str) -> "Semantics":
        try:
            return cls(text.upper())
        except ValueError:
            raise UnsupportedQueryError(f"unknown semantics {text!r}") from None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise QuerySyntaxError(msg, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def expect(self, token: str) -> None:
        if not self.peek(token):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.error(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def match(self, pattern: re.Pattern, what: str) -> tuple[str, int]:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        start = self.pos
        self.pos = m.end()
        return m.group(), start

    def assign(self, arrow: bool = False) -> tuple[str, str, int]:
        name, start = self.match(_IDENT, "variable name")
        if arrow and self.peek("<-"):
            self.pos += 2
        else:
            self.expect("=")
        value, _ = self.match(_VALUE, "value")
        return name, value, start

    def assigns(self, close: str, arrow: bool = False) -> list[tuple[str, str, int]]:
        out = [self.assign(arrow)]
        while self.peek(","):
            self.pos += 1
            out.append(self.assign(arrow))
        self.expect(close)
        return out

    def event(self) -> list:
        terms = [self.term()]
        while self.peek(","):
            self.pos += 1
            terms.append(self.term())
        return terms

    def term(self):
        if self.peek("("):
            self.pos += 1
            targets = self.assigns(")")
            self.expect("[")
            do = self.assigns("]", arrow=True)
            return ("cf", targets, do)
        return ("obs", [self.assign()])

    def query(self) -> tuple[list, list | None]:
        self.expect("P")
        self.expect("(")
        atoms = self.event()
        given = None
        if self.peek("|"):
            self.pos += 1
            given = self.event()
        self.expect(")")
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected trailing text")
        return atoms, given


def _check(sig: Signature | None, items: list[tuple[str, str, int]], *, endogenous: bool) -> None:
    if sig is None:
        return
    for name, value, pos in items:
        if name not in sig.ranges:
            raise QuerySyntaxError(f"unknown variable {name!r}", pos)
        if endogenous and not sig.is_endogenous(name):
            raise QuerySyntaxError(f"{name!r} is exogenous and cannot appear in a counterfactual atom", pos)
        if value not in sig.ranges[name]:
            raise QuerySyntaxError(f"unknown value {value!r} for variable {name!r}", pos)


def parse_query(text: str, signature: Signature | None = None) -> CounterfactualQuery:
    """Parse query text; with a signature, names and values are checked too."""
    p = _Parser(text)
    terms, given_terms = p.query()
    atoms = []
    for term in terms:
        if term[0] == "cf":
            _, targets, do = term
            _check(signature, targets + do, endogenous=True)
            pairs = tuple((n, v) for n, v, _ in do)
            if merge_pairs(pairs) is None:
                raise QuerySyntaxError("contradictory intervention", do[0][2])
            atoms.append(Atom(tuple((n, v) for n, v, _ in targets), pairs))
        else:
            _check(signature, term[1], endogenous=True)
            atoms.append(Atom(tuple((n, v) for n, v, _ in term[1])))
    given = None
    if given_terms is not None:
        flat = []
        for term in given_terms:
            if term[0] == "cf":
                pos = term[1][0][2]
                raise QuerySyntaxError("the conditioning event cannot contain counterfactual atoms", pos)
            flat.extend(term[1])
        _check(signature, flat, endogenous=False)
        given = tuple((n, v) for n, v, _ in flat)
    return CounterfactualQuery(tuple(atoms), given)


def _pairs(pairs) -> str:
    return ", ".join(f"{n}={v}" for n, v in pairs)


def format_query(query: CounterfactualQuery) -> str:
    parts = []
    for atom in query.atoms:
        if atom.observational:
            parts.append(_pairs(atom.targets))
        else:
            parts.append(f"({_pairs(atom.targets)})[{_pairs(atom.intervention)}]")
    text = "P(" + ", ".join(parts)
    if query.given:
        text += " | " + _pairs(query.given)
    return text + ")"


def _as_query(query: CounterfactualQuery | str, sig: Signature) -> CounterfactualQuery:
    if isinstance(query, str):
        return parse_query(query, sig)
    query.validate(sig)
    return query


def evaluate(model: CausalModel | Scm, query: CounterfactualQuery | str, semantics: Semantics | str = Semantics.N,
             *, max_states: int | None = None) -> Fraction | tuple[Fraction, Fraction]:
    """Value of ``query`` under ``semantics``; BOUNDS returns ``(lo, hi)``."""
    if isinstance(semantics, str):
        semantics = Semantics.parse(semantics)
    scm = model if isinstance(model, Scm) else None
    base = induced_model(scm, max_states=max_states) if scm is not None else model
    q = _as_query(query, base.signature)
    given = q.given_dict()
    if given is None:
        raise UndefinedConditionalError("undefined conditional: contradictory conditioning event")
    given = given or None
    if semantics is Semantics.SCM:
        if scm is None:
            raise UnsupportedQueryError("SCM semantics needs an SCM as input")
        return complex_cf(scm, q.atoms, given, max_states=max_states)
    if semantics is Semantics.B:
        return b_complex(base, q.atoms, given)
    if semantics is Semantics.N:
        return n_complex(base, q.atoms, given, max_states=max_states)
    if semantics is Semantics.GH:
        return complex_cf(build_gh_scm(base), q.atoms, given, max_states=max_states)
    if semantics is Semantics.IC:
        return complex_cf(independent_canonical(base), q.atoms, given, max_states=max_states)
    if q.is_full_world(base.signature):
        raise UnsupportedQueryError("bounds are not defined for a full-world conditioning event")
    return bound_query(base, q, max_states=max_states)


class Causation(enum.Enum):
    PN = "PN"
    PS = "PS"
    PNS = "PNS"


def causation_query(signature: Signature, x: str, y: str, kind: Causation | str) -> CounterfactualQuery:
    """PN, PS or PNS for binary ``x`` and ``y``; the second range value counts as "true"."""
    kind = Causation(kind.upper()) if isinstance(kind, str) else kind
    for v in (x, y):
        if not signature.is_endogenous(v):
            raise InvalidModelError(f"{v} must be endogenous")
        if len(signature.ranges[v]) != 2:
            raise UnsupportedQueryError(f"probabilities of causation need binary variables; {v} has "
                                        f"{len(signature.ranges[v])} values")
    x0, x1 = signature.ranges[x]
    y0, y1 = signature.ranges[y]
    if kind is Causation.PN:
        return CounterfactualQuery((Atom(((y, y0),), ((x, x0),)),), ((x, x1), (y, y1)))
    if kind is Causation.PS:
        return CounterfactualQuery((Atom(((y, y1),), ((x, x1),)),), ((x, x0), (y, y0)))
    return CounterfactualQuery((Atom(((y, y1),), ((x, x1),)), Atom(((y, y0),), ((x, x0),))))


def prob_of_causation(model: CausalModel | Scm, x: str, y: str, kind: Causation | str,
                      semantics: Semantics | str = Semantics.N, **kw):
    sig = model.signature
    return evaluate(model, causation_query(sig, x, y, kind), semantics, **kw)


def query_class(query: CounterfactualQuery, sig: Signature) -> str:
    if all(a.observational for a in query.atoms):
        return "observational"
    if len(query.atoms) == 1:
        return "basic-with-world" if query.is_full_world(sig) else "conditional"
    binary = [v for v in sig.endogenous if len(sig.ranges[v]) == 2]
    for x in binary:
        for y in binary:
            if x != y and query == causation_query(sig, x, y, Causation.PNS):
                return "PN/PS/PNS"
    return "general complex"


@dataclass(frozen=True)
class Comparison:
    query: CounterfactualQuery
    query_class: str
    cells: Mapping[Semantics, object]
    verdict: str
    agree: bool

    def rows(self) -> list[tuple[str, str]]:
        from .exact import format_exact
        out = []
        for tag, val in self.cells.items():
            if isinstance(val, tuple):
                text = f"[{format_exact(val[0])}, {format_exact(val[1])}]"
            elif isinstance(val, Fraction):
                text = format_exact(val)
            else:
                text = f"error: {val}"
            out.append((tag.value, text))
        return out


def compare_semantics(model: CausalModel | Scm, query: CounterfactualQuery | str,
                      *, max_states: int | None = None) -> Comparison:
    """Evaluate every applicable semantics; errors are recorded per cell."""
    sig = model.signature
    q = _as_query(query, sig if isinstance(model, CausalModel) else induced_model(model).signature)
    tags = [Semantics.B, Semantics.N, Semantics.GH, Semantics.IC]
    if isinstance(model, Scm):
        tags.append(Semantics.SCM)
    tags.append(Semantics.BOUNDS)
    cells: dict[Semantics, object] = {}
    for tag in tags:
        try:
            cells[tag] = evaluate(model, q, tag, max_states=max_states)
        except CausalError as exc:
            cells[tag] = exc
    base_sig = sig if isinstance(model, CausalModel) else induced_model(model).signature
    cls = query_class(q, base_sig)
    point = {t: v for t, v in cells.items() if isinstance(v, Fraction) and t is not Semantics.SCM}
    must_agree = [Semantics.N, Semantics.GH, Semantics.IC]
    if cls != "general complex":
        must_agree.insert(0, Semantics.B)
    values = {point[t] for t in must_agree if t in point}
    agree = len(values) <= 1
    bounds = cells.get(Semantics.BOUNDS)
    inside = True
    if isinstance(bounds, tuple) and Semantics.N in point:
        inside = bounds[0] <= point[Semantics.N] <= bounds[1]
    names = "=".join(t.value for t in must_agree)
    verdict = f"{cls}: {names} {'agree' if agree else 'DISAGREE'}"
    if cls == "general complex" and Semantics.B in point and Semantics.N in point:
        verdict += "; B " + ("equals" if point[Semantics.B] == point[Semantics.N] else "differs from") + " N"
    if isinstance(bounds, tuple):
        verdict += "; N " + ("inside" if inside else "OUTSIDE") + " bounds"
    return Comparison(q, cls, cells, verdict, agree and inside)
