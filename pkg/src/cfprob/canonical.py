"""Canonical frames, canonical SCMs and exact bounds over all canonical SCMs.

Every endogenous variable ``X`` gets a response variable whose values are all
functions from ``R(Pa_X)`` to ``R(X)``.  A canonical SCM puts a distribution on
each response variable that reproduces the conditional table of ``X``; the set
of such distributions is a polytope, one per variable.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import (ConstraintViolationError, InvalidModelError, ModelTooLargeError,
                     UndefinedConditionalError, UnsupportedQueryError)
from .events import CounterfactualQuery, merge_pairs
from .exact import DEFAULT_MAX_STATES, ONE, ZERO
from .model import CausalModel, Dag, Signature, _freeze, _weighted_worlds
from .scm import Equation, Scm
from .vertices import enumerate_vertices

DEFAULT_MAX_FUNCTIONS = 64
DEFAULT_MAX_PRODUCTS = 10**5


@dataclass(frozen=True, eq=False)
class ResponseFunction:
    """A total map from parent configurations to child values."""

    label: str
    configs: tuple[tuple[str, ...], ...]
    outputs: tuple[str, ...]
    index: Mapping[tuple[str, ...], int]

    def __call__(self, config: tuple[str, ...]) -> str:
        return self.outputs[self.index[config]]

    def table(self) -> dict[tuple[str, ...], str]:
        return dict(zip(self.configs, self.outputs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResponseFunction):
            return NotImplemented
        return self.configs == other.configs and self.outputs == other.outputs

    def __hash__(self) -> int:
        return hash((self.configs, self.outputs))


def _label(outputs: tuple[str, ...], i: int) -> str:
    if any(c in o for o in outputs for c in ",[]"):
        return f"f{i}"
    return "[" + ",".join(outputs) + "]"


def response_functions(parent_ranges: Sequence[Sequence[str]], child_range: Sequence[str]) -> tuple[ResponseFunction, ...]:
    configs = tuple(product(*parent_ranges))
    index = _freeze({c: i for i, c in enumerate(configs)})
    return tuple(ResponseFunction(_label(out, i), configs, out, index)
                 for i, out in enumerate(product(child_range, repeat=len(configs))))


@dataclass(frozen=True)
class ResponseEquation(Equation):
    """``X = f(Pa_X)`` where ``f`` is the value of the response variable."""

    parents: tuple[str, ...]
    base_parents: tuple[str, ...]
    response_var: str
    functions: Mapping[str, ResponseFunction]

    def __call__(self, values) -> str:
        f = self.functions[values[self.response_var]]
        return f(tuple(values[p] for p in self.base_parents))

    def outcomes(self, configs, aux, priors):
        if tuple(aux) != (self.response_var,):
            return super().outcomes(configs, aux, priors)
        cfgs = [tuple(c[p] for p in self.base_parents) for c in configs]
        acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
        for label, p in priors[self.response_var].items():
            if p:
                f = self.functions[label]
                acc[tuple(f(c) for c in cfgs)] += p
        return dict(acc)


@dataclass(frozen=True)
class ResponsePolytope:
    """Distributions over one variable's response functions matching its table."""

    variable: str
    functions: tuple[ResponseFunction, ...]
    rows: tuple[tuple[tuple[str, ...], str, Fraction], ...]

    def constraint_system(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        A = [[ONE if f(cfg) == value else ZERO for f in self.functions] for cfg, value, _ in self.rows]
        b = [p for _, _, p in self.rows]
        A.append([ONE] * len(self.functions))
        b.append(ONE)
        return A, b

    def violations(self, dist: Mapping[str, Fraction]) -> list[tuple[tuple[str, ...], str, Fraction, Fraction]]:
        """Rows ``(config, value, expected, actual)`` that ``dist`` fails to reproduce."""
        out = []
        for cfg, value, expected in self.rows:
            actual = sum((dist.get(f.label, ZERO) for f in self.functions if f(cfg) == value), ZERO)
            if actual != expected:
                out.append((cfg, value, expected, actual))
        return out


@dataclass(frozen=True)
class CanonicalFrame:
    base: CausalModel
    response_vars: Mapping[str, str]
    response_ranges: Mapping[str, tuple[ResponseFunction, ...]]
    signature: Signature
    dag: Dag

    def functions(self, x: str) -> dict[str, ResponseFunction]:
        return {f.label: f for f in self.response_ranges[x]}

    def polytope(self, x: str) -> ResponsePolytope:
        sig = self.base.signature
        rows = []
        for cfg, row in self.base.cpds[x].items():
            for value in sig.ranges[x]:
                rows.append((cfg, value, row[value]))
        return ResponsePolytope(x, self.response_ranges[x], tuple(rows))

    def find(self, x: str, outputs: Mapping[tuple[str, ...], str] | Sequence[str]) -> ResponseFunction:
        """The response function of ``x`` with the given table."""
        for f in self.response_ranges[x]:
            if isinstance(outputs, Mapping):
                if all(f(c) == v for c, v in outputs.items()):
                    return f
            elif f.outputs == tuple(outputs):
                return f
        raise KeyError(outputs)


def unique_name(wanted: str, taken: set[str]) -> str:
    name = wanted
    while name in taken:
        name += "'"
    return name


def canonical_frame(model: CausalModel, *, max_functions: int | None = None) -> CanonicalFrame:
    """Augment ``model`` with one response variable per endogenous variable."""
    sig, dag = model.signature, model.dag
    cap = DEFAULT_MAX_STATES if max_functions is None else max_functions
    taken = set(sig.variables)
    response_vars, ranges_out = {}, {}
    for x in sig.endogenous:
        pas = dag.parents(x)
        count = len(sig.ranges[x]) ** sig.space_size(pas)
        if count > cap:
            raise ModelTooLargeError(f"{x} has {count} response functions, cap is {cap}")
        name = unique_name(f"U_{x}", taken)
        taken.add(name)
        response_vars[x] = name
        ranges_out[x] = response_functions([sig.ranges[p] for p in pas], sig.ranges[x])
    ranges = dict(sig.ranges)
    for x, name in response_vars.items():
        ranges[name] = tuple(f.label for f in ranges_out[x])
    new_sig = Signature(sig.exogenous + tuple(response_vars[x] for x in sig.endogenous), sig.endogenous, ranges)
    new_dag = Dag(new_sig.exogenous + sig.endogenous,
                  dag.edges | {(response_vars[x], x) for x in sig.endogenous})
    return CanonicalFrame(model, _freeze(response_vars), _freeze(ranges_out), new_sig, new_dag)


def canonical_scm(frame: CanonicalFrame, response_dists: Mapping[str, Mapping[str, Fraction]],
                  *, validate: bool = True) -> Scm:
    """The SCM over ``frame`` with the given response distributions.

    Each distribution must reproduce its variable's conditional table exactly;
    the first offending row is reported.
    """
    base = frame.base
    priors = dict(base.priors)
    equations = {}
    for x in base.signature.endogenous:
        funcs = frame.functions(x)
        dist = {str(k): Fraction(v) for k, v in response_dists[x].items()}
        unknown = set(dist) - set(funcs)
        if unknown:
            raise InvalidModelError(f"unknown response functions for {x}: {sorted(unknown)}")
        if validate:
            if any(p < 0 for p in dist.values()):
                raise InvalidModelError(f"negative response mass for {x}")
            bad = frame.polytope(x).violations(dist)
            if bad:
                cfg, value, expected, actual = bad[0]
                raise ConstraintViolationError(x, cfg, value, expected, actual)
        rv = frame.response_vars[x]
        priors[rv] = {label: dist.get(label, ZERO) for label in funcs}
        pas = base.dag.parents(x)
        equations[x] = ResponseEquation(frame.dag.parents(x), pas, rv, _freeze(funcs))
    return Scm(frame.signature, frame.dag, equations, priors)


def independent_canonical(model: CausalModel, *, max_functions: int | None = None) -> Scm:
    """The canonical SCM whose response law is the law of the potential-outcome tuple."""
    from .potential import build_po_scm

    frame = canonical_frame(model, max_functions=max_functions)
    po = build_po_scm(model)
    dists = {}
    for x in model.signature.endogenous:
        names = [po.name(x, cfg) for cfg in frame.response_ranges[x][0].configs]
        dists[x] = {f.label: math.prod((po.scm.priors[nm][out] for nm, out in zip(names, f.outputs)), start=ONE)
                    for f in frame.response_ranges[x]}
    return canonical_scm(frame, dists)


@lru_cache(maxsize=256)
def _vertices(polytope: ResponsePolytope, max_bases: int | None) -> tuple[tuple[Fraction, ...], ...]:
    A, b = polytope.constraint_system()
    return tuple(enumerate_vertices(A, b, max_bases=max_bases))


def polytope_vertices(polytope: ResponsePolytope, *, max_bases: int | None = None) -> list[dict[str, Fraction]]:
    """Exact vertices of the response polytope as distributions over labels."""
    labels = [f.label for f in polytope.functions]
    return [dict(zip(labels, x)) for x in _vertices(polytope, max_bases)]


def _probability(model: CausalModel, event: Mapping[str, str]) -> Fraction:
    return sum((w for _, w in _weighted_worlds(model, {}, fixed=event)), ZERO)


def bound_query(model: CausalModel, query: CounterfactualQuery, *,
                max_functions: int | None = None, max_products: int | None = None,
                max_states: int | None = None) -> tuple[Fraction, Fraction]:
    """Exact ``(min, max)`` of the query over every canonical SCM of ``model``.

    Unconditional query values are multilinear in the per-variable response
    distributions, and every canonical SCM gives endogenous evidence the same
    probability, so the extremes sit at products of polytope vertices.
    """
    sig = model.signature
    given = merge_pairs(query.given or ())
    if given is None:
        raise UndefinedConditionalError("undefined conditional: contradictory evidence")
    if any(k in model.priors for k in given):
        raise UnsupportedQueryError("bounds accept endogenous evidence only")
    sig.check_assignment(given, allowed=sig.endogenous, what="conditioning event")
    sig.check_space(sig.variables, max_states)
    den = _probability(model, given) if given else ONE
    if den == 0:
        raise UndefinedConditionalError(f"undefined conditional: P({given}) = 0 in every canonical SCM")
    frame = canonical_frame(model, max_functions=DEFAULT_MAX_FUNCTIONS if max_functions is None else max_functions)
    names = list(sig.endogenous)
    vertex_sets = [polytope_vertices(frame.polytope(x)) for x in names]
    cap = DEFAULT_MAX_PRODUCTS if max_products is None else max_products
    count = math.prod(len(v) for v in vertex_sets)
    if count > cap:
        raise ModelTooLargeError(f"{count} vertex products exceed cap {cap}")
    atoms = list(query.atoms)
    order = [x for x in model.dag.topological_order if x in sig.endogenous]
    # innermost loop runs over the variable with the most vertices
    last = max(range(len(names)), key=lambda i: len(vertex_sets[i]))
    outer = [i for i in range(len(names)) if i != last]
    funcs = [frame.functions(x) for x in names]
    pas = [model.dag.parents(x) for x in names]
    pos = {x: i for i, x in enumerate(names)}
    worlds = [(dict(zip(sig.exogenous, combo)), math.prod((model.priors[k][v] for k, v in zip(sig.exogenous, combo)), start=ONE))
              for combo in product(*(sig.ranges[u] for u in sig.exogenous))]
    worlds = [(u, w) for u, w in worlds if w]
    scenarios = [({}, given)] if given else []
    for atom in atoms:
        t = atom.target_dict()
        if t is None:
            return ZERO, ZERO
        scenarios.append((atom.do_dict(), t))
    cache: dict[tuple, bool] = {}

    def holds(ui: int, labels: tuple[str, ...]) -> bool:
        key = (ui, labels)
        if key not in cache:
            u = worlds[ui][0]
            ok = True
            for do, target in scenarios:
                vals = dict(u)
                for x in order:
                    if x in do:
                        vals[x] = do[x]
                    else:
                        i = pos[x]
                        vals[x] = funcs[i][labels[i]](tuple(vals[p] for p in pas[i]))
                if any(vals[k] != v for k, v in target.items()):
                    ok = False
                    break
            cache[key] = ok
        return cache[key]

    supports = [[[(f, p) for f, p in v.items() if p] for v in vs] for vs in vertex_sets]
    last_labels = sorted({f for sup in supports[last] for f, _ in sup})
    lo = hi = None
    for choice in product(*(supports[i] for i in outer)):
        weights = dict.fromkeys(last_labels, ZERO)
        for picked in product(*choice):
            coeff = math.prod((p for _, p in picked), start=ONE)
            labels = [None] * len(names)
            for i, (f, _) in zip(outer, picked):
                labels[i] = f
            for f in last_labels:
                labels[last] = f
                key = tuple(labels)
                mass = sum((w for ui, (_, w) in enumerate(worlds) if holds(ui, key)), ZERO)
                if mass:
                    weights[f] += coeff * mass
        for sup in supports[last]:
            value = sum((p * weights[f] for f, p in sup), ZERO) / den
            lo = value if lo is None or value < lo else lo
            hi = value if hi is None or value > hi else hi
    return lo, hi
