"""Finite discrete signatures, DAGs, exact distributions and causal models.

A :class:`CausalModel` is a causal Bayesian network whose exogenous variables
are explicit root nodes.  Its joint is the Markov factorization of its tables,
and interventions follow the truncated factorization.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidModelError, ModelTooLargeError, UndefinedConditionalError
from .exact import DEFAULT_MAX_STATES, ONE, ZERO, as_probability

Assignment = Mapping[str, str]


def _freeze(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class Signature:
    """Exogenous and endogenous variable names with finite ordered ranges."""

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        exo = tuple(self.exogenous)
        endo = tuple(self.endogenous)
        object.__setattr__(self, "exogenous", exo)
        object.__setattr__(self, "endogenous", endo)
        if len(set(exo)) != len(exo) or len(set(endo)) != len(endo):
            raise InvalidModelError("duplicate variable name in signature")
        overlap = set(exo) & set(endo)
        if overlap:
            raise InvalidModelError(f"variables both exogenous and endogenous: {sorted(overlap)}")
        ranges = {}
        for name in exo + endo:
            if name not in self.ranges:
                raise InvalidModelError(f"no range declared for {name!r}")
            values = tuple(str(v) for v in self.ranges[name])
            if not values:
                raise InvalidModelError(f"empty range for {name!r}")
            if len(set(values)) != len(values):
                raise InvalidModelError(f"duplicate value labels in range of {name!r}")
            ranges[name] = values
        extra = set(self.ranges) - set(ranges)
        if extra:
            raise InvalidModelError(f"ranges given for undeclared variables: {sorted(extra)}")
        object.__setattr__(self, "ranges", _freeze(ranges))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    def is_exogenous(self, name: str) -> bool:
        return name in self.ranges and name in set(self.exogenous)

    def is_endogenous(self, name: str) -> bool:
        return name in set(self.endogenous)

    def space_size(self, names: Iterable[str] | None = None) -> int:
        names = self.variables if names is None else names
        return math.prod(len(self.ranges[n]) for n in names)

    def check_assignment(self, assignment: Assignment, *, allowed: Iterable[str] | None = None,
                         what: str = "assignment") -> dict[str, str]:
        """Validate names and values; return a plain dict copy."""
        allowed = set(self.variables if allowed is None else allowed)
        out = {}
        for name, value in assignment.items():
            if name not in allowed:
                if name in self.ranges:
                    raise InvalidModelError(f"{what}: variable {name!r} not allowed here")
                raise InvalidModelError(f"{what}: unknown variable {name!r}")
            value = str(value)
            if value not in self.ranges[name]:
                raise InvalidModelError(f"{what}: value {value!r} out of range for {name!r}")
            out[name] = value
        return out

    def check_space(self, names: Iterable[str], max_states: int | None) -> None:
        cap = DEFAULT_MAX_STATES if max_states is None else max_states
        size = self.space_size(names)
        if size > cap:
            raise ModelTooLargeError(f"state space of {size} assignments exceeds cap {cap}")


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph; parent tuples follow the order of ``nodes``."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        edges = frozenset((str(a), str(b)) for a, b in self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        known = set(nodes)
        for a, b in edges:
            if a not in known or b not in known:
                raise InvalidModelError(f"edge {a}->{b} mentions an unknown node")
            if a == b:
                raise InvalidModelError(f"self-loop on {a}")
        self.topological_order  # raises on cycles

    @classmethod
    def from_edges(cls, nodes: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Dag":
        return cls(tuple(nodes), frozenset(edges))

    @cached_property
    def _parent_map(self) -> dict[str, tuple[str, ...]]:
        index = {n: i for i, n in enumerate(self.nodes)}
        pm: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            pm[b].append(a)
        return {n: tuple(sorted(ps, key=index.__getitem__)) for n, ps in pm.items()}

    @cached_property
    def _child_map(self) -> dict[str, tuple[str, ...]]:
        index = {n: i for i, n in enumerate(self.nodes)}
        cm: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            cm[a].append(b)
        return {n: tuple(sorted(cs, key=index.__getitem__)) for n, cs in cm.items()}

    def parents(self, node: str) -> tuple[str, ...]:
        return self._parent_map[node]

    def children(self, node: str) -> tuple[str, ...]:
        return self._child_map[node]

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        # Kahn's algorithm, ties broken by declaration order so results are reproducible.
        indeg = {n: 0 for n in self.nodes}
        for _, b in self.edges:
            indeg[b] += 1
        order: list[str] = []
        ready = [n for n in self.nodes if indeg[n] == 0]
        index = {n: i for i, n in enumerate(self.nodes)}
        while ready:
            ready.sort(key=index.__getitem__)
            n = ready.pop(0)
            order.append(n)
            for c in self._child_map[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            raise InvalidModelError("graph contains a cycle")
        return tuple(order)

    def descendants(self, node: str) -> frozenset[str]:
        seen: set[str] = set()
        stack = list(self._child_map[node])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self._child_map[n])
        return frozenset(seen)

    def check_compatible(self, signature: Signature) -> None:
        if set(self.nodes) != set(signature.variables):
            raise InvalidModelError("graph nodes differ from the signature's variables")
        for u in signature.exogenous:
            if self.parents(u):
                raise InvalidModelError(f"exogenous variable {u!r} must be a root")
        for v in signature.endogenous:
            if not self.parents(v):
                raise InvalidModelError(f"endogenous variable {v!r} must have a parent")


@dataclass(frozen=True)
class Distribution:
    """Exact distribution over the full assignment space of ``variables``.

    Only positive masses are stored; every other assignment of the space has
    mass zero.  Masses must sum to exactly one.
    """

    variables: tuple[str, ...]
    ranges: Mapping[str, tuple[str, ...]]
    masses: Mapping[tuple[str, ...], Fraction]

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "ranges", _freeze({v: tuple(self.ranges[v]) for v in variables}))
        clean = {}
        total = ZERO
        for key, mass in self.masses.items():
            key = tuple(key)
            if len(key) != len(variables):
                raise InvalidModelError("assignment length does not match variables")
            for var, val in zip(variables, key):
                if val not in self.ranges[var]:
                    raise InvalidModelError(f"value {val!r} out of range for {var!r}")
            mass = as_probability(mass)
            if mass:
                clean[key] = clean.get(key, ZERO) + mass
                total += mass
        if total != ONE:
            raise InvalidModelError(f"masses sum to {total}, not 1")
        object.__setattr__(self, "masses", _freeze(clean))

    @classmethod
    def from_pairs(cls, variables: Sequence[str], ranges: Mapping[str, Sequence[str]],
                   pairs: Iterable[tuple[tuple[str, ...], Fraction]]) -> "Distribution":
        acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
        for key, mass in pairs:
            acc[tuple(key)] += mass
        return cls(tuple(variables), ranges, acc)

    def key(self, assignment: Assignment) -> tuple[str, ...]:
        return tuple(assignment[v] for v in self.variables)

    def mass(self, assignment: Assignment | tuple[str, ...]) -> Fraction:
        key = assignment if isinstance(assignment, tuple) else self.key(assignment)
        return self.masses.get(key, ZERO)

    def prob(self, event: Assignment) -> Fraction:
        """Probability of a partial assignment."""
        unknown = set(event) - set(self.variables)
        if unknown:
            raise InvalidModelError(f"unknown variables in event: {sorted(unknown)}")
        idx = [(self.variables.index(v), str(x)) for v, x in event.items()]
        return sum((m for k, m in self.masses.items() if all(k[i] == x for i, x in idx)), ZERO)

    def items(self) -> Iterator[tuple[dict[str, str], Fraction]]:
        """Positive-mass assignments with their masses."""
        for key, mass in self.masses.items():
            yield dict(zip(self.variables, key)), mass

    def space(self) -> Iterator[tuple[str, ...]]:
        return product(*(self.ranges[v] for v in self.variables))

    def dense(self) -> dict[tuple[str, ...], Fraction]:
        return {k: self.masses.get(k, ZERO) for k in self.space()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        if set(self.variables) != set(other.variables):
            return False
        if any(self.ranges[v] != other.ranges[v] for v in self.variables):
            return False
        perm = [other.variables.index(v) for v in self.variables]
        theirs = {tuple(k[i] for i in perm): m for k, m in other.masses.items()}
        return dict(self.masses) == theirs

    __hash__ = None  # type: ignore[assignment]


def marginal(dist: Distribution, variables: Sequence[str]) -> Distribution:
    """Exact marginal onto ``variables`` (in the given order)."""
    variables = tuple(variables)
    unknown = set(variables) - set(dist.variables)
    if unknown:
        raise InvalidModelError(f"unknown variables: {sorted(unknown)}")
    idx = [dist.variables.index(v) for v in variables]
    acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
    for key, mass in dist.masses.items():
        acc[tuple(key[i] for i in idx)] += mass
    return Distribution(variables, {v: dist.ranges[v] for v in variables}, acc)


def condition(dist: Distribution, evidence: Assignment) -> Distribution:
    """Bayesian conditioning on a partial assignment, renormalized exactly."""
    unknown = set(evidence) - set(dist.variables)
    if unknown:
        raise InvalidModelError(f"unknown variables in evidence: {sorted(unknown)}")
    idx = [(dist.variables.index(v), str(x)) for v, x in evidence.items()]
    kept = {k: m for k, m in dist.masses.items() if all(k[i] == x for i, x in idx)}
    total = sum(kept.values(), ZERO)
    if total == 0:
        raise UndefinedConditionalError(f"undefined conditional: P({dict(evidence)}) = 0")
    return Distribution(dist.variables, dist.ranges, {k: m / total for k, m in kept.items()})


def _check_table_row(row: Mapping[str, object], values: tuple[str, ...], what: str) -> dict[str, Fraction]:
    row = {str(k): as_probability(v) for k, v in row.items()}
    extra = set(row) - set(values)
    if extra:
        raise InvalidModelError(f"{what}: values out of range {sorted(extra)}")
    full = {v: row.get(v, ZERO) for v in values}
    total = sum(full.values(), ZERO)
    if total != ONE:
        raise InvalidModelError(f"{what}: row sums to {total}, not 1")
    return full


@dataclass(frozen=True)
class CausalModel:
    """Signature + compatible DAG + exogenous priors + endogenous conditional tables.

    ``cpds[X]`` maps a tuple of parent values (ordered as ``dag.parents(X)``)
    to a distribution over ``R(X)``; every parent assignment has a row.
    """

    signature: Signature
    dag: Dag
    priors: Mapping[str, Mapping[str, Fraction]]
    cpds: Mapping[str, Mapping[tuple[str, ...], Mapping[str, Fraction]]]

    def __post_init__(self) -> None:
        sig, dag = self.signature, self.dag
        dag.check_compatible(sig)
        if set(self.priors) != set(sig.exogenous):
            raise InvalidModelError("priors must be given for exactly the exogenous variables")
        priors = {u: _freeze(_check_table_row(self.priors[u], sig.ranges[u], f"prior of {u}"))
                  for u in sig.exogenous}
        if set(self.cpds) != set(sig.endogenous):
            raise InvalidModelError("tables must be given for exactly the endogenous variables")
        cpds = {}
        for x in sig.endogenous:
            pas = dag.parents(x)
            rows_in = {_row_key(pas, k): r for k, r in self.cpds[x].items()}
            rows = {}
            for pa in product(*(sig.ranges[p] for p in pas)):
                if pa not in rows_in:
                    raise InvalidModelError(f"table of {x} has no row for {dict(zip(pas, pa))}")
                rows[pa] = _freeze(_check_table_row(rows_in[pa], sig.ranges[x], f"row {pa} of {x}"))
            if len(rows_in) != len(rows):
                raise InvalidModelError(f"table of {x} has rows for out-of-range parent values")
            cpds[x] = _freeze(rows)
        object.__setattr__(self, "priors", _freeze(priors))
        object.__setattr__(self, "cpds", _freeze(cpds))

    def parents(self, x: str) -> tuple[str, ...]:
        return self.dag.parents(x)

    def cpd(self, x: str, value: str, parent_values: tuple[str, ...]) -> Fraction:
        return self.cpds[x][parent_values][value]

    def factor(self, var: str, assignment: Assignment) -> Fraction:
        """``P(var | pa_var)`` or ``P(var)`` read off a full assignment."""
        if var in self.priors:
            return self.priors[var][assignment[var]]
        pa = tuple(assignment[p] for p in self.dag.parents(var))
        return self.cpds[var][pa][assignment[var]]

    def is_deterministic(self) -> bool:
        return all(m in (ZERO, ONE) for rows in self.cpds.values()
                   for row in rows.values() for m in row.values())

    def replace_rows(self, updates: Mapping[str, Mapping[tuple[str, ...], Mapping[str, Fraction]]]) -> "CausalModel":
        cpds = {x: dict(rows) for x, rows in self.cpds.items()}
        for x, rows in updates.items():
            cpds[x].update(rows)
        return CausalModel(self.signature, self.dag, self.priors, cpds)


def _row_key(parents: tuple[str, ...], key) -> tuple[str, ...]:
    if isinstance(key, Mapping):
        if set(key) != set(parents):
            raise InvalidModelError(f"row key {dict(key)} does not match parents {parents}")
        return tuple(str(key[p]) for p in parents)
    if isinstance(key, str):
        key = (key,)
    key = tuple(str(k) for k in key)
    if len(key) != len(parents):
        raise InvalidModelError(f"row key {key} does not match parents {parents}")
    return key


def _weighted_worlds(model: CausalModel, do: Mapping[str, str],
                     fixed: Mapping[str, str] | None = None) -> Iterator[tuple[dict[str, str], Fraction]]:
    """Positive-mass full assignments of the truncated factorization."""
    sig = model.signature
    order = model.dag.topological_order
    fixed = fixed or {}
    current: dict[str, str] = {}

    def rec(i: int, weight: Fraction):
        if i == len(order):
            yield dict(current), weight
            return
        var = order[i]
        if var in do:
            current[var] = do[var]
            yield from rec(i + 1, weight)
            return
        if var in model.priors:
            table = model.priors[var]
        else:
            table = model.cpds[var][tuple(current[p] for p in model.dag.parents(var))]
        for value in sig.ranges[var]:
            if var in fixed and fixed[var] != value:
                continue
            p = table[value]
            if p:
                current[var] = value
                yield from rec(i + 1, weight * p)
        current.pop(var, None)

    yield from rec(0, ONE)


def joint(model: CausalModel, *, max_states: int | None = None) -> Distribution:
    """Joint over all variables: product of every table factor and prior."""
    return intervene(model, {}, max_states=max_states)


def intervene(model: CausalModel, do: Assignment, *, max_states: int | None = None) -> Distribution:
    """``P_do(X=x)`` by truncated factorization, over all variables."""
    sig = model.signature
    do = sig.check_assignment(do, allowed=sig.endogenous, what="intervention")
    sig.check_space(sig.variables, max_states)
    variables = sig.variables
    pairs = ((tuple(a[v] for v in variables), w) for a, w in _weighted_worlds(model, do))
    return Distribution.from_pairs(variables, sig.ranges, pairs)


# -- Markov diagnostics ------------------------------------------------------

@dataclass(frozen=True)
class MarkovViolation:
    """``P(variable=value | parents, context) != P(variable=value | parents)``.

    ``context`` assigns the variable's non-descendants that are not parents.
    """

    variable: str
    parents: Mapping[str, str]
    context: Mapping[str, str]
    value: str
    conditional: Fraction
    marginal: Fraction

    @property
    def complement_conditional(self) -> Fraction:
        return ONE - self.conditional

    @property
    def complement_marginal(self) -> Fraction:
        return ONE - self.marginal


@dataclass(frozen=True)
class MarkovReport:
    holds: bool
    violations: tuple[MarkovViolation, ...] = field(default=())

    def find(self, variable: str, parents: Assignment, context: Assignment, value: str) -> MarkovViolation | None:
        for v in self.violations:
            if (v.variable == variable and dict(v.parents) == dict(parents)
                    and dict(v.context) == dict(context) and v.value == value):
                return v
        return None

    def violating_variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for v in self.violations:
            seen.setdefault(v.variable, None)
        return tuple(seen)


def check_markov(signature: Signature, dag: Dag, full_joint: Distribution) -> MarkovReport:
    """Local Markov check of ``full_joint`` against ``dag``, violations listed exhaustively."""
    if set(full_joint.variables) != set(signature.variables):
        raise InvalidModelError("joint must range over exactly the signature's variables")
    if set(dag.nodes) != set(signature.variables):
        raise InvalidModelError("graph nodes differ from the signature's variables")
    violations: list[MarkovViolation] = []
    for x in dag.topological_order:
        pa = dag.parents(x)
        desc = dag.descendants(x)
        ctx = tuple(v for v in dag.nodes if v != x and v not in pa and v not in desc)
        if not ctx:
            continue
        m_ctx = marginal(full_joint, pa + ctx).masses
        m_all = marginal(full_joint, pa + ctx + (x,)).masses
        m_pa = marginal(full_joint, pa).masses
        m_pax = marginal(full_joint, pa + (x,)).masses
        for key, mass in m_ctx.items():
            pa_vals, ctx_vals = key[:len(pa)], key[len(pa):]
            for value in signature.ranges[x]:
                cond = m_all.get(key + (value,), ZERO) / mass
                marg = m_pax.get(pa_vals + (value,), ZERO) / m_pa[pa_vals]
                if cond != marg:
                    violations.append(MarkovViolation(
                        x, _freeze(dict(zip(pa, pa_vals))), _freeze(dict(zip(ctx, ctx_vals))),
                        value, cond, marg))
    return MarkovReport(not violations, tuple(violations))


def markov_factorization(signature: Signature, dag: Dag, full_joint: Distribution) -> dict[tuple[str, ...], Fraction]:
    """The product of the joint's own conditionals w.r.t. ``dag``, on the joint's support.

    Assignments whose parent configurations have zero mass get mass zero.
    """
    variables = full_joint.variables
    factors = {}
    for x in variables:
        pa = dag.parents(x)
        factors[x] = (pa, marginal(full_joint, pa).masses, marginal(full_joint, pa + (x,)).masses)
    out = {}
    for key in full_joint.space():
        a = dict(zip(variables, key))
        w = ONE
        for x, (pa, m_pa, m_pax) in factors.items():
            pv = tuple(a[p] for p in pa)
            den = m_pa.get(pv, ZERO)
            if not den:
                w = ZERO
                break
            w *= m_pax.get(pv + (a[x],), ZERO) / den
            if not w:
                break
        if w:
            out[key] = w
    return out
