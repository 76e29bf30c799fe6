"""Deterministic structural causal models and Pearl's counterfactual semantics.

Counterfactual conjunctions are evaluated by a lazy multi-world enumeration:
the actual world and one counterfactual world per distinct intervention are
solved side by side in topological order.  Exogenous variables with a single
child that the query does not mention (response variables, potential-outcome
variables) are never enumerated jointly; the child's equation reports the
joint distribution of its outputs over the parent configurations that the
worlds actually realize.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InvalidModelError, ModelTooLargeError, UndefinedConditionalError
from .events import Atom, merge_pairs, validate_given
from .exact import DEFAULT_MAX_STATES, ONE, ZERO
from .model import Assignment, CausalModel, Dag, Signature, _check_table_row, _freeze

Priors = Mapping[str, Mapping[str, Fraction]]


class Equation:
    """Structural equation ``X = f(parents)``."""

    parents: tuple[str, ...]

    def __call__(self, values: Assignment) -> str:
        raise NotImplementedError

    def outcomes(self, configs: Sequence[Mapping[str, str]], aux: Sequence[str],
                 priors: Priors) -> dict[tuple[str, ...], Fraction]:
        """Joint law of ``(f(c_1, a), ..., f(c_k, a))`` with ``a`` drawn from the ``aux`` priors.

        ``configs`` fix every parent except the ``aux`` ones.  Subclasses with
        structure override this to avoid the full product over ``aux``.
        """
        acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
        supports = [[(v, p) for v, p in priors[a].items() if p] for a in aux]
        for combo in product(*supports):
            weight = ONE
            extra = {}
            for a, (v, p) in zip(aux, combo):
                weight *= p
                extra[a] = v
            acc[tuple(self({**c, **extra}) for c in configs)] += weight
        return dict(acc)


@dataclass(frozen=True)
class TableEquation(Equation):
    """Equation given as an explicit table over the parents' joint range."""

    parents: tuple[str, ...]
    table: Mapping[tuple[str, ...], str]

    def __call__(self, values: Assignment) -> str:
        return self.table[tuple(values[p] for p in self.parents)]


@dataclass(frozen=True)
class Scm:
    signature: Signature
    dag: Dag
    equations: Mapping[str, Equation]
    priors: Priors

    def __post_init__(self) -> None:
        sig, dag = self.signature, self.dag
        dag.check_compatible(sig)
        if set(self.equations) != set(sig.endogenous):
            raise InvalidModelError("equations must be given for exactly the endogenous variables")
        for x, eq in self.equations.items():
            if set(eq.parents) != set(dag.parents(x)):
                raise InvalidModelError(f"equation of {x} reads {eq.parents}, graph parents are {dag.parents(x)}")
            if isinstance(eq, TableEquation):
                _check_equation_table(sig, x, eq)
        if set(self.priors) != set(sig.exogenous):
            raise InvalidModelError("priors must be given for exactly the exogenous variables")
        priors = {u: _freeze(_check_table_row(self.priors[u], sig.ranges[u], f"prior of {u}"))
                  for u in sig.exogenous}
        object.__setattr__(self, "priors", _freeze(priors))
        object.__setattr__(self, "equations", _freeze(self.equations))

    @classmethod
    def from_tables(cls, signature: Signature, dag: Dag,
                    tables: Mapping[str, Mapping], priors: Priors) -> "Scm":
        eqs = {}
        for x, table in tables.items():
            pas = dag.parents(x)
            eqs[x] = TableEquation(pas, _freeze({_key(pas, k): str(v) for k, v in table.items()}))
        return cls(signature, dag, eqs, priors)

    @property
    def endogenous_order(self) -> tuple[str, ...]:
        endo = set(self.signature.endogenous)
        return tuple(v for v in self.dag.topological_order if v in endo)

    def prior_mass(self, u: Assignment) -> Fraction:
        return math.prod((self.priors[n][u[n]] for n in self.signature.exogenous), start=ONE)


def _key(parents: tuple[str, ...], key) -> tuple[str, ...]:
    if isinstance(key, Mapping):
        return tuple(str(key[p]) for p in parents)
    if isinstance(key, str):
        key = (key,)
    return tuple(str(k) for k in key)


def _check_equation_table(sig: Signature, x: str, eq: TableEquation) -> None:
    space = list(product(*(sig.ranges[p] for p in eq.parents)))
    if len(eq.table) != len(space) or any(k not in eq.table for k in space):
        raise InvalidModelError(f"equation table of {x} must cover every parent assignment exactly once")
    for k, v in eq.table.items():
        if v not in sig.ranges[x]:
            raise InvalidModelError(f"equation of {x} yields out-of-range value {v!r} at {k}")


@dataclass(frozen=True)
class World:
    """An actual world: full exogenous ``u`` and full endogenous ``v``."""

    u: Mapping[str, str]
    v: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", _freeze({k: str(x) for k, x in self.u.items()}))
        object.__setattr__(self, "v", _freeze({k: str(x) for k, x in self.v.items()}))

    def as_dict(self) -> dict[str, str]:
        return {**self.u, **self.v}


def _full_exogenous(scm: Scm, u: Assignment) -> dict[str, str]:
    sig = scm.signature
    u = sig.check_assignment(u, allowed=sig.exogenous, what="exogenous setting")
    missing = set(sig.exogenous) - set(u)
    if missing:
        raise InvalidModelError(f"exogenous setting misses {sorted(missing)}")
    return u


def solve_under(scm: Scm, u: Assignment, do: Assignment) -> dict[str, str]:
    """Unique solution of the equations with ``do`` variables clamped."""
    sig = scm.signature
    values = _full_exogenous(scm, u)
    do = sig.check_assignment(do, allowed=sig.endogenous, what="intervention")
    for x in scm.endogenous_order:
        values[x] = do[x] if x in do else scm.equations[x](values)
    return {x: values[x] for x in sig.endogenous}


def solve(scm: Scm, u: Assignment) -> dict[str, str]:
    return solve_under(scm, u, {})


def basic_cf(scm: Scm, target: Assignment, do: Assignment, world: World) -> Fraction:
    """``P_do(V = target | U = u)``: 1 if the mutilated solution at ``u`` matches, else 0."""
    u = _full_exogenous(scm, world.u)
    if scm.prior_mass(u) == 0:
        raise UndefinedConditionalError("undefined conditional: world has zero prior mass")
    if solve(scm, u) != dict(world.v):
        raise UndefinedConditionalError("undefined conditional: v is not the solution at u")
    target = scm.signature.check_assignment(target, allowed=scm.signature.endogenous, what="target")
    solved = solve_under(scm, u, do)
    return ONE if all(solved[k] == v for k, v in target.items()) else ZERO


def event_probability(scm: Scm, atoms: Iterable[Atom], given: Assignment | None = None,
                      *, max_states: int | None = None) -> Fraction:
    """Joint probability of a conjunction of atoms and a factual event."""
    sig, dag = scm.signature, scm.dag
    atoms = list(atoms)
    given_pairs = validate_given(sig, given)
    given_d = merge_pairs(given_pairs)
    if given_d is None:
        return ZERO
    factual = {k: v for k, v in given_d.items() if k not in scm.priors}
    exo_given = {k: v for k, v in given_d.items() if k in scm.priors}
    scen_do: list[dict[str, str]] = [{}]
    scen_targets: list[dict[str, str]] = [factual]
    for atom in atoms:
        atom.validate(sig)
        t = atom.target_dict()
        if t is None:
            return ZERO
        do = atom.do_dict()
        try:
            s = scen_do.index(do)
        except ValueError:
            scen_do.append(do)
            scen_targets.append({})
            s = len(scen_do) - 1
        merged = merge_pairs(list(scen_targets[s].items()) + list(t.items()))
        if merged is None:
            return ZERO
        scen_targets[s] = merged
    # Clamped variables are known up front; reject contradictions immediately.
    for do, targets in zip(scen_do, scen_targets):
        if any(targets.get(k, v) != v for k, v in do.items()):
            return ZERO

    aux = {u for u in sig.exogenous if len(dag.children(u)) == 1 and u not in exo_given}
    explicit = [u for u in sig.exogenous if u not in aux]
    supports = [[(val, p) for val, p in scm.priors[u].items()
                 if p and exo_given.get(u, val) == val] for u in explicit]
    cap = DEFAULT_MAX_STATES if max_states is None else max_states
    size = math.prod(len(s) for s in supports)
    if size > cap:
        raise ModelTooLargeError(f"{size} exogenous settings exceed cap {cap}")

    order = scm.endogenous_order
    plan = []
    for x in order:
        eq = scm.equations[x]
        npa = tuple(p for p in eq.parents if p not in aux)
        apa = tuple(p for p in eq.parents if p in aux)
        plan.append((x, eq, npa, apa))
    n = len(scen_do)
    cache: dict = {}

    def rec(i: int, states: list[dict[str, str]]) -> Fraction:
        if i == len(plan):
            return ONE
        x, eq, npa, apa = plan[i]
        free = []
        for s in range(n):
            if x in scen_do[s]:
                states[s][x] = scen_do[s][x]
            else:
                free.append(s)
        if not free:
            return rec(i + 1, states)
        cfg = {s: tuple(states[s][p] for p in npa) for s in free}
        distinct = tuple(dict.fromkeys(cfg.values()))
        key = (x, distinct)
        dist = cache.get(key)
        if dist is None:
            dist = eq.outcomes([dict(zip(npa, c)) for c in distinct], apa, scm.priors)
            cache[key] = dist
        total = ZERO
        for outputs, p in dist.items():
            if not p:
                continue
            vals = dict(zip(distinct, outputs))
            ok = True
            for s in free:
                v = vals[cfg[s]]
                want = scen_targets[s].get(x)
                if want is not None and want != v:
                    ok = False
                    break
                states[s][x] = v
            if ok:
                total += p * rec(i + 1, states)
        return total

    total = ZERO
    for combo in product(*supports):
        weight = ONE
        base = {}
        for u, (val, p) in zip(explicit, combo):
            weight *= p
            base[u] = val
        total += weight * rec(0, [dict(base) for _ in range(n)])
    return total


def complex_cf(scm: Scm, atoms: Iterable[Atom], given: Assignment | None = None,
               *, max_states: int | None = None) -> Fraction:
    """Probability of a conjunction of counterfactual atoms, optionally conditioned.

    Each atom contributes an extremal factor per exogenous setting; the
    conditional form divides by the probability of ``given``.
    """
    atoms = list(atoms)
    num = event_probability(scm, atoms, given, max_states=max_states)
    if not given:
        return num
    den = event_probability(scm, [], given, max_states=max_states)
    if den == 0:
        raise UndefinedConditionalError(f"undefined conditional: P({dict(given)}) = 0")
    return num / den


def induced_model(scm: Scm, *, max_states: int | None = None) -> CausalModel:
    """The causal model with the SCM's priors and degenerate conditional tables."""
    sig, dag = scm.signature, scm.dag
    cpds = {}
    for x in sig.endogenous:
        pas = dag.parents(x)
        sig.check_space(pas, max_states)
        rows = {}
        for pa in product(*(sig.ranges[p] for p in pas)):
            out = scm.equations[x](dict(zip(pas, pa)))
            rows[pa] = {val: (ONE if val == out else ZERO) for val in sig.ranges[x]}
        cpds[x] = rows
    return CausalModel(sig, dag, scm.priors, cpds)


def interventional(scm: Scm, do: Assignment, variables: Sequence[str] | None = None,
                   *, max_states: int | None = None) -> dict[tuple[str, ...], Fraction]:
    """``P_do(variables)`` over endogenous variables, via the lazy evaluator."""
    sig = scm.signature
    variables = tuple(sig.endogenous if variables is None else variables)
    sig.check_space(variables, max_states)
    out = {}
    for key in product(*(sig.ranges[v] for v in variables)):
        atom = Atom(tuple(zip(variables, key)), tuple(do.items()))
        p = event_probability(scm, [atom], max_states=max_states)
        if p:
            out[key] = p
    return out
