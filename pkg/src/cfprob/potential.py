"""Potential-outcome SCMs (the N semantics) and the GH canonical SCM.

The PO-SCM adds one exogenous variable ``X[pa]`` per endogenous variable and
parent configuration, with prior ``P(X | pa)``; all of them are independent,
and ``X`` simply copies the one selected by its realized parents.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .canonical import canonical_frame, canonical_scm, unique_name
from .errors import ModelTooLargeError, UndefinedConditionalError
from .events import Atom
from .exact import DEFAULT_MAX_STATES, ONE
from .model import Assignment, CausalModel, Dag, Signature, _freeze
from .scm import Equation, Scm, World, basic_cf, complex_cf


@dataclass(frozen=True)
class PoVariableId:
    child: str
    parent_values: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class PotentialOutcomeEquation(Equation):
    """``X = X[Pa_X]``: read the potential outcome picked by the parents."""

    parents: tuple[str, ...]
    base_parents: tuple[str, ...]
    po_names: Mapping[tuple[str, ...], str]

    def __call__(self, values) -> str:
        return values[self.po_names[tuple(values[p] for p in self.base_parents)]]

    def outcomes(self, configs, aux, priors):
        po_set = set(self.po_names.values())
        other = [a for a in aux if a not in po_set]
        free = set(aux) & po_set
        acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
        supports = [[(v, p) for v, p in priors[a].items() if p] for a in other]
        for combo in product(*supports):
            weight = ONE
            extra = {}
            for a, (v, p) in zip(other, combo):
                weight *= p
                extra[a] = v
            full = [{**c, **extra} for c in configs]
            names = [self.po_names[tuple(f[p] for p in self.base_parents)] for f in full]
            # Distinct free potential outcomes are independent; each is drawn once.
            drawn = [nm for nm in dict.fromkeys(names) if nm in free]
            po_supports = [[(v, p) for v, p in priors[nm].items() if p] for nm in drawn]
            for pick in product(*po_supports):
                w = weight
                chosen = {}
                for nm, (v, p) in zip(drawn, pick):
                    w *= p
                    chosen[nm] = v
                out = tuple(chosen[nm] if nm in chosen else f[nm] for nm, f in zip(names, full))
                acc[out] += w
        return dict(acc)


@dataclass(frozen=True)
class PoScm:
    base: CausalModel
    scm: Scm
    variables: Mapping[str, PoVariableId]

    def name(self, child: str, parent_values: tuple[str, ...]) -> str:
        for nm, vid in self.variables.items():
            if vid.child == child and tuple(v for _, v in vid.parent_values) == tuple(parent_values):
                return nm
        raise KeyError((child, parent_values))

    def prior(self, child: str, parent_values: tuple[str, ...] | Mapping[str, str]) -> Mapping[str, Fraction]:
        if isinstance(parent_values, Mapping):
            parent_values = tuple(parent_values[p] for p in self.base.dag.parents(child))
        return self.scm.priors[self.name(child, tuple(parent_values))]


def po_name(child: str, parents: tuple[str, ...], config: tuple[str, ...]) -> str:
    return f"{child}[{','.join(f'{p}={v}' for p, v in zip(parents, config))}]"


def build_po_scm(model: CausalModel, *, max_variables: int | None = None) -> PoScm:
    """The PO-SCM of ``model``."""
    sig, dag = model.signature, model.dag
    cap = DEFAULT_MAX_STATES if max_variables is None else max_variables
    count = sum(sig.space_size(dag.parents(x)) for x in sig.endogenous)
    if count > cap:
        raise ModelTooLargeError(f"{count} potential-outcome variables exceed cap {cap}")
    taken = set(sig.variables)
    ranges = dict(sig.ranges)
    priors = dict(model.priors)
    ids: dict[str, PoVariableId] = {}
    edges = set(dag.edges)
    equations = {}
    for x in sig.endogenous:
        pas = dag.parents(x)
        names = {}
        for cfg, row in model.cpds[x].items():
            nm = unique_name(po_name(x, pas, cfg), taken)
            taken.add(nm)
            names[cfg] = nm
            ids[nm] = PoVariableId(x, tuple(zip(pas, cfg)))
            ranges[nm] = sig.ranges[x]
            priors[nm] = row
            edges.add((nm, x))
        po_vars = tuple(names.values())
        equations[x] = PotentialOutcomeEquation(pas + po_vars, pas, _freeze(names))
    exo = sig.exogenous + tuple(ids)
    new_sig = Signature(exo, sig.endogenous, ranges)
    new_dag = Dag(exo + sig.endogenous, frozenset(edges))
    return PoScm(model, Scm(new_sig, new_dag, equations, priors), _freeze(ids))


def world_mass(model: CausalModel, world: Assignment) -> Fraction:
    """``P(u, v)`` of a full assignment in the base model."""
    sig = model.signature
    world = sig.check_assignment(world, what="world")
    missing = set(sig.variables) - set(world)
    if missing:
        raise UndefinedConditionalError(f"world misses {sorted(missing)}")
    return math.prod((model.factor(v, world) for v in sig.variables), start=ONE)


def _world_dict(world) -> dict[str, str]:
    return world.as_dict() if isinstance(world, World) else dict(world)


def n_complex(model: CausalModel, atoms: Iterable[Atom], given: Assignment | None = None,
              *, po: PoScm | None = None, max_states: int | None = None) -> Fraction:
    """Counterfactual conjunction evaluated in the PO-SCM."""
    po = po or build_po_scm(model)
    return complex_cf(po.scm, list(atoms), given, max_states=max_states)


def n_basic(model: CausalModel, do: Assignment, target: Assignment, world,
            *, po: PoScm | None = None, max_states: int | None = None) -> Fraction:
    """``P^N(target under do | u, v)`` with only the base world ``(u, v)`` observed.

    The potential outcomes themselves stay uncertain, except the ones the
    world realizes; the result is usually not 0 or 1.
    """
    w = _world_dict(world)
    if world_mass(model, w) == 0:
        raise UndefinedConditionalError("undefined conditional: world has probability 0")
    return n_complex(model, [Atom.of(target, do)], w, po=po, max_states=max_states)


def n_basic_extended(po: PoScm, do: Assignment, target: Assignment, u_n: Assignment,
                     v: Assignment) -> Fraction:
    """The extremal value given a full PO-SCM exogenous setting ``u_n``."""
    return basic_cf(po.scm, target, do, World(u_n, v))


def n_conditional(model: CausalModel, do: Assignment, target: Assignment, given: Assignment | None,
                  *, po: PoScm | None = None, max_states: int | None = None) -> Fraction:
    return n_complex(model, [Atom.of(target, do)], given, po=po, max_states=max_states)


def gh_response_distributions(model: CausalModel, frame=None) -> dict[str, dict[str, Fraction]]:
    frame = frame or canonical_frame(model)
    out = {}
    for x in model.signature.endogenous:
        rows = model.cpds[x]
        out[x] = {f.label: math.prod((rows[c][y] for c, y in zip(f.configs, f.outputs)), start=ONE)
                  for f in frame.response_ranges[x]}
    return out


def build_gh_scm(model: CausalModel, *, max_functions: int | None = None) -> Scm:
    """Canonical SCM whose response law is the product of the conditional rows."""
    frame = canonical_frame(model, max_functions=max_functions)
    return canonical_scm(frame, gh_response_distributions(model, frame))


def po_exogenous_size(po: PoScm) -> int:
    return po.scm.signature.space_size(po.scm.signature.exogenous)


__all__ = ["PoVariableId", "PoScm", "PotentialOutcomeEquation", "build_po_scm", "n_basic",
           "n_basic_extended", "n_complex", "n_conditional", "build_gh_scm", "world_mass",
           "gh_response_distributions", "po_exogenous_size"]
