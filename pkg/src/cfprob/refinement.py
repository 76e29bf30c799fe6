"""Actualized refinements and the B semantics.

Given an actual world ``(u, v)``, every conditional row that the world
realizes is replaced by a point mass on the realized value; rows the world
never visits are left alone.  Counterfactuals are then ordinary interventions
in the refined model, conditioned on ``U = u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidModelError, UndefinedConditionalError
from .events import Atom, merge_pairs, validate_given
from .exact import ONE, ZERO
from .model import Assignment, CausalModel, _weighted_worlds, condition, intervene
from .potential import world_mass
from .scm import World


@dataclass(frozen=True)
class RefinedModel:
    base: CausalModel
    u: Mapping[str, str]
    v: Mapping[str, str]
    model: CausalModel

    def world(self) -> World:
        return World(self.u, self.v)


def _split_world(model: CausalModel, world) -> tuple[dict[str, str], dict[str, str]]:
    sig = model.signature
    w = world.as_dict() if isinstance(world, World) else dict(world)
    w = sig.check_assignment(w, what="world")
    if set(w) != set(sig.variables):
        raise InvalidModelError("a world must assign every variable")
    return ({k: w[k] for k in sig.exogenous}, {k: w[k] for k in sig.endogenous})


def actualize(model: CausalModel, world) -> RefinedModel:
    u, v = _split_world(model, world)
    if world_mass(model, {**u, **v}) == 0:
        raise UndefinedConditionalError("undefined refinement: world has probability 0")
    actual = {**u, **v}
    updates = {}
    for x in model.signature.endogenous:
        pa = tuple(actual[p] for p in model.dag.parents(x))
        updates[x] = {pa: {val: (ONE if val == v[x] else ZERO) for val in model.signature.ranges[x]}}
    return RefinedModel(model, u, v, model.replace_rows(updates))


def b_basic_def(model: CausalModel, do: Assignment, target: Assignment, world) -> Fraction:
    """Refine, intervene, condition on ``U = u`` and read off ``target``."""
    refined = actualize(model, world)
    sig = model.signature
    do = sig.check_assignment(do, allowed=sig.endogenous, what="intervention")
    target = sig.check_assignment(target, allowed=sig.endogenous, what="target")
    post = condition(intervene(refined.model, do), dict(refined.u))
    return post.prob(target)


def b_basic_case(model: CausalModel, do: Assignment, target: Assignment, world) -> tuple[int, Fraction]:
    """Closed form for a full endogenous target; returns ``(case, value)``."""
    u, v = _split_world(model, world)
    if world_mass(model, {**u, **v}) == 0:
        raise UndefinedConditionalError("undefined refinement: world has probability 0")
    sig, dag = model.signature, model.dag
    do = sig.check_assignment(do, allowed=sig.endogenous, what="intervention")
    vstar = sig.check_assignment(target, allowed=sig.endogenous, what="target")
    if set(vstar) != set(sig.endogenous):
        raise InvalidModelError("the closed form needs a full endogenous target")
    if any(vstar[k] != x for k, x in do.items()):
        return 1, ZERO
    rest = [y for y in sig.endogenous if y not in do]
    changed = []
    for y in rest:
        epa = [p for p in dag.parents(y) if p in vstar]
        if all(vstar[p] == v[p] for p in epa):
            if vstar[y] != v[y]:
                return 2, ZERO
        else:
            changed.append(y)
    if not changed:
        return 3, ONE
    value = ONE
    star = {**u, **vstar}
    for y in changed:
        value *= model.factor(y, star)
    return 4, value


def b_basic_closed(model: CausalModel, do: Assignment, target: Assignment, world) -> Fraction:
    return b_basic_case(model, do, target, world)[1]


def b_atom_factor(model: CausalModel, actual: Mapping[str, str], targets: Mapping[str, str],
                  do: Mapping[str, str]) -> Fraction:
    """``P^B(targets under do | u, v)`` for a possibly partial target."""
    sig, dag = model.signature, model.dag
    order = [x for x in dag.topological_order if x in model.cpds]
    values = {k: actual[k] for k in sig.exogenous}

    def rec(i: int) -> Fraction:
        if i == len(order):
            return ONE
        x = order[i]
        want = targets.get(x)
        if x in do:
            if want is not None and want != do[x]:
                return ZERO
            values[x] = do[x]
            return rec(i + 1)
        pas = dag.parents(x)
        pa = tuple(values[p] for p in pas)
        if all(values[p] == actual[p] for p in pas):
            row = {actual[x]: ONE}
        else:
            row = model.cpds[x][pa]
        total = ZERO
        for val, p in row.items():
            if not p or (want is not None and want != val):
                continue
            values[x] = val
            total += p * rec(i + 1)
        return total

    return rec(0)


def b_joint(model: CausalModel, atoms: Iterable[Atom], given: Assignment | None = None) -> Fraction:
    """``Sum over worlds of P(u,v) * prod_i P^B(atom_i | u,v)`` restricted to ``given``."""
    sig = model.signature
    atoms = list(atoms)
    given_d = merge_pairs(validate_given(sig, given))
    if given_d is None:
        return ZERO
    parts = []
    for atom in atoms:
        atom.validate(sig)
        t = atom.target_dict()
        if t is None:
            return ZERO
        parts.append((t, atom.do_dict()))
    total = ZERO
    for world, weight in _weighted_worlds(model, {}, fixed=given_d):
        factor = weight
        for t, do in parts:
            factor *= b_atom_factor(model, world, t, do)
            if not factor:
                break
        total += factor
    return total


def b_complex(model: CausalModel, atoms: Iterable[Atom], given: Assignment | None = None) -> Fraction:
    atoms = list(atoms)
    num = b_joint(model, atoms, given)
    if not given:
        return num
    den = b_joint(model, [], given)
    if den == 0:
        raise UndefinedConditionalError(f"undefined conditional: P({dict(given)}) = 0")
    return num / den


def b_basic(model: CausalModel, do: Assignment, target: Assignment, world) -> Fraction:
    """Basic B counterfactual given a full world, for a possibly partial target."""
    u, v = _split_world(model, world)
    if world_mass(model, {**u, **v}) == 0:
        raise UndefinedConditionalError("undefined refinement: world has probability 0")
    sig = model.signature
    do = sig.check_assignment(do, allowed=sig.endogenous, what="intervention")
    target = sig.check_assignment(target, allowed=sig.endogenous, what="target")
    return b_atom_factor(model, {**u, **v}, target, do)


def b_conditional(model: CausalModel, do: Assignment, target: Assignment, given: Assignment | None) -> Fraction:
    """Ratio form ``P^B(target under do, given) / P^B(given)``."""
    return b_complex(model, [Atom.of(target, do)], given)
