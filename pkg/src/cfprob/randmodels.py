"""Random small models with exact rational tables, for equivalence testing."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .events import Atom
from .model import CausalModel, Dag, Signature, _weighted_worlds


def _row(rng: random.Random, values: tuple[str, ...], zero_rate: float) -> dict[str, Fraction]:
    while True:
        w = [0 if rng.random() < zero_rate else rng.randint(1, 6) for _ in values]
        if sum(w):
            total = sum(w)
            return {v: Fraction(x, total) for v, x in zip(values, w)}


def random_model(rng: random.Random, *, max_endogenous: int = 4, max_values: int = 3,
                 max_exogenous: int = 2, binary: bool = False, max_functions: int = 729,
                 max_parents: int | None = None, zero_rate: float = 0.15) -> CausalModel:
    """A random causal model.

    Parents are drawn so that no endogenous variable has more than
    ``max_functions`` response functions; every endogenous variable keeps at
    least one parent.
    """
    def values() -> tuple[str, ...]:
        n = 2 if binary else rng.randint(2, max_values)
        return tuple(str(i) for i in range(n))

    n_exo = rng.randint(1, max_exogenous)
    n_endo = rng.randint(2, max_endogenous)
    exo = tuple(f"U{i}" for i in range(n_exo))
    endo = tuple("ABCDEFGH"[i] for i in range(n_endo))
    ranges = {v: values() for v in exo + endo}
    edges = []
    parents: dict[str, list[str]] = {}
    for i, x in enumerate(endo):
        pool = list(exo) + list(endo[:i])
        rng.shuffle(pool)
        chosen: list[str] = []
        for cand in pool:
            trial = chosen + [cand]
            configs = 1
            for p in trial:
                configs *= len(ranges[p])
            if len(ranges[x]) ** configs > max_functions:
                continue
            if max_parents is not None and len(trial) > max_parents:
                break
            if not chosen or rng.random() < 0.5:
                chosen = trial
        if not chosen:  # one small parent always fits the default caps
            chosen = [min(pool, key=lambda p: len(ranges[p]))]
        parents[x] = chosen
        edges.extend((p, x) for p in chosen)
    sig = Signature(exo, endo, ranges)
    dag = Dag.from_edges(sig.variables, edges)
    priors = {u: _row(rng, ranges[u], 0.0) for u in exo}
    cpds = {}
    for x in endo:
        pas = dag.parents(x)
        cpds[x] = {cfg: _row(rng, ranges[x], zero_rate) for cfg in product(*(ranges[p] for p in pas))}
    return CausalModel(sig, dag, priors, cpds)


def random_world(rng: random.Random, model: CausalModel) -> dict[str, str]:
    """A positive-probability full assignment, drawn with its own probability."""
    worlds = list(_weighted_worlds(model, {}))
    r = Fraction(rng.random()).limit_denominator(10**9)
    acc = Fraction(0)
    for w, p in worlds:
        acc += p
        if r < acc:
            return w
    return worlds[-1][0]


def random_do(rng: random.Random, model: CausalModel, *, min_size: int = 0) -> dict[str, str]:
    sig = model.signature
    k = rng.randint(min_size, max(min_size, len(sig.endogenous) - 1))
    names = rng.sample(sig.endogenous, k)
    return {x: rng.choice(sig.ranges[x]) for x in names}


def random_target(rng: random.Random, model: CausalModel, *, full: bool = False) -> dict[str, str]:
    sig = model.signature
    names = list(sig.endogenous) if full else rng.sample(sig.endogenous, rng.randint(1, len(sig.endogenous)))
    return {x: rng.choice(sig.ranges[x]) for x in names}


def random_atoms(rng: random.Random, model: CausalModel, *, max_atoms: int = 3) -> list[Atom]:
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        atoms.append(Atom.of(random_target(rng, model), random_do(rng, model)))
    return atoms


def random_evidence(rng: random.Random, model: CausalModel) -> dict[str, str]:
    """A partial endogenous assignment taken from a sampled world (so it has positive mass)."""
    world = random_world(rng, model)
    sig = model.signature
    names = rng.sample(sig.endogenous, rng.randint(1, len(sig.endogenous)))
    return {x: world[x] for x in names}
