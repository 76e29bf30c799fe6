"""Coarsenings of exogenous variables and the structures they induce.

A coarsening merges a block of low-level exogenous variables into one new
variable through a surjective value map.  The induced object is kept as an
:class:`InducedStructure` because it need not be a valid causal model: it can
be nondeterministic where the low level was deterministic, or fail the Markov
condition for the graph one would naturally draw.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

from .errors import InvalidModelError
from .exact import ZERO
from .model import (CausalModel, Dag, Distribution, MarkovReport, Signature, _freeze,
                    check_markov, joint, marginal)
from .scm import Scm, induced_model


@dataclass(frozen=True)
class Block:
    """``new = tau(*sources)`` with ``tau`` given as a table or a callable."""

    new: str
    sources: tuple[str, ...]
    values: tuple[str, ...]
    tau: Mapping[tuple[str, ...], str]


@dataclass(frozen=True)
class Coarsening:
    blocks: tuple[Block, ...]

    @classmethod
    def build(cls, low: Signature, spec: Mapping[str, tuple[Sequence[str], Sequence[str], Callable | Mapping]]) -> "Coarsening":
        """``spec[new] = (sources, new_values, tau)``; ``tau`` maps source value tuples."""
        blocks = []
        for new, (sources, values, tau) in spec.items():
            sources = tuple(sources)
            table = {}
            for key in product(*(low.ranges[s] for s in sources)):
                table[key] = str(tau(*key) if callable(tau) else tau[key if len(key) > 1 else key[0]])
            blocks.append(Block(new, sources, tuple(str(v) for v in values), _freeze(table)))
        return cls(tuple(blocks))

    def validate(self, low: Signature) -> None:
        seen: set[str] = set()
        for b in self.blocks:
            for s in b.sources:
                if not low.is_exogenous(s):
                    raise InvalidModelError(f"only exogenous variables can be coarsened, got {s}")
                if s in seen:
                    raise InvalidModelError(f"{s} appears in two blocks")
                seen.add(s)
            space = set(product(*(low.ranges[s] for s in b.sources)))
            if set(b.tau) != space:
                raise InvalidModelError(f"map for {b.new} is not total on its sources")
            image = set(b.tau.values())
            if not image <= set(b.values):
                raise InvalidModelError(f"map for {b.new} leaves its declared range")
            if image != set(b.values):
                missing = [v for v in b.values if v not in image]
                raise InvalidModelError(f"map for {b.new} is not surjective: misses {missing}")

    def new_signature(self, low: Signature) -> Signature:
        covered = {s for b in self.blocks for s in b.sources}
        exo: list[str] = []
        ranges = {}
        done: set[str] = set()
        # Each new variable takes the position of its first source.
        for u in low.exogenous:
            if u not in covered:
                exo.append(u)
                ranges[u] = low.ranges[u]
                continue
            b = next(b for b in self.blocks if u in b.sources)
            if b.new not in done:
                done.add(b.new)
                exo.append(b.new)
                ranges[b.new] = b.values
        for x in low.endogenous:
            ranges[x] = low.ranges[x]
        return Signature(tuple(exo), low.endogenous, ranges)

    @classmethod
    def identity(cls, low: Signature) -> "Coarsening":
        return cls(tuple(Block(u, (u,), low.ranges[u], _freeze({(v,): v for v in low.ranges[u]}))
                         for u in low.exogenous))


@dataclass(frozen=True)
class InducedStructure:
    signature: Signature
    dag: Dag
    joint: Distribution
    tables: Mapping[str, Mapping[tuple[str, ...], Mapping[str, Fraction]]]
    markov: MarkovReport
    deterministic: Mapping[str, bool]

    def conditional(self, x: str, value: str, parent_values: Mapping[str, str]) -> Fraction:
        pa = tuple(str(parent_values[p]) for p in self.dag.parents(x))
        return self.tables[x][pa][value]

    def promote(self) -> CausalModel:
        """The causal model with these tables; only valid when Markov holds and every row is defined."""
        if not self.markov.holds:
            raise InvalidModelError("induced structure violates the Markov condition for its graph")
        sig = self.signature
        priors = {u: {v: marginal(self.joint, (u,)).mass((v,)) for v in sig.ranges[u]} for u in sig.exogenous}
        for x in sig.endogenous:
            if len(self.tables[x]) != sig.space_size(self.dag.parents(x)):
                raise InvalidModelError(f"conditional table of {x} is undefined on zero-mass parent values")
        return CausalModel(sig, self.dag, priors, self.tables)


def coarsen(low: Scm | CausalModel, tau: Coarsening, candidate_dag: Dag, *,
            max_states: int | None = None) -> InducedStructure:
    """Push the low-level joint through ``tau`` and diagnose the result against ``candidate_dag``."""
    model = induced_model(low, max_states=max_states) if isinstance(low, Scm) else low
    sig = model.signature
    tau.validate(sig)
    new_sig = tau.new_signature(sig)
    candidate_dag.check_compatible(new_sig)
    low_joint = joint(model, max_states=max_states)
    new_vars = new_sig.variables
    blocks = {b.new: b for b in tau.blocks}
    acc: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
    for a, p in low_joint.items():
        key = []
        for v in new_vars:
            if v in blocks:
                b = blocks[v]
                key.append(b.tau[tuple(a[s] for s in b.sources)])
            else:
                key.append(a[v])
        acc[tuple(key)] += p
    new_joint = Distribution(new_vars, {v: new_sig.ranges[v] for v in new_vars}, dict(acc))
    for u in new_sig.exogenous:
        m = marginal(new_joint, (u,))
        zero = [v for v in new_sig.ranges[u] if not m.mass((v,))]
        if zero:
            raise InvalidModelError(f"new value(s) {zero} of {u} have probability zero")
    tables: dict[str, dict] = {}
    deterministic = {}
    for x in new_sig.endogenous:
        pa = candidate_dag.parents(x)
        m_pa = marginal(new_joint, pa).masses
        m_pax = marginal(new_joint, pa + (x,)).masses
        rows = {}
        for pv, mass in sorted(m_pa.items(), key=lambda kv: _order_key(new_sig, pa, kv[0])):
            rows[pv] = _freeze({val: m_pax.get(pv + (val,), ZERO) / mass for val in new_sig.ranges[x]})
        tables[x] = _freeze(rows)
        deterministic[x] = all(p in (0, 1) for row in rows.values() for p in row.values())
    report = check_markov(new_sig, candidate_dag, new_joint)
    return InducedStructure(new_sig, candidate_dag, new_joint, _freeze(tables), report, _freeze(deterministic))


def _order_key(sig: Signature, names: Sequence[str], values: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(sig.ranges[n].index(v) for n, v in zip(names, values))
