"""Randomized equivalence suites with exact comparisons.

Each suite draws its own models from a seeded generator, so results are
reproducible for a given ``seed``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .canonical import bound_query, independent_canonical
from .errors import ModelTooLargeError, UndefinedConditionalError
from .events import Atom, CounterfactualQuery
from .exact import ONE, ZERO
from .model import CausalModel
from .potential import PoScm, build_gh_scm, build_po_scm, n_basic, n_complex, n_conditional
from .query import causation_query
from .randmodels import (random_atoms, random_do, random_evidence, random_model, random_target,
                         random_world)
from .refinement import b_basic, b_basic_closed, b_basic_def, b_complex, b_conditional
from .scm import Scm, complex_cf


@dataclass
class SuiteResult:
    name: str
    models: int = 0
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name}: {self.checked} checks on {self.models} models"
                f" ({self.skipped} skipped, {len(self.failures)} failures)")

    def expect(self, ok: bool, detail: Callable[[], str]) -> None:
        self.checked += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(detail())
        elif not ok:
            self.failures.append("...")


def brute_many(scm: Scm, queries: Sequence[tuple[Sequence[Atom], dict[str, str] | None]]) -> list[Fraction]:
    """Exhaustive sum over every exogenous setting with positive mass; an oracle for small SCMs.

    All queries share one pass over the exogenous space, and each intervention
    is solved at most once per setting.
    """
    sig = scm.signature
    order = scm.endogenous_order
    eqs = [(x, scm.equations[x]) for x in order]
    plans = []
    for atoms, given in queries:
        parts = []
        for atom in atoms:
            t = atom.target_dict()
            parts.append((tuple(sorted(atom.do_dict().items())), t))
        plans.append((dict(given or {}), parts, any(t is None for _, t in parts)))
    nums = [ZERO] * len(plans)
    dens = [ZERO] * len(plans)
    supports = [[(v, p) for v, p in scm.priors[u].items() if p] for u in sig.exogenous]
    for combo in product(*supports):
        u = {name: v for name, (v, _) in zip(sig.exogenous, combo)}
        w = math.prod((p for _, p in combo), start=ONE)
        solved: dict[tuple, dict[str, str]] = {}

        def sol(do: tuple) -> dict[str, str]:
            if do not in solved:
                clamp = dict(do)
                values = dict(u)
                for x, eq in eqs:
                    values[x] = clamp[x] if x in clamp else eq(values)
                solved[do] = values
            return solved[do]

        for i, (given, parts, dead) in enumerate(plans):
            if given:
                world = sol(())
                if any(world[k] != x for k, x in given.items()):
                    continue
            dens[i] += w
            if dead:
                continue
            if all(all(sol(do)[k] == x for k, x in t.items()) for do, t in parts):
                nums[i] += w
    out = []
    for (given, _, _), num, den in zip(plans, nums, dens):
        if given:
            if not den:
                raise UndefinedConditionalError("undefined conditional")
            out.append(num / den)
        else:
            out.append(num)
    return out


def brute_complex(scm: Scm, atoms: Iterable[Atom], given: dict[str, str] | None = None) -> Fraction:
    return brute_many(scm, [(list(atoms), given)])[0]


def _fmt(model: CausalModel, *parts) -> str:
    return f"{list(model.signature.endogenous)} " + " ".join(str(p) for p in parts)


def suite_basic(seed: int, models: int, per_model: int = 20) -> SuiteResult:
    """B and N agree on basic counterfactuals given a full world."""
    rng = random.Random(seed)
    res = SuiteResult("basic counterfactuals: B = N")
    for _ in range(models):
        m = random_model(rng)
        po = build_po_scm(m)
        res.models += 1
        for _ in range(per_model):
            w, do, t = random_world(rng, m), random_do(rng, m), random_target(rng, m)
            b, n = b_basic(m, do, t, w), n_basic(m, do, t, w, po=po)
            res.expect(b == n, lambda: _fmt(m, w, do, t, b, n))
    return res


def suite_closed_form(seed: int, models: int, per_model: int = 20) -> SuiteResult:
    """Closed four-case formula equals refine-intervene-condition."""
    rng = random.Random(seed + 1)
    res = SuiteResult("closed form = definition (B basic)")
    for _ in range(models):
        m = random_model(rng)
        res.models += 1
        for _ in range(per_model):
            w, do, t = random_world(rng, m), random_do(rng, m), random_target(rng, m, full=True)
            a, b = b_basic_closed(m, do, t, w), b_basic_def(m, do, t, w)
            res.expect(a == b, lambda: _fmt(m, w, do, t, a, b))
    return res


def suite_conditional(seed: int, models: int, per_model: int = 5) -> SuiteResult:
    """B and N agree on single-atom counterfactuals given endogenous evidence."""
    rng = random.Random(seed + 2)
    res = SuiteResult("conditional counterfactuals: B = N")
    for _ in range(models):
        m = random_model(rng)
        po = build_po_scm(m)
        res.models += 1
        for _ in range(per_model):
            z, do, t = random_evidence(rng, m), random_do(rng, m, min_size=1), random_target(rng, m)
            b, n = b_conditional(m, do, t, z), n_conditional(m, do, t, z, po=po)
            res.expect(b == n, lambda: _fmt(m, z, do, t, b, n))
    return res


def suite_causation(seed: int, models: int) -> SuiteResult:
    """PN, PS, PNS agree across B, N, GH, IC; PNS = P(x,y) PN + P(x',y') PS under B and N."""
    rng = random.Random(seed + 3)
    res = SuiteResult("probabilities of causation and linkage identity")
    for _ in range(models):
        m = random_model(rng, binary=True)
        sig = m.signature
        res.models += 1
        x, y = rng.sample(sig.endogenous, 2)
        if sig.endogenous.index(x) > sig.endogenous.index(y):
            x, y = y, x
        x0, x1 = sig.ranges[x]
        y0, y1 = sig.ranges[y]
        gh, ic = build_gh_scm(m), independent_canonical(m)
        values: dict[str, dict[str, Fraction]] = {}
        for kind in ("PN", "PS", "PNS"):
            q = causation_query(sig, x, y, kind)
            given = q.given_dict()
            try:
                values[kind] = {
                    "B": b_complex(m, q.atoms, given),
                    "N": n_complex(m, q.atoms, given),
                    "GH": complex_cf(gh, q.atoms, given),
                    "IC": complex_cf(ic, q.atoms, given),
                }
            except UndefinedConditionalError:
                res.skipped += 1
                continue
            vals = values[kind]
            res.expect(len(set(vals.values())) == 1, lambda: _fmt(m, kind, x, y, vals))
        if len(values) == 3:
            pxy = n_complex(m, [Atom.of({x: x1, y: y1})])
            pxy0 = n_complex(m, [Atom.of({x: x0, y: y0})])
            for sem in ("B", "N"):
                lhs = values["PNS"][sem]
                rhs = pxy * values["PN"][sem] + pxy0 * values["PS"][sem]
                res.expect(lhs == rhs, lambda: _fmt(m, "linkage", sem, lhs, rhs))
    return res


def suite_corollary(seed: int, models: int, per_model: int = 3) -> SuiteResult:
    """GH = N = IC on random conjunctions, with and without evidence."""
    rng = random.Random(seed + 4)
    res = SuiteResult("conjunctions: GH = N = IC")
    for _ in range(models):
        m = random_model(rng)
        po, gh, ic = build_po_scm(m), build_gh_scm(m), independent_canonical(m)
        res.models += 1
        for i in range(per_model):
            atoms = random_atoms(rng, m)
            given = random_evidence(rng, m) if i % 2 else None
            n = complex_cf(po.scm, atoms, given)
            g = complex_cf(gh, atoms, given)
            c = complex_cf(ic, atoms, given)
            res.expect(n == g == c, lambda: _fmt(m, atoms, given, n, g, c))
    return res


def suite_po_oracle(seed: int, models: int, per_model: int = 3, max_space: int = 10**5) -> SuiteResult:
    """Lazy PO evaluation equals exhaustive enumeration of the PO exogenous space."""
    rng = random.Random(seed + 5)
    res = SuiteResult("N semantics = exhaustive PO enumeration")
    while res.models < models:
        m = random_model(rng)
        po: PoScm = build_po_scm(m)
        sig = po.scm.signature
        if sig.space_size(sig.exogenous) > max_space:
            res.skipped += 1
            continue
        res.models += 1
        queries = []
        for i in range(per_model):
            atoms = random_atoms(rng, m)
            queries.append((atoms, random_evidence(rng, m) if i % 2 else None))
        lazy = [n_complex(m, atoms, given, po=po) for atoms, given in queries]
        brute = brute_many(po.scm, queries)
        for (atoms, given), a, b in zip(queries, lazy, brute):
            res.expect(a == b, lambda: _fmt(m, atoms, given, a, b))
    return res


def suite_bounds(seed: int, models: int, per_model: int = 2) -> SuiteResult:
    """Bounds over canonical SCMs bracket the independent canonical value."""
    rng = random.Random(seed + 6)
    res = SuiteResult("bounds bracket the IC value")
    while res.models < models:
        m = random_model(rng, binary=True, max_endogenous=3, max_exogenous=1, max_functions=16)
        ic = independent_canonical(m)
        res.models += 1
        for i in range(per_model):
            atoms = random_atoms(rng, m, max_atoms=2)
            given = random_evidence(rng, m) if i % 2 else None
            q = CounterfactualQuery(tuple(atoms), tuple(given.items()) if given else None)
            try:
                lo, hi = bound_query(m, q)
            except ModelTooLargeError:
                res.skipped += 1
                continue
            v = complex_cf(ic, atoms, given)
            res.expect(lo <= v <= hi, lambda: _fmt(m, atoms, given, lo, v, hi))
    return res


SUITES = {
    "basic": suite_basic,
    "closed-form": suite_closed_form,
    "conditional": suite_conditional,
    "causation": suite_causation,
    "corollary": suite_corollary,
    "po-oracle": suite_po_oracle,
    "bounds": suite_bounds,
}


def run_all(seed: int = 7, models: int = 200) -> list[SuiteResult]:
    return [fn(seed, models) for fn in SUITES.values()]


__all__ = ["SuiteResult", "SUITES", "run_all", "brute_complex", "brute_many"]
