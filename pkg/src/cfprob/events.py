"""Counterfactual atoms ``(Y=y)[X=x]`` shared by every semantics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidModelError
from .model import Signature

Pairs = tuple[tuple[str, str], ...]


def to_pairs(items: Mapping[str, str] | Iterable[tuple[str, str]] | None) -> Pairs:
    if items is None:
        return ()
    if isinstance(items, Mapping):
        items = items.items()
    return tuple((str(k), str(v)) for k, v in items)


def merge_pairs(pairs: Iterable[tuple[str, str]]) -> dict[str, str] | None:
    """Conjunction of assignments as a dict, or None when two of them clash."""
    out: dict[str, str] = {}
    for name, value in pairs:
        if out.setdefault(name, value) != value:
            return None
    return out


@dataclass(frozen=True)
class Atom:
    """A counterfactual atom: ``targets`` would hold under ``do(intervention)``.

    An empty intervention makes the atom an ordinary observation.  Targets are
    kept as ordered pairs so contradictory conjunctions (``Y=0, Y=1``) can be
    represented; they evaluate to probability zero.
    """

    targets: Pairs
    intervention: Pairs = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", to_pairs(self.targets))
        object.__setattr__(self, "intervention", to_pairs(self.intervention))
        if not self.targets:
            raise InvalidModelError("an atom needs at least one target assignment")
        if merge_pairs(self.intervention) is None:
            raise InvalidModelError(f"contradictory intervention {self.intervention}")

    @classmethod
    def of(cls, targets, intervention=None) -> "Atom":
        return cls(to_pairs(targets), to_pairs(intervention))

    @property
    def observational(self) -> bool:
        return not self.intervention

    def target_dict(self) -> dict[str, str] | None:
        return merge_pairs(self.targets)

    def do_dict(self) -> dict[str, str]:
        return dict(self.intervention)

    def validate(self, signature: Signature) -> None:
        signature.check_assignment(dict(self.intervention), allowed=signature.endogenous,
                                   what="intervention")
        for name, value in self.targets:
            signature.check_assignment({name: value}, allowed=signature.endogenous, what="target")


def validate_given(signature: Signature, given: Mapping[str, str] | Iterable[tuple[str, str]] | None) -> Pairs:
    pairs = to_pairs(given)
    for name, value in pairs:
        signature.check_assignment({name: value}, what="conditioning event")
    return pairs


def _merge_observations(atoms: tuple[Atom, ...]) -> tuple[Atom, ...]:
    out: list[Atom] = []
    for atom in atoms:
        if out and atom.observational and out[-1].observational:
            out[-1] = Atom(out[-1].targets + atom.targets)
        else:
            out.append(atom)
    return tuple(out)


@dataclass(frozen=True)
class CounterfactualQuery:
    """``P(atom_1, ..., atom_k | given)``.

    Adjacent observational atoms are fused, so ``P(X=1, Y=0)`` is one atom.
    An empty ``given`` is stored as None.
    """

    atoms: tuple[Atom, ...]
    given: Pairs | None = None

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise InvalidModelError("a query needs at least one atom")
        object.__setattr__(self, "atoms", _merge_observations(atoms))
        given = to_pairs(self.given) if self.given is not None else ()
        object.__setattr__(self, "given", given or None)

    def given_dict(self) -> dict[str, str] | None:
        return merge_pairs(self.given or ())

    def validate(self, signature: Signature) -> None:
        for atom in self.atoms:
            atom.validate(signature)
        validate_given(signature, self.given)

    def is_full_world(self, signature: Signature) -> bool:
        given = self.given_dict()
        return given is not None and set(given) == set(signature.variables)

    def __str__(self) -> str:
        from .query import format_query
        return format_query(self)
