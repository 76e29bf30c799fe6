"""JSON model files.

A model file looks like::

    {
      "exogenous": {"U": ["0", "1"]},
      "endogenous": {"X": ["0", "1"], "Y": ["0", "1"]},
      "edges": [["U", "X"], ["X", "Y"]],
      "priors": {"U": {"0": "1/2", "1": "1/2"}},
      "cpds": {"X": {"U=0": {"0": "1"}, "U=1": {"1": "1"}},
               "Y": {"X=0": {"0": "1/3", "1": "2/3"}, "X=1": {"0": "2/3", "1": "1/3"}}}
    }

Probabilities are integers or ``"a/b"`` strings; floats are refused.  Row keys
list ``parent=value`` pairs separated by commas, in any order.  An SCM file
has ``"equations"`` (row key -> single value) instead of ``"cpds"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import InvalidModelError, ModelFileError
from .exact import format_fraction, parse_rational
from .model import CausalModel, Dag, Signature
from .scm import Scm, TableEquation

_REQUIRED = ("exogenous", "endogenous", "edges", "priors")


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ModelFileError(f"{where}: probabilities must be integers or 'a/b' strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise ModelFileError(f"{where}: {exc}") from None
    raise ModelFileError(f"{where}: cannot read {value!r} as a probability")


def _row_key(text: str, parents: tuple[str, ...], where: str) -> tuple[str, ...]:
    pairs = {}
    if text.strip():
        for part in text.split(","):
            name, sep, value = part.partition("=")
            if not sep:
                raise ModelFileError(f"{where}: row key {text!r} must look like 'A=a,B=b'")
            pairs[name.strip()] = value.strip()
    if set(pairs) != set(parents):
        raise ModelFileError(f"{where}: row key {text!r} must name exactly the parents {list(parents)}")
    return tuple(pairs[p] for p in parents)


def _skeleton(doc: Mapping, kind: str) -> tuple[Signature, Dag]:
    if not isinstance(doc, Mapping):
        raise ModelFileError("top level must be an object")
    for key in _REQUIRED + (kind,):
        if key not in doc:
            raise ModelFileError(f"missing section {key!r}")
    exo, endo = doc["exogenous"], doc["endogenous"]
    ranges = {**{k: tuple(str(v) for v in vs) for k, vs in exo.items()},
              **{k: tuple(str(v) for v in vs) for k, vs in endo.items()}}
    sig = Signature(tuple(exo), tuple(endo), ranges)
    edges = []
    for e in doc["edges"]:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ModelFileError(f"edge {e!r} must be a [parent, child] pair")
        edges.append((str(e[0]), str(e[1])))
    return sig, Dag.from_edges(sig.variables, edges)


def _priors(doc: Mapping) -> dict[str, dict[str, Fraction]]:
    return {u: {str(v): _rational(p, f"prior of {u}") for v, p in row.items()} for u, row in doc["priors"].items()}


def model_from_dict(doc: Mapping) -> CausalModel:
    try:
        sig, dag = _skeleton(doc, "cpds")
        cpds = {}
        for x, rows in doc["cpds"].items():
            if x not in dag.nodes:
                raise ModelFileError(f"cpds given for unknown variable {x!r}")
            pas = dag.parents(x)
            cpds[x] = {_row_key(k, pas, f"cpd of {x}"): {str(v): _rational(p, f"cpd of {x} at {k!r}")
                                                          for v, p in row.items()}
                       for k, row in rows.items()}
        return CausalModel(sig, dag, _priors(doc), cpds)
    except (AttributeError, TypeError) as exc:
        raise ModelFileError(f"malformed model document: {exc}") from None


def scm_from_dict(doc: Mapping) -> Scm:
    try:
        sig, dag = _skeleton(doc, "equations")
        tables = {}
        for x, rows in doc["equations"].items():
            if x not in dag.nodes:
                raise ModelFileError(f"equations given for unknown variable {x!r}")
            pas = dag.parents(x)
            tables[x] = {_row_key(k, pas, f"equation of {x}"): str(v) for k, v in rows.items()}
        return Scm.from_tables(sig, dag, tables, _priors(doc))
    except (AttributeError, TypeError) as exc:
        raise ModelFileError(f"malformed SCM document: {exc}") from None


def _read(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def load_model(path: str | Path) -> CausalModel:
    return model_from_dict(_read(path))


def load_scm(path: str | Path) -> Scm:
    return scm_from_dict(_read(path))


def _key_text(parents: tuple[str, ...], key: tuple[str, ...]) -> str:
    return ",".join(f"{p}={v}" for p, v in zip(parents, key))


def _head(sig: Signature, dag: Dag, priors) -> dict:
    return {
        "exogenous": {u: list(sig.ranges[u]) for u in sig.exogenous},
        "endogenous": {x: list(sig.ranges[x]) for x in sig.endogenous},
        "edges": sorted([list(e) for e in dag.edges], key=lambda e: (dag.nodes.index(e[1]), dag.nodes.index(e[0]))),
        "priors": {u: {v: format_fraction(p) for v, p in priors[u].items()} for u in sig.exogenous},
    }


def model_to_dict(model: CausalModel) -> dict:
    doc = _head(model.signature, model.dag, model.priors)
    doc["cpds"] = {x: {_key_text(model.dag.parents(x), k): {v: format_fraction(p) for v, p in row.items() if p}
                       for k, row in rows.items()}
                   for x, rows in model.cpds.items()}
    return doc


def scm_to_dict(scm: Scm) -> dict:
    doc = _head(scm.signature, scm.dag, scm.priors)
    eqs = {}
    for x, eq in scm.equations.items():
        if not isinstance(eq, TableEquation):
            raise InvalidModelError(f"equation of {x} is not a table and cannot be serialized")
        pas = scm.dag.parents(x)
        eqs[x] = {_key_text(pas, tuple(dict(zip(eq.parents, k))[p] for p in pas)): v for k, v in eq.table.items()}
    doc["equations"] = eqs
    return doc


def dump(doc: Mapping) -> str:
    return json.dumps(doc, indent=2) + "\n"


__all__ = ["load_model", "load_scm", "model_from_dict", "scm_from_dict", "model_to_dict",
           "scm_to_dict", "dump"]
