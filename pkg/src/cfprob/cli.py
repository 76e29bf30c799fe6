"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 unreadable input (file, model or
query syntax), 3 a semantic error (zero-probability conditioning, caps,
unsupported query).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .abstraction import InducedStructure
from .catalog import examples_catalog, report
from .errors import (CausalError, InvalidModelError, ModelFileError, QuerySyntaxError)
from .exact import format_approx, format_exact, format_fraction
from .io import load_model, load_scm
from .model import CausalModel, check_markov, joint
from .query import Semantics, compare_semantics, evaluate, parse_query
from .scm import Scm, induced_model
from .selfcheck import SUITES

EXIT_FAIL, EXIT_INPUT, EXIT_SEMANTIC = 1, 2, 3


class _InputError(Exception):
    pass


def _load(args) -> CausalModel | Scm:
    given = [a for a in (args.model, args.scm, args.fixture) if a]
    if len(given) != 1:
        raise _InputError("give exactly one of --model, --scm, --fixture")
    try:
        if args.model:
            return load_model(args.model)
        if args.scm:
            return load_scm(args.scm)
    except (ModelFileError, InvalidModelError) as exc:
        raise _InputError(str(exc)) from None
    catalog = examples_catalog()
    if args.fixture not in catalog:
        raise _InputError(f"unknown fixture {args.fixture!r}; try 'examples list'")
    built = catalog[args.fixture].build()
    if isinstance(built, InducedStructure):
        return built.promote()
    return built


def _format_value(value) -> str:
    if isinstance(value, tuple):
        lo, hi = value
        return f"[{format_fraction(lo)}, {format_fraction(hi)}] (≈ [{format_approx(lo)}, {format_approx(hi)}])"
    return format_exact(value)


def _signature(model):
    return induced_model(model).signature if isinstance(model, Scm) else model.signature


def cmd_eval(args, semantics: str | None = None) -> int:
    model = _load(args)
    if not args.query:
        raise _InputError("--query is required")
    try:
        q = parse_query(args.query, _signature(model))
    except QuerySyntaxError as exc:
        raise _InputError(str(exc)) from None
    sem = semantics or args.semantics
    print(_format_value(evaluate(model, q, sem, max_states=args.max_states)))
    return 0


def cmd_compare(args) -> int:
    model = _load(args)
    if not args.query:
        raise _InputError("--query is required")
    try:
        q = parse_query(args.query, _signature(model))
    except QuerySyntaxError as exc:
        raise _InputError(str(exc)) from None
    table = compare_semantics(model, q, max_states=args.max_states)
    print(f"query: {table.query}")
    width = max(len(tag) for tag, _ in table.rows())
    for tag, text in table.rows():
        print(f"  {tag:<{width}}  {text}")
    print(f"verdict: {table.verdict}")
    return 0 if table.agree else EXIT_FAIL


def _print_markov(markov, limit: int | None) -> None:
    print("Markov condition:", "holds" if markov.holds else "violated")
    if markov.holds:
        return
    print(f"violations: {len(markov.violations)} (variables: {', '.join(markov.violating_variables())})")
    shown = markov.violations if limit is None else markov.violations[:limit]
    for v in shown:
        pa = ", ".join(f"{k}={x}" for k, x in v.parents.items())
        ctx = ", ".join(f"{k}={x}" for k, x in v.context.items())
        print(f"  P({v.variable}={v.value} | {pa}, {ctx}) = {format_fraction(v.conditional)}"
              f"  vs  P({v.variable}={v.value} | {pa}) = {format_fraction(v.marginal)}")
    if len(shown) < len(markov.violations):
        print(f"  ... {len(markov.violations) - len(shown)} more (use --all)")


def cmd_markov(args) -> int:
    limit = None if args.all else 10
    if args.fixture:
        catalog = examples_catalog()
        if args.fixture not in catalog:
            raise _InputError(f"unknown fixture {args.fixture!r}")
        built = catalog[args.fixture].build()
        if isinstance(built, InducedStructure):
            _print_markov(built.markov, limit)
            return 0
        args.fixture_obj = built
    model = getattr(args, "fixture_obj", None) or _load(args)
    if isinstance(model, Scm):
        model = induced_model(model, max_states=args.max_states)
    _print_markov(check_markov(model.signature, model.dag, joint(model, max_states=args.max_states)), limit)
    return 0


def cmd_examples(args) -> int:
    catalog = examples_catalog()
    if args.action == "list":
        for name, fx in catalog.items():
            print(f"{name:<9} {fx.title} [{fx.citation}]")
        return 0
    if args.action == "run":
        if not args.name:
            raise _InputError("examples run needs a fixture name")
        if args.name not in catalog:
            raise _InputError(f"unknown fixture {args.name!r}")
        names = [args.name]
    else:
        names = list(catalog)
    ok = True
    for name in names:
        lines, passed = report(catalog[name])
        ok &= passed
        print("\n".join(lines))
        print("PASS" if passed else "FAIL")
    return 0 if ok else EXIT_FAIL


def cmd_selfcheck(args) -> int:
    ok = True
    for name, fn in SUITES.items():
        res = fn(args.seed, args.models)
        ok &= res.passed
        print(res.line())
        for f in res.failures:
            print(f"    {f}")
    print("all suites PASS" if ok else "some suites FAILED")
    return 0 if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfprob", description="Exact counterfactual probabilities.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def model_flags(p):
        p.add_argument("--model", help="causal model file (JSON)")
        p.add_argument("--scm", help="SCM file (JSON)")
        p.add_argument("--fixture", help="use a built-in fixture instead of a file")
        p.add_argument("--max-states", type=int, default=None)

    p = sub.add_parser("eval", help="evaluate a query")
    model_flags(p)
    p.add_argument("--query")
    p.add_argument("--semantics", default="N", type=str.upper, choices=[s.value for s in Semantics])
    p = sub.add_parser("bounds", help="bounds over all canonical SCMs")
    model_flags(p)
    p.add_argument("--query")
    p = sub.add_parser("compare", help="evaluate a query under every semantics")
    model_flags(p)
    p.add_argument("--query")
    p = sub.add_parser("markov", help="check the Markov condition")
    model_flags(p)
    p.add_argument("--all", action="store_true", help="print every violation")
    p = sub.add_parser("examples", help="list or run the built-in fixtures")
    p.add_argument("action", choices=["list", "run", "run-all"])
    p.add_argument("name", nargs="?")
    p = sub.add_parser("selfcheck", help="randomized equivalence suites")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--models", type=int, default=200)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "eval": cmd_eval,
        "bounds": lambda a: cmd_eval(a, "BOUNDS"),
        "compare": cmd_compare,
        "markov": cmd_markov,
        "examples": cmd_examples,
        "selfcheck": cmd_selfcheck,
    }
    try:
        return handlers[args.verb](args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ModelFileError, QuerySyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CausalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
