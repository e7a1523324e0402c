"""Command-line front end. Every command prints one JSON document.

Exit codes: 0 the command ran (verdicts live in the JSON), 1 usage or input
error, 2 a resource guard tripped, 3 an internal self-check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .canonical import DEFAULT_BUDGET, all_variants
from .classifier import classify
from .dsl import load_spec
from .errors import (ArityGuardError, GraphSatError, InternalInconsistencyError, NotBijunctiveError,
                     NotEdgeAffineError, ResourceGuardError)
from .ktypes import ktype_count
from .reductions import KINDS, BoolFormula, generate
from .relations import closure_facts, interdef_class
from .solvers.dispatch import METHODS, dispatch_solve
from .solvers.normal_forms import compile_bijunctive, compile_edge_affine
from .solvers.oracle import DEFAULT_CAP, enumeration_oracle, oracle_solve
from .validation import check_instance

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_language(path: str):
    return load_spec(Path(path).read_text())


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _language_and_instance(args):
    lang = _load_language(args.spec)
    tables = dict(lang.tables)
    try:
        inst = check_instance(_load_json(args.instance), tables)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.instance}: malformed instance ({exc})") from None
    return tables, inst


def cmd_classify(args) -> dict:
    lang = _load_language(args.spec)
    return classify(lang.tables.values(), budget=args.budget).to_json()


def cmd_solve(args) -> dict:
    tables, inst = _language_and_instance(args)
    cls = classify(tables.values(), budget=args.budget)
    method = None if args.method == "auto" else args.method
    try:
        result = dispatch_solve(tables, inst, cls, method=method, oracle_cap=args.oracle_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = result.to_json()
    doc["classification"] = cls.to_json()
    return doc


def cmd_oracle(args) -> dict:
    tables, inst = _language_and_instance(args)
    if args.enumerate:
        return enumeration_oracle(tables, inst).to_json()
    return oracle_solve(tables, inst, cap=args.cap).to_json()


def cmd_compile(args) -> dict:
    lang = _load_language(args.spec)
    out = {}
    for name, table in lang.tables.items():
        entry = {"arity": table.arity, "count": len(table)}
        if args.normal_form is None:
            entry["types"] = [str(t) for t in table.ordered]
        else:
            compiler = compile_edge_affine if args.normal_form == "affine" else compile_bijunctive
            try:
                entry["clauses"] = [c.to_json() for c in compiler(table)]
            except (NotEdgeAffineError, NotBijunctiveError) as exc:
                entry["error"] = str(exc)
        out[name] = entry
    return {"normal_form": args.normal_form or "types", "relations": out}


def cmd_dump_clones(args) -> dict:
    return {"variants": [v.to_json() for v in all_variants()]}


def cmd_diag(args) -> dict:
    lang = _load_language(args.spec)
    return {
        "interdef_class": str(interdef_class(lang.tables.values())),
        "closure": {name: closure_facts(t) for name, t in lang.tables.items()},
    }


def cmd_gen(args) -> dict:
    doc = _load_json(args.file)
    if not isinstance(doc, dict):
        raise UsageError(f"{args.file}: expected a JSON object")
    doc.setdefault("kind", args.kind)
    if doc["kind"] != args.kind:
        raise UsageError(f"{args.file} declares kind {doc['kind']!r}, command asked for {args.kind!r}")
    try:
        red = generate(BoolFormula.from_json(doc))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.file}: malformed formula ({exc})") from None
    return {"kind": args.kind, "spec": red.spec_text, "instance": red.instance.to_json()}


def cmd_types(args) -> dict:
    if args.k < 0:
        raise UsageError("k must be non-negative")
    return {"k": args.k, "count": ktype_count(args.k)}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphsat", description="Graph-SAT workbench over the random graph.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", help="tractability verdict and witness clone")
    s.add_argument("spec")
    s.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("solve", help="solve an instance with the classified algorithm")
    s.add_argument("spec")
    s.add_argument("instance")
    s.add_argument("--method", choices=("auto",) + METHODS, default="auto")
    s.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("oracle", help="reference backtracking search")
    s.add_argument("spec")
    s.add_argument("instance")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--enumerate", action="store_true", help="full type enumeration (at most 5 variables)")
    s.set_defaults(run=cmd_oracle)

    s = sub.add_parser("compile", help="type tables or normal-form clauses of every relation")
    s.add_argument("spec")
    s.add_argument("--normal-form", choices=("affine", "bijunctive"))
    s.set_defaults(run=cmd_compile)

    s = sub.add_parser("dump-clones", help="all clone variant behavior tables")
    s.set_defaults(run=cmd_dump_clones)

    s = sub.add_parser("diag", help="interdefinability class and closure facts")
    s.add_argument("spec")
    s.set_defaults(run=cmd_diag)

    s = sub.add_parser("gen", help="hardness-reduction instance from a Boolean formula")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("file")
    s.set_defaults(run=cmd_gen)

    s = sub.add_parser("types", help="number of k-types")
    s.add_argument("k", type=int)
    s.set_defaults(run=cmd_types)
    return p


def _emit(doc, stream) -> None:
    stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        doc = args.run(args)
    except UsageError as exc:
        _emit({"error": str(exc), "kind": "usage"}, sys.stderr)
        return EXIT_USAGE
    except (ResourceGuardError, ArityGuardError) as exc:
        _emit({"error": str(exc), "kind": "resource-guard"}, sys.stderr)
        return EXIT_GUARD
    except InternalInconsistencyError as exc:
        _emit({"error": str(exc), "kind": "internal"}, sys.stderr)
        return EXIT_INTERNAL
    except (GraphSatError, OSError, ValueError) as exc:
        _emit({"error": str(exc), "kind": "usage"}, sys.stderr)
        return EXIT_USAGE
    _emit(doc, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
