"""Command-line front end.

Commands: validate, desc, weq, transfer, lift, fixture.  All input and output
is UTF-8 JSON; output is canonical (sorted keys and ids) so identical inputs
produce identical bytes.  Exit codes: 0 success, 1 semantic failure, 2 parse
failure, 3 resource bound exceeded, 4 precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cosimplicial import (
    CrossedDiagram,
    DiagramMorphism,
    validate_diagram,
    validate_diagram_morphism,
)
from .crossed import validate_crossed
from .descent import DescentDatum, enumerate_descent, gauge_classes
from .fixtures import build_fixture
from .groupoid import validate_groupoid
from .serialize import dumps_canonical, parse_document, serialize_document
from .transfer import (
    is_weak_equivalence_diagram,
    lift_descent,
    verify_bijection,
)
from .validation import (
    CrossedDescError,
    DomainError,
    LoadError,
    ResourceBoundError,
)

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_PARSE = 2
EXIT_BOUND = 3
EXIT_PRECONDITION = 4

DEFAULT_BOUND = 1_000_000


def _emit(obj) -> None:
    sys.stdout.write(dumps_canonical(obj))


def _load(path: str) -> tuple[str, object]:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def _as_diagram(kind: str, structure) -> CrossedDiagram:
    if kind == "diagram":
        return structure
    if kind == "fixture-spec":
        built_kind, built = build_fixture(structure)
        if built_kind == "diagram":
            return built
        raise DomainError(f"fixture produces a {built_kind}, not a diagram")
    raise DomainError(f"expected a diagram document, got kind {kind!r}")


def _as_diagram_morphism(kind: str, structure) -> DiagramMorphism:
    if kind == "diagram-morphism":
        return structure
    if kind == "fixture-spec":
        built_kind, built = build_fixture(structure)
        if built_kind == "diagram-morphism":
            return built
        raise DomainError(f"fixture produces a {built_kind}, not a diagram morphism")
    raise DomainError(f"expected a diagram-morphism document, got kind {kind!r}")


def _datum_json(t: DescentDatum) -> dict:
    return {"x": t.x, "g": t.g, "a": t.a}


# -- commands -----------------------------------------------------------


def cmd_validate(args) -> int:
    kind, structure = _load(args.path)
    if kind == "groupoid":
        report = validate_groupoid(structure)
    elif kind == "crossed":
        report = validate_crossed(structure)
    elif kind == "diagram":
        report = validate_diagram(structure)
    elif kind == "diagram-morphism":
        report = validate_diagram_morphism(structure)
    else:  # fixture-spec: build it and validate the result
        built_kind, built = build_fixture(structure)
        if built_kind == "crossed":
            report = validate_crossed(built)
        elif built_kind == "diagram":
            report = validate_diagram(built)
        else:
            report = validate_diagram_morphism(built)
    _emit({"kind": kind, "report": report.as_json()})
    return EXIT_OK if report.ok else EXIT_SEMANTIC


def cmd_desc(args) -> int:
    kind, structure = _load(args.path)
    D = _as_diagram(kind, structure)
    if args.classes:
        table = gauge_classes(D, args.bound)
        out = {
            "count": len(table.members),
            "classCount": len(table.reps),
            "classes": [
                {
                    "representative": _datum_json(rep),
                    "members": [_datum_json(m) for m in table.class_members(rep)],
                    "witnesses": [
                        {
                            "member": _datum_json(m),
                            "gauge": {
                                "f": table.witnesses[m].f,
                                "c": table.witnesses[m].c,
                            },
                        }
                        for m in table.class_members(rep)
                    ],
                }
                for rep in table.reps
            ],
        }
    else:
        data = enumerate_descent(D, args.bound)
        out = {"count": len(data), "data": [_datum_json(t) for t in data]}
    _emit(out)
    return EXIT_OK


def cmd_weq(args) -> int:
    kind, structure = _load(args.path)
    F = _as_diagram_morphism(kind, structure)
    ok, report = is_weak_equivalence_diagram(F)
    _emit({"weakEquivalence": ok, "report": report.as_json()})
    return EXIT_OK if ok else EXIT_SEMANTIC


def cmd_transfer(args) -> int:
    kind, structure = _load(args.path)
    F = _as_diagram_morphism(kind, structure)
    ok, report = is_weak_equivalence_diagram(F)
    if not ok:
        _emit({"weakEquivalence": False, "report": report.as_json()})
        return EXIT_PRECONDITION
    try:
        result = verify_bijection(F, args.bound)
    except CrossedDescError as exc:
        if isinstance(exc, (ResourceBoundError, DomainError)):
            raise
        _emit({"error": str(exc)})
        return EXIT_SEMANTIC
    _emit(result.as_json(include_traces=args.trace))
    return EXIT_OK


def cmd_lift(args) -> int:
    kind, structure = _load(args.path)
    F = _as_diagram_morphism(kind, structure)
    ok, report = is_weak_equivalence_diagram(F)
    if not ok:
        _emit({"weakEquivalence": False, "report": report.as_json()})
        return EXIT_PRECONDITION
    target = _parse_target(F, args.target)
    lifted, witness, trace = lift_descent(F, target)
    out = {
        "target": _datum_json(target),
        "lifted": _datum_json(lifted),
        "witness": {"f": witness.f, "c": witness.c},
    }
    if args.trace:
        out["trace"] = trace.as_json()
    _emit(out)
    return EXIT_OK


def _parse_target(F: DiagramMorphism, spec: str) -> DescentDatum:
    """A target datum: an index into the canonical enumeration, or a JSON
    object {"x":..., "g":..., "a":...}."""
    try:
        index = int(spec)
    except ValueError:
        try:
            d = json.loads(spec)
        except json.JSONDecodeError:
            raise LoadError(f"target {spec!r} is neither an index nor JSON") from None
        return DescentDatum(d["x"], d["g"], d["a"])
    data = enumerate_descent(F.target)
    if not 0 <= index < len(data):
        raise DomainError(f"target index {index} out of range (0..{len(data) - 1})")
    return data[index]


def cmd_fixture(args) -> int:
    kind, structure = _load(args.path)
    if kind != "fixture-spec":
        raise DomainError(f"expected a fixture-spec document, got kind {kind!r}")
    built_kind, built = build_fixture(structure)
    sys.stdout.write(serialize_document(built_kind, built, args.bound))
    return EXIT_OK


# -- argument parsing ---------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossed-desc",
        description="Finite crossed groupoids: descent data, gauge classes, transfer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path", help="input document (UTF-8 JSON envelope)")
        p.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                       help="candidate/size bound (default %(default)s)")
        p.add_argument("--json", action="store_true", default=True,
                       help="JSON output (default; the only format)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "run the validator for the document's kind")
    p_desc = add("desc", cmd_desc, "enumerate descent data of a diagram")
    p_desc.add_argument("--classes", action="store_true",
                        help="classify up to gauge equivalence with witnesses")
    add("weq", cmd_weq, "check a diagram morphism for weak equivalence")
    p_tr = add("transfer", cmd_transfer, "verify the induced class bijection both ways")
    p_tr.add_argument("--trace", action="store_true", help="include lift traces")
    p_lift = add("lift", cmd_lift, "lift one target descent datum")
    p_lift.add_argument("--target", required=True,
                        help="enumeration index or JSON triple {x,g,a}")
    p_lift.add_argument("--trace", action="store_true", help="include the lift trace")
    add("fixture", cmd_fixture, "expand a fixture spec into an explicit document")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (json.JSONDecodeError, LoadError, OSError) as exc:
        _emit({"error": str(exc)})
        return EXIT_PARSE
    except ResourceBoundError as exc:
        _emit({"error": str(exc)})
        return EXIT_BOUND
    except DomainError as exc:
        _emit({"error": str(exc)})
        return EXIT_PRECONDITION
    except CrossedDescError as exc:
        _emit({"error": str(exc)})
        return EXIT_SEMANTIC


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
