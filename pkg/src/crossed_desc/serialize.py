"""JSON interchange for groupoids, crossed groupoids, diagrams, morphisms and
fixture specs.

Documents are wrapped in an envelope {"formatVersion": "crossed-desc/1",
"kind": ..., "payload": ...}.  All tables are fully explicit: composition is a
list of [after, before, result] triples (the "before first" convention), and
output is canonical — sorted keys, sorted id lists — so serialization is
byte-stable and round-trips exactly.
"""

from __future__ import annotations

import json

from .crossed import CrossedGroupoid, CrossedMorphism, DisconnectedGroupoid, FiniteGroup
from .cosimplicial import CrossedDiagram, DiagramMorphism
from .fixtures import DEFAULT_SIZE_BOUND, FixtureSpec, build_fixture
from .groupoid import FiniteGroupoid
from .validation import LoadError, ResourceBoundError

FORMAT_VERSION = "crossed-desc/1"
KINDS = ("groupoid", "crossed", "diagram", "diagram-morphism", "fixture-spec")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def envelope(kind: str, payload) -> dict:
    if kind not in KINDS:
        raise LoadError(f"unknown document kind {kind!r}")
    return {"formatVersion": FORMAT_VERSION, "kind": kind, "payload": payload}


# -- groupoids ----------------------------------------------------------


def groupoid_to_json(G: FiniteGroupoid) -> dict:
    return {
        "objects": sorted(G.objects),
        "morphisms": [
            {"id": m, "source": G.source[m], "target": G.target[m]}
            for m in sorted(G.source)
        ],
        "identities": dict(sorted(G.identities.items())),
        "compose": sorted([a, b, r] for (a, b), r in G.table.items()),
        "inverses": dict(sorted(G.inverses.items())),
    }


def _require(d, key, kind):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise LoadError(f"{kind} payload is missing {key!r}") from None


def groupoid_from_json(d: dict) -> FiniteGroupoid:
    morphisms = _require(d, "morphisms", "groupoid")
    return FiniteGroupoid(
        objects=tuple(_require(d, "objects", "groupoid")),
        source={m["id"]: m["source"] for m in morphisms},
        target={m["id"]: m["target"] for m in morphisms},
        identities=dict(_require(d, "identities", "groupoid")),
        table={(a, b): r for a, b, r in _require(d, "compose", "groupoid")},
        inverses=dict(_require(d, "inverses", "groupoid")),
    )


# -- groups and crossed groupoids ---------------------------------------


def group_to_json(grp: FiniteGroup, bound: int = DEFAULT_SIZE_BOUND) -> dict:
    n = len(grp)
    if n * n > bound:
        raise ResourceBoundError(
            f"group of order {n} needs {n * n} composition entries, over the bound"
        )
    return {
        "elements": sorted(grp.elements),
        "identity": grp.identity,
        "compose": sorted([a, b, grp.mul(a, b)] for a in grp for b in grp),
        "inverses": {a: grp.inv(a) for a in sorted(grp.elements)},
    }


def group_from_json(d: dict) -> FiniteGroup:
    return FiniteGroup.from_table(
        tuple(_require(d, "elements", "group")),
        {(a, b): r for a, b, r in _require(d, "compose", "group")},
        _require(d, "identity", "group"),
        dict(_require(d, "inverses", "group")),
    )


def crossed_to_json(C: CrossedGroupoid, bound: int = DEFAULT_SIZE_BOUND) -> dict:
    return {
        "g1": groupoid_to_json(C.g1),
        "g2": {
            x: group_to_json(C.g2.group(x), bound) for x in sorted(C.g2.groups)
        },
        "twist": sorted([g, a, r] for (g, a), r in C.twist_table.items()),
        "feedback": dict(sorted(C.feedback_table.items())),
    }


def crossed_from_json(d: dict) -> CrossedGroupoid:
    g2 = DisconnectedGroupoid(
        {x: group_from_json(gd) for x, gd in _require(d, "g2", "crossed").items()}
    )
    return CrossedGroupoid(
        groupoid_from_json(_require(d, "g1", "crossed")),
        g2,
        {(g, a): r for g, a, r in _require(d, "twist", "crossed")},
        dict(_require(d, "feedback", "crossed")),
    )


# -- diagrams and their morphisms ---------------------------------------


def _maps_to_json(obj_map: dict, mor1_map: dict, mor2_map: dict) -> dict:
    return {
        "objects": dict(sorted(obj_map.items())),
        "mor1": dict(sorted(mor1_map.items())),
        "mor2": dict(sorted(mor2_map.items())),
    }


def diagram_to_json(D: CrossedDiagram, bound: int = DEFAULT_SIZE_BOUND) -> dict:
    return {
        "levels": [crossed_to_json(L, bound) for L in D.levels],
        "cofaces": {
            f"{p},{k}": _maps_to_json(d.obj_map, d.mor1_map, d.mor2_map)
            for (p, k), d in sorted(D.cofaces.items())
        },
    }


def diagram_from_json(d: dict) -> CrossedDiagram:
    levels = tuple(crossed_from_json(ld) for ld in _require(d, "levels", "diagram"))
    if len(levels) != 4:
        raise LoadError("a diagram document needs exactly four levels")
    cofaces = {}
    for key, maps in _require(d, "cofaces", "diagram").items():
        try:
            p, k = (int(part) for part in key.split(","))
        except ValueError:
            raise LoadError(f"bad coface key {key!r}; expected 'p,k'") from None
        cofaces[(p, k)] = CrossedMorphism(
            levels[p],
            levels[p + 1],
            dict(_require(maps, "objects", "coface")),
            dict(_require(maps, "mor1", "coface")),
            dict(_require(maps, "mor2", "coface")),
        )
    return CrossedDiagram(levels, cofaces)


def diagram_morphism_to_json(
    F: DiagramMorphism, bound: int = DEFAULT_SIZE_BOUND
) -> dict:
    return {
        "source": diagram_to_json(F.source, bound),
        "target": diagram_to_json(F.target, bound),
        "levels": [
            _maps_to_json(Fp.obj_map, Fp.mor1_map, Fp.mor2_map) for Fp in F.levels
        ],
    }


def diagram_morphism_from_json(d: dict) -> DiagramMorphism:
    source = _resolve_embedded_diagram(_require(d, "source", "diagram-morphism"))
    target = _resolve_embedded_diagram(_require(d, "target", "diagram-morphism"))
    maps = _require(d, "levels", "diagram-morphism")
    if len(maps) != 4:
        raise LoadError("a diagram-morphism document needs exactly four level maps")
    levels = tuple(
        CrossedMorphism(
            source.levels[p],
            target.levels[p],
            dict(_require(maps[p], "objects", "level map")),
            dict(_require(maps[p], "mor1", "level map")),
            dict(_require(maps[p], "mor2", "level map")),
        )
        for p in range(4)
    )
    return DiagramMorphism(source, target, levels)


def _resolve_embedded_diagram(d: dict) -> CrossedDiagram:
    """An embedded diagram: explicit tables, or a fixture spec to expand."""
    if "fixture" in d:
        spec = d["fixture"]
        kind, built = build_fixture(FixtureSpec(spec["kind"], spec.get("params", {})))
        if kind != "diagram":
            raise LoadError("embedded fixture does not produce a diagram")
        return built
    return diagram_from_json(d)


# -- fixture specs ------------------------------------------------------


def fixture_spec_to_json(spec: FixtureSpec) -> dict:
    return {"kind": spec.kind, "params": spec.params}


def fixture_spec_from_json(d: dict) -> FixtureSpec:
    return FixtureSpec(_require(d, "kind", "fixture-spec"), dict(d.get("params", {})))


# -- documents ----------------------------------------------------------

_PARSERS = {
    "groupoid": groupoid_from_json,
    "crossed": crossed_from_json,
    "diagram": diagram_from_json,
    "diagram-morphism": diagram_morphism_from_json,
    "fixture-spec": fixture_spec_from_json,
}


def parse_document(text: str) -> tuple[str, object]:
    """Parse an envelope; returns (kind, structure).

    json.JSONDecodeError propagates for syntactically invalid input; malformed
    envelopes or payloads raise LoadError.
    """
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise LoadError("document is not a JSON object")
    if doc.get("formatVersion") != FORMAT_VERSION:
        raise LoadError(f"unrecognized format version {doc.get('formatVersion')!r}")
    kind = doc.get("kind")
    if kind not in _PARSERS:
        raise LoadError(f"unknown document kind {kind!r}")
    payload = doc.get("payload")
    if payload is None:
        raise LoadError("document has no payload")
    try:
        return kind, _PARSERS[kind](payload)
    except (TypeError, AttributeError) as exc:
        raise LoadError(f"malformed {kind} payload: {exc}") from None


def serialize_document(kind: str, structure, bound: int = DEFAULT_SIZE_BOUND) -> str:
    if kind == "groupoid":
        payload = groupoid_to_json(structure)
    elif kind == "crossed":
        payload = crossed_to_json(structure, bound)
    elif kind == "diagram":
        payload = diagram_to_json(structure, bound)
    elif kind == "diagram-morphism":
        payload = diagram_morphism_to_json(structure, bound)
    elif kind == "fixture-spec":
        payload = fixture_spec_to_json(structure)
    else:
        raise LoadError(f"unknown document kind {kind!r}")
    return dumps_canonical(envelope(kind, payload))
