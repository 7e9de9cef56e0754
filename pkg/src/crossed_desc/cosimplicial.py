"""Face combinatorics of the 3-truncated injective simplex category, and
diagrams of crossed groupoids indexed by it.

A diagram holds four crossed groupoids (levels 0..3) and coface morphisms
d^k : level p -> level p+1 for 0 <= k <= p+1, p <= 2, satisfying the
cosimplicial identities.  Elements are pushed to faces by composing cofaces
along the canonical factorization of the face.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .crossed import (
    CrossedGroupoid,
    CrossedMorphism,
    compose_crossed_morphisms,
    crossed_morphisms_equal,
    validate_crossed,
    validate_crossed_morphism,
)
from .validation import DomainError, LoadError, ValidationReport

MAX_DIM = 3


@dataclass(frozen=True)
class Face:
    """An injective monotone map p -> q, stored as its strictly increasing
    vertex sequence (i_0, ..., i_p)."""

    seq: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not self.seq:
            raise DomainError("a face needs at least one vertex")
        if any(b <= a for a, b in zip(self.seq, self.seq[1:])):
            raise DomainError(f"face {self.seq} is not strictly increasing")
        if self.seq[0] < 0 or self.seq[-1] > self.q:
            raise DomainError(f"face {self.seq} out of range for target dimension {self.q}")
        if self.p > MAX_DIM or self.q > MAX_DIM:
            raise DomainError("dimensions above 3 are not representable")

    @property
    def p(self) -> int:
        return len(self.seq) - 1

    def as_function(self) -> tuple[int, ...]:
        return self.seq


def face_from_seq(seq, q: int) -> Face:
    return Face(tuple(int(i) for i in seq), int(q))


@lru_cache(maxsize=None)
def _factorize(seq: tuple[int, ...], q: int) -> tuple[int, ...]:
    missing = tuple(sorted(set(range(q + 1)) - set(seq)))
    return missing


def face_factorize(f: Face) -> tuple[int, ...]:
    """Coface indices whose composite is f, in application order.

    Skipped vertices in increasing order: applying d^{k_1}, then d^{k_2}, ...
    (k_1 < k_2 < ...) reproduces f as a function.
    """
    return _factorize(f.seq, f.q)


def compose_faces(g: Face, f: Face) -> Face:
    """The face g . f (apply f first)."""
    if f.q != g.p:
        raise DomainError("faces are not composable")
    return Face(tuple(g.seq[i] for i in f.seq), g.q)


@dataclass
class CrossedDiagram:
    """Levels 0..3 with coface crossed morphisms, keyed (level, index)."""

    levels: tuple[CrossedGroupoid, CrossedGroupoid, CrossedGroupoid, CrossedGroupoid]
    cofaces: dict[tuple[int, int], CrossedMorphism]

    def __post_init__(self):
        if len(self.levels) != 4:
            raise LoadError("a diagram has exactly four levels")
        expected = {(p, k) for p in range(3) for k in range(p + 2)}
        if set(self.cofaces) != expected:
            raise LoadError("coface table must hold d^k for 0 <= k <= p+1, p <= 2")
        for (p, k), d in self.cofaces.items():
            if d.source is not self.levels[p] or d.target is not self.levels[p + 1]:
                raise LoadError(f"coface ({p}, {k}) does not connect level {p} to {p + 1}")

    def coface(self, p: int, k: int) -> CrossedMorphism:
        try:
            return self.cofaces[(p, k)]
        except KeyError:
            raise DomainError(f"no coface d^{k} at level {p}") from None


OBJ, MOR1, MOR2 = "object", "mor1", "mor2"


def _infer_kind(level: CrossedGroupoid, e: str) -> str:
    hits = []
    if e in set(level.objects):
        hits.append(OBJ)
    if level.g1.contains_morphism(e):
        hits.append(MOR1)
    if e in level.g2.owner:
        hits.append(MOR2)
    if not hits:
        raise DomainError(f"{e!r} is not an element of this level")
    if len(hits) > 1:
        raise DomainError(f"{e!r} is ambiguous ({'/'.join(hits)}); pass kind explicitly")
    return hits[0]


def pushforward(D: CrossedDiagram, f: Face, e: str, kind: str | None = None) -> str:
    """Image of a level-p element under the diagram's map for the face f."""
    level = D.levels[f.p]
    if kind is None:
        kind = _infer_kind(level, e)
    cur = e
    dim = f.p
    for k in face_factorize(f):
        d = D.coface(dim, k)
        if kind == OBJ:
            cur = d.apply_obj(cur)
        elif kind == MOR1:
            cur = d.apply_mor1(cur)
        elif kind == MOR2:
            cur = d.apply_mor2(cur)
        else:
            raise DomainError(f"unknown element kind {kind!r}")
        dim += 1
    return cur


def validate_diagram(D: CrossedDiagram, bound: int | None = None) -> ValidationReport:
    """Levels valid, cofaces valid morphisms, cosimplicial identities hold."""
    from .crossed import DEFAULT_CHECK_BOUND

    bound = DEFAULT_CHECK_BOUND if bound is None else bound
    report = ValidationReport()
    for p, level in enumerate(D.levels):
        report.extend(validate_crossed(level, bound), prefix=f"level {p}: ")
    for (p, k), d in sorted(D.cofaces.items()):
        report.extend(validate_crossed_morphism(d, bound), prefix=f"coface d^{k} at {p}: ")
    if not report.ok:
        return report
    for p in range(2):
        for j in range(p + 3):
            for i in range(j):
                # d^j . d^i = d^i . d^{j-1} as maps level p -> level p+2
                lhs = compose_crossed_morphisms(D.coface(p + 1, j), D.coface(p, i))
                rhs = compose_crossed_morphisms(D.coface(p + 1, i), D.coface(p, j - 1))
                if not crossed_morphisms_equal(lhs, rhs):
                    witness = _first_difference(lhs, rhs)
                    report.add(
                        "cosimplicial-identity",
                        f"d^{j} d^{i} != d^{i} d^{j - 1} out of level {p} (at {witness})",
                    )
    return report


def _first_difference(F: CrossedMorphism, G: CrossedMorphism) -> str:
    for attr in ("obj_map", "mor1_map", "mor2_map"):
        a, b = getattr(F, attr), getattr(G, attr)
        for key in sorted(a):
            if a[key] != b.get(key):
                return f"{attr[:-4]} {key}: {a[key]} vs {b.get(key)}"
    return "?"


@dataclass
class DiagramMorphism:
    """A levelwise crossed morphism commuting with all cofaces."""

    source: CrossedDiagram
    target: CrossedDiagram
    levels: tuple[CrossedMorphism, CrossedMorphism, CrossedMorphism, CrossedMorphism]

    def __post_init__(self):
        if len(self.levels) != 4:
            raise LoadError("a diagram morphism has exactly four level maps")
        for p, F in enumerate(self.levels):
            if F.source is not self.source.levels[p] or F.target is not self.target.levels[p]:
                raise LoadError(f"level map {p} does not connect the diagrams' levels")

    def level(self, p: int) -> CrossedMorphism:
        return self.levels[p]


def identity_diagram_morphism(D: CrossedDiagram) -> DiagramMorphism:
    from .crossed import identity_crossed_morphism

    return DiagramMorphism(D, D, tuple(identity_crossed_morphism(L) for L in D.levels))


def validate_diagram_morphism(
    F: DiagramMorphism, bound: int | None = None
) -> ValidationReport:
    """Level maps valid and natural with respect to every coface."""
    from .crossed import DEFAULT_CHECK_BOUND

    bound = DEFAULT_CHECK_BOUND if bound is None else bound
    report = ValidationReport()
    for p, Fp in enumerate(F.levels):
        report.extend(validate_crossed_morphism(Fp, bound), prefix=f"level {p}: ")
    if not report.ok:
        return report
    for (p, k) in sorted(F.source.cofaces):
        lhs = compose_crossed_morphisms(F.levels[p + 1], F.source.coface(p, k))
        rhs = compose_crossed_morphisms(F.target.coface(p, k), F.levels[p])
        if not crossed_morphisms_equal(lhs, rhs):
            report.add(
                "naturality",
                f"level map does not commute with d^{k} at level {p} "
                f"(at {_first_difference(lhs, rhs)})",
            )
    return report
