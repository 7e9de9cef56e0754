"""Finite groupoids as explicit composition tables.

Composition is written ``compose(h, g)`` for "g first, then h"; all tables are
keyed ``(after, before)``.  Structures are immutable after validation and every
operation is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .validation import (
    ComposabilityError,
    DomainError,
    LoadError,
    ValidationReport,
)


@dataclass(frozen=True)
class Word:
    """A formal composite: factors listed left to right in composition order.

    The leftmost factor is applied last (``h . g`` applies ``g`` first), so
    evaluation folds from the right.  ``anchor`` names the object whose
    identity an empty word evaluates to.
    """

    factors: tuple[tuple[str, int], ...]
    anchor: str | None = None

    @staticmethod
    def of(*factors: tuple[str, int], anchor: str | None = None) -> "Word":
        return Word(tuple(factors), anchor)


@dataclass
class FiniteGroupoid:
    """Explicit object/morphism tables with total composition on composable pairs."""

    objects: tuple[str, ...]
    source: dict[str, str]
    target: dict[str, str]
    identities: dict[str, str]  # object -> identity morphism
    table: dict[tuple[str, str], str]  # (after, before) -> composite
    inverses: dict[str, str]

    def __post_init__(self):
        objset = set(self.objects)
        if len(objset) != len(self.objects):
            raise LoadError("duplicate object ids")
        if any(not o for o in self.objects):
            raise LoadError("empty object id")
        if set(self.source) != set(self.target):
            raise LoadError("source/target tables disagree on morphism ids")
        for m in self.source:
            if not m:
                raise LoadError("empty morphism id")
            if self.source[m] not in objset or self.target[m] not in objset:
                raise LoadError(f"morphism {m!r} has endpoints outside the object set")
        morphs = set(self.source)
        for x, e in self.identities.items():
            if x not in objset:
                raise LoadError(f"identity assigned to unknown object {x!r}")
            if e not in morphs:
                raise LoadError(f"identity {e!r} of {x!r} is not a morphism")
        if set(self.identities) != objset:
            raise LoadError("identity table does not cover the object set")
        for (h, g), r in self.table.items():
            if h not in morphs or g not in morphs or r not in morphs:
                raise LoadError(f"composition entry ({h!r}, {g!r}) -> {r!r} has unknown ids")
        for m, mi in self.inverses.items():
            if m not in morphs or mi not in morphs:
                raise LoadError(f"inverse entry {m!r} -> {mi!r} has unknown ids")
        if set(self.inverses) != morphs:
            raise LoadError("inverse table does not cover the morphism set")

    # -- basic accessors -------------------------------------------------

    @property
    def morphisms(self) -> list[str]:
        return sorted(self.source)

    def src(self, m: str) -> str:
        try:
            return self.source[m]
        except KeyError:
            raise DomainError(f"unknown morphism {m!r}") from None

    def dst(self, m: str) -> str:
        try:
            return self.target[m]
        except KeyError:
            raise DomainError(f"unknown morphism {m!r}") from None

    def identity(self, x: str) -> str:
        try:
            return self.identities[x]
        except KeyError:
            raise DomainError(f"unknown object {x!r}") from None

    def compose(self, after: str, before: str) -> str:
        """The composite "before first, then after"."""
        try:
            return self.table[(after, before)]
        except KeyError:
            if self.dst(before) != self.src(after):
                raise ComposabilityError(
                    f"cannot compose {after!r} after {before!r}: "
                    f"{before!r} ends at {self.dst(before)!r} but "
                    f"{after!r} starts at {self.src(after)!r}"
                ) from None
            raise LoadError(
                f"composable pair ({after!r}, {before!r}) missing from table"
            ) from None

    def inverse(self, m: str) -> str:
        try:
            return self.inverses[m]
        except KeyError:
            raise DomainError(f"unknown morphism {m!r}") from None

    def hom(self, x: str, y: str) -> list[str]:
        """All morphisms x -> y, sorted."""
        return sorted(
            m for m in self.source if self.source[m] == x and self.target[m] == y
        )

    def contains_morphism(self, m: str) -> bool:
        return m in self.source


def validate_groupoid(G: FiniteGroupoid) -> ValidationReport:
    """Exhaustively check the groupoid axioms, listing every violated instance."""
    report = ValidationReport()
    morphs = G.morphisms

    # composition domain: defined exactly on composable pairs
    for h, g in itertools.product(morphs, repeat=2):
        composable = G.target[g] == G.source[h]
        defined = (h, g) in G.table
        if composable and not defined:
            report.add("composition-domain", f"composable pair ({h}, {g}) undefined")
        elif defined and not composable:
            report.add("composition-domain", f"non-composable pair ({h}, {g}) defined")
        elif defined:
            r = G.table[(h, g)]
            if G.source[r] != G.source[g] or G.target[r] != G.target[h]:
                report.add(
                    "composition-endpoints",
                    f"({h}, {g}) -> {r} has endpoints "
                    f"{G.source[r]} -> {G.target[r]}, expected "
                    f"{G.source[g]} -> {G.target[h]}",
                )

    # identities are endomorphisms at their object and two-sided units
    for x, e in G.identities.items():
        if G.source[e] != x or G.target[e] != x:
            report.add("unit-law", f"identity {e} of {x} is not an endomorphism at {x}")
            continue
        for m in morphs:
            if G.source[m] == x and G.table.get((m, e)) != m:
                report.add("unit-law", f"{m} . 1_{x} != {m}")
            if G.target[m] == x and G.table.get((e, m)) != m:
                report.add("unit-law", f"1_{x} . {m} != {m}")

    # inverses
    for m in morphs:
        mi = G.inverses[m]
        if G.source[mi] != G.target[m] or G.target[mi] != G.source[m]:
            report.add("inverse-law", f"inverse {mi} of {m} has wrong endpoints")
            continue
        if G.table.get((mi, m)) != G.identities[G.source[m]]:
            report.add("inverse-law", f"{mi} . {m} != identity at {G.source[m]}")
        if G.table.get((m, mi)) != G.identities[G.target[m]]:
            report.add("inverse-law", f"{m} . {mi} != identity at {G.target[m]}")

    # associativity on all composable triples
    for g in morphs:
        for h in morphs:
            if G.target[g] != G.source[h] or (h, g) not in G.table:
                continue
            for k in morphs:
                if G.target[h] != G.source[k] or (k, h) not in G.table:
                    continue
                lhs = G.table.get((G.table[(k, h)], g))
                rhs = G.table.get((k, G.table[(h, g)]))
                if lhs != rhs:
                    report.add("associativity", f"({k} . {h}) . {g} != {k} . ({h} . {g})")
    return report


def evaluate_word(G: FiniteGroupoid, w: Word) -> str:
    """Evaluate a formal composite right to left, resolving exponents.

    The empty word requires an anchor object and returns its identity.
    """
    if not w.factors:
        if w.anchor is None:
            raise DomainError("empty word needs an anchor object")
        return G.identity(w.anchor)
    resolved = []
    for m, exp in w.factors:
        if exp == 1:
            resolved.append(m)
        elif exp == -1:
            resolved.append(G.inverse(m))
        else:
            raise DomainError(f"exponent must be +1 or -1, got {exp}")
    acc = resolved[-1]
    for m in reversed(resolved[:-1]):
        acc = G.compose(m, acc)
    return acc


def pi0_groupoid(G: FiniteGroupoid) -> dict[str, str]:
    """Connected components: maps each object to the least object of its block.

    Objects share a block iff some morphism connects them.
    """
    parent = {x: x for x in G.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in G.source:
        a, b = find(G.source[m]), find(G.target[m])
        if a != b:
            parent[max(a, b)] = min(a, b)
    # path-compress fully, then relabel each block by its least member
    roots: dict[str, list[str]] = {}
    for x in G.objects:
        roots.setdefault(find(x), []).append(x)
    out = {}
    for members in roots.values():
        label = min(members)
        for x in members:
            out[x] = label
    return out


def pi0_blocks(pi0: dict[str, str]) -> list[tuple[str, ...]]:
    """Blocks of a component map, each sorted, listed by label."""
    blocks: dict[str, list[str]] = {}
    for x, label in pi0.items():
        blocks.setdefault(label, []).append(x)
    return [tuple(sorted(blocks[label])) for label in sorted(blocks)]
