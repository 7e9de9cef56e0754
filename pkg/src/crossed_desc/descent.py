"""Descent data in a crossed diagram, gauge transformations, and their
classification.

A descent datum is a triple (x, g, a): an object of level 0, a 1-morphism
x_(0) -> x_(1) of level 1, and a 2-morphism of level 2 at x_(0), subject to
the failure-of-1-cocycle condition in level 2 and the twisted-2-cocycle
condition in level 3.  Gauge transformations (f, c) relate such triples; they
form an equivalence relation whose identity, composition, and inversion are
implemented here, together with the completion operation that fills in the
unique third component over a partial datum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cosimplicial import MOR1, MOR2, OBJ, CrossedDiagram, Face, pushforward
from .groupoid import Word, evaluate_word
from .validation import (
    CrossedDescError,
    DomainError,
    ResourceBoundError,
    ValidationReport,
)

DEFAULT_CANDIDATE_BOUND = 1_000_000


@dataclass(frozen=True, order=True)
class DescentDatum:
    x: str
    g: str
    a: str


@dataclass(frozen=True, order=True)
class PartialDescentDatum:
    x: str
    g: str


@dataclass(frozen=True, order=True)
class GaugeTransformation:
    f: str
    c: str


# -- face shorthands ----------------------------------------------------


def vertex_object(D: CrossedDiagram, x: str, i: int, q: int) -> str:
    """The level-q object x_(i)."""
    return pushforward(D, Face((i,), q), x, OBJ)


def _push1(D: CrossedDiagram, m: str, seq: tuple[int, ...], q: int) -> str:
    return pushforward(D, Face(seq, q), m, MOR1)


def _push2(D: CrossedDiagram, a: str, seq: tuple[int, ...], q: int) -> str:
    return pushforward(D, Face(seq, q), a, MOR2)


# -- typing checks ------------------------------------------------------


def _check_datum_typing(D: CrossedDiagram, t: DescentDatum) -> None:
    L0, L1, L2 = D.levels[0], D.levels[1], D.levels[2]
    if t.x not in set(L0.objects):
        raise DomainError(f"{t.x!r} is not an object of level 0")
    if not L1.g1.contains_morphism(t.g):
        raise DomainError(f"{t.g!r} is not a 1-morphism of level 1")
    x0, x1 = vertex_object(D, t.x, 0, 1), vertex_object(D, t.x, 1, 1)
    if L1.g1.src(t.g) != x0 or L1.g1.dst(t.g) != x1:
        raise DomainError(
            f"{t.g!r} has endpoints {L1.g1.src(t.g)!r} -> {L1.g1.dst(t.g)!r}, "
            f"expected {x0!r} -> {x1!r}"
        )
    if t.a not in L2.g2.owner:
        raise DomainError(f"{t.a!r} is not a 2-morphism of level 2")
    x0_2 = vertex_object(D, t.x, 0, 2)
    if L2.g2.object_of(t.a) != x0_2:
        raise DomainError(f"{t.a!r} lives at {L2.g2.object_of(t.a)!r}, expected {x0_2!r}")


def _check_partial_typing(D: CrossedDiagram, t: PartialDescentDatum) -> None:
    _check_datum_typing(D, DescentDatum(t.x, t.g, D.levels[2].g2.identity(vertex_object(D, t.x, 0, 2))))


def _check_gauge_typing(
    D: CrossedDiagram, t: GaugeTransformation, x: str, x_prime: str
) -> None:
    L0, L1 = D.levels[0], D.levels[1]
    if not L0.g1.contains_morphism(t.f):
        raise DomainError(f"{t.f!r} is not a 1-morphism of level 0")
    if L0.g1.src(t.f) != x or L0.g1.dst(t.f) != x_prime:
        raise DomainError(
            f"{t.f!r} has endpoints {L0.g1.src(t.f)!r} -> {L0.g1.dst(t.f)!r}, "
            f"expected {x!r} -> {x_prime!r}"
        )
    if t.c not in L1.g2.owner:
        raise DomainError(f"{t.c!r} is not a 2-morphism of level 1")
    x0 = vertex_object(D, x, 0, 1)
    if L1.g2.object_of(t.c) != x0:
        raise DomainError(f"{t.c!r} lives at {L1.g2.object_of(t.c)!r}, expected {x0!r}")


# -- the two descent conditions -----------------------------------------


def is_descent_datum(D: CrossedDiagram, t: DescentDatum) -> tuple[bool, ValidationReport]:
    """Check both descent conditions; ill-typed input raises, it is not False."""
    _check_datum_typing(D, t)
    report = ValidationReport()
    L2, L3 = D.levels[2], D.levels[3]

    g01 = _push1(D, t.g, (0, 1), 2)
    g02 = _push1(D, t.g, (0, 2), 2)
    g12 = _push1(D, t.g, (1, 2), 2)
    lhs1 = evaluate_word(L2.g1, Word.of((g02, -1), (g12, +1), (g01, +1)))
    rhs1 = L2.feedback(t.a)
    if lhs1 != rhs1:
        report.add(
            "cocycle-failure",
            f"g_(0,2)^-1 . g_(1,2) . g_(0,1) = {lhs1} but feedback(a) = {rhs1}",
        )

    a012 = _push2(D, t.a, (0, 1, 2), 3)
    a013 = _push2(D, t.a, (0, 1, 3), 3)
    a023 = _push2(D, t.a, (0, 2, 3), 3)
    a123 = _push2(D, t.a, (1, 2, 3), 3)
    g01_3 = _push1(D, t.g, (0, 1), 3)
    grp = L3.g2
    lhs2 = grp.mul(grp.mul(grp.inv(a013), a023), a012)
    rhs2 = L3.twist(L3.g1.inverse(g01_3), a123)
    if lhs2 != rhs2:
        report.add(
            "twisted-2-cocycle",
            f"a_(0,1,3)^-1 . a_(0,2,3) . a_(0,1,2) = {lhs2} but "
            f"twist(g_(0,1)^-1, a_(1,2,3)) = {rhs2}",
        )
    return report.ok, report


def enumerate_descent(
    D: CrossedDiagram, bound: int = DEFAULT_CANDIDATE_BOUND
) -> list[DescentDatum]:
    """All descent data, in lexicographic (x, g, a) order."""
    total = 0
    plan = []
    for x in sorted(D.levels[0].objects):
        x0, x1 = vertex_object(D, x, 0, 1), vertex_object(D, x, 1, 1)
        homset = D.levels[1].g1.hom(x0, x1)
        x0_2 = vertex_object(D, x, 0, 2)
        cells = D.levels[2].g2.group(x0_2).elements
        total += len(homset) * len(cells)
        plan.append((x, homset, cells))
    if total > bound:
        raise ResourceBoundError(
            f"{total} candidate triples exceed the bound of {bound}"
        )
    out = []
    for x, homset, cells in plan:
        for g in homset:
            for a in sorted(cells):
                t = DescentDatum(x, g, a)
                ok, _ = is_descent_datum(D, t)
                if ok:
                    out.append(t)
    return out


# -- gauge transformations ----------------------------------------------


def _predicted_g(D: CrossedDiagram, src_g: str, t: GaugeTransformation) -> str:
    """f_(1) . g . feedback(c) . f_(0)^-1 in level 1."""
    L1 = D.levels[1]
    f0 = _push1(D, t.f, (0,), 1)
    f1 = _push1(D, t.f, (1,), 1)
    return evaluate_word(
        L1.g1, Word.of((f1, +1), (src_g, +1), (L1.feedback(t.c), +1), (f0, -1))
    )


def _predicted_a(D: CrossedDiagram, src: DescentDatum, t: GaugeTransformation) -> str:
    """twist(f_(0), c_(0,2)^-1 . a . twist(g_(0,1)^-1, c_(1,2)) . c_(0,1)) in level 2."""
    L2 = D.levels[2]
    grp = L2.g2
    f0 = _push1(D, t.f, (0,), 2)
    g01 = _push1(D, src.g, (0, 1), 2)
    c01 = _push2(D, t.c, (0, 1), 2)
    c02 = _push2(D, t.c, (0, 2), 2)
    c12 = _push2(D, t.c, (1, 2), 2)
    inner = grp.mul(
        grp.mul(grp.mul(grp.inv(c02), src.a), L2.twist(L2.g1.inverse(g01), c12)),
        c01,
    )
    return L2.twist(f0, inner)


def is_partial_gauge(
    D: CrossedDiagram,
    t: GaugeTransformation,
    src: PartialDescentDatum,
    dst: PartialDescentDatum,
) -> bool:
    """Condition (i) alone, between partial descent data."""
    _check_partial_typing(D, src)
    _check_partial_typing(D, dst)
    _check_gauge_typing(D, t, src.x, dst.x)
    return dst.g == _predicted_g(D, src.g, t)


def is_gauge(
    D: CrossedDiagram,
    t: GaugeTransformation,
    src: DescentDatum,
    dst: DescentDatum,
) -> tuple[bool, ValidationReport]:
    """Check both gauge conditions between two descent data."""
    _check_datum_typing(D, src)
    _check_datum_typing(D, dst)
    _check_gauge_typing(D, t, src.x, dst.x)
    report = ValidationReport()
    want_g = _predicted_g(D, src.g, t)
    if dst.g != want_g:
        report.add("gauge-1", f"destination 1-morphism is {dst.g}, expected {want_g}")
    want_a = _predicted_a(D, src, t)
    if dst.a != want_a:
        report.add("gauge-2", f"destination 2-morphism is {dst.a}, expected {want_a}")
    return report.ok, report


def gauge_identity(D: CrossedDiagram, t: DescentDatum) -> GaugeTransformation:
    """(1_x, 1) from a descent datum to itself."""
    x0 = vertex_object(D, t.x, 0, 1)
    return GaugeTransformation(
        D.levels[0].g1.identity(t.x), D.levels[1].g2.identity(x0)
    )


def gauge_compose(
    D: CrossedDiagram, t2: GaugeTransformation, t1: GaugeTransformation
) -> GaugeTransformation:
    """(f' . f, c . twist(f_(0)^-1, c')) for t1 followed by t2."""
    L0, L1 = D.levels[0], D.levels[1]
    if L0.g1.dst(t1.f) != L0.g1.src(t2.f):
        raise DomainError("gauge transformations are not composable")
    f0 = _push1(D, t1.f, (0,), 1)
    c = L1.g2.mul(t1.c, L1.twist(L1.g1.inverse(f0), t2.c))
    return GaugeTransformation(L0.g1.compose(t2.f, t1.f), c)


def gauge_invert(D: CrossedDiagram, t: GaugeTransformation) -> GaugeTransformation:
    """(f^-1, twist(f_(0), c^-1))."""
    L0, L1 = D.levels[0], D.levels[1]
    f0 = _push1(D, t.f, (0,), 1)
    return GaugeTransformation(
        L0.g1.inverse(t.f), L1.twist(f0, L1.g2.inv(t.c))
    )


# -- completion ---------------------------------------------------------


def complete_descent(
    D: CrossedDiagram,
    src: DescentDatum,
    partial_dst: PartialDescentDatum,
    t: GaugeTransformation,
) -> tuple[str, DescentDatum]:
    """Fill in the unique third component making t a full gauge transformation.

    Requires t to be a partial gauge transformation from (src.x, src.g) to
    partial_dst; returns (a', completed datum).  The completed datum passes
    the descent checks and t verifies as a gauge transformation to it; both
    facts are asserted.
    """
    ok, _ = is_descent_datum(D, src)
    if not ok:
        raise DomainError("source triple is not a descent datum")
    if not is_partial_gauge(D, t, PartialDescentDatum(src.x, src.g), partial_dst):
        raise DomainError("not a partial gauge transformation to the partial datum")
    a_prime = _predicted_a(D, src, t)
    dst = DescentDatum(partial_dst.x, partial_dst.g, a_prime)
    ok, report = is_descent_datum(D, dst)
    if not ok:
        raise CrossedDescError(f"completion is not a descent datum: {report.violations}")
    ok, report = is_gauge(D, t, src, dst)
    if not ok:
        raise CrossedDescError(f"completion does not verify as a gauge: {report.violations}")
    return a_prime, dst


def completion_steps(
    D: CrossedDiagram,
    src: DescentDatum,
    partial_dst: PartialDescentDatum,
    t: GaugeTransformation,
) -> list[tuple[str, str]]:
    """The chain of level-2 values verifying the first descent condition of a
    completed datum, one entry per rewriting step.  All values coincide on
    valid input; a mismatch pinpoints the broken step.
    """
    a_prime, dst = complete_descent(D, src, partial_dst, t)
    L2 = D.levels[2]
    G, grp = L2.g1, L2.g2

    f = [_push1(D, t.f, (i,), 2) for i in range(3)]
    gm = {ij: _push1(D, src.g, ij, 2) for ij in ((0, 1), (0, 2), (1, 2))}
    cm = {ij: _push2(D, t.c, ij, 2) for ij in ((0, 1), (0, 2), (1, 2))}
    gp = {ij: _push1(D, dst.g, ij, 2) for ij in ((0, 1), (0, 2), (1, 2))}
    Dc = {ij: L2.feedback(cm[ij]) for ij in cm}

    def word(*factors):
        return evaluate_word(G, Word.of(*factors))

    target = word((gp[(0, 2)], -1), (gp[(1, 2)], +1), (gp[(0, 1)], +1))

    expand = lambda ij, i, j: [(f[j], +1), (gm[ij], +1), (Dc[ij], +1), (f[i], -1)]
    piece02 = word(*expand((0, 2), 0, 2))
    expanded = word(
        (piece02, -1), *expand((1, 2), 1, 2), *expand((0, 1), 0, 1)
    )

    cancelled = word(
        (f[0], +1), (Dc[(0, 2)], -1), (gm[(0, 2)], -1), (gm[(1, 2)], +1),
        (Dc[(1, 2)], +1), (gm[(0, 1)], +1), (Dc[(0, 1)], +1), (f[0], -1),
    )

    Da = L2.feedback(src.a)
    substituted = word(
        (f[0], +1), (Dc[(0, 2)], -1), (Da, +1), (gm[(0, 1)], -1),
        (Dc[(1, 2)], +1), (gm[(0, 1)], +1), (Dc[(0, 1)], +1), (f[0], -1),
    )

    twisted_c12 = L2.twist(G.inverse(gm[(0, 1)]), cm[(1, 2)])
    folded = word(
        (f[0], +1), (Dc[(0, 2)], -1), (Da, +1),
        (L2.feedback(twisted_c12), +1), (Dc[(0, 1)], +1), (f[0], -1),
    )

    inner = grp.mul(
        grp.mul(grp.mul(grp.inv(cm[(0, 2)]), src.a), twisted_c12), cm[(0, 1)]
    )
    pulled_out = L2.feedback(L2.twist(f[0], inner))

    definition = L2.feedback(a_prime)

    return [
        ("target", target),
        ("expanded", expanded),
        ("cancelled", cancelled),
        ("cocycle-substituted", substituted),
        ("twist-folded", folded),
        ("feedback-pulled-out", pulled_out),
        ("definition", definition),
    ]


# -- classification -----------------------------------------------------


@dataclass
class ClassTable:
    """Gauge classes with canonical representatives and verified witnesses."""

    members: list[DescentDatum]
    rep_of: dict[DescentDatum, DescentDatum]
    witnesses: dict[DescentDatum, GaugeTransformation]  # member -> gauge to its rep

    @property
    def reps(self) -> list[DescentDatum]:
        return sorted(set(self.rep_of.values()))

    def class_members(self, rep: DescentDatum) -> list[DescentDatum]:
        return sorted(m for m, r in self.rep_of.items() if r == rep)


def gauge_classes(
    D: CrossedDiagram, bound: int = DEFAULT_CANDIDATE_BOUND
) -> ClassTable:
    """Partition all descent data by scanning typed (source, f, c) candidates.

    Every candidate determines its destination uniquely, so the scan visits
    the complete gauge relation.  Witness gauges to the canonical (least)
    representative are accumulated by breadth-first composition and verified.
    """
    members = enumerate_descent(D, bound)
    member_set = set(members)
    L0, L1 = D.levels[0], D.levels[1]

    total = 0
    for t in members:
        x0 = vertex_object(D, t.x, 0, 1)
        n_c = len(L1.g2.group(x0))
        n_f = sum(1 for m in L0.g1.source if L0.g1.source[m] == t.x)
        total += n_c * n_f
    if total > bound:
        raise ResourceBoundError(f"{total} gauge candidates exceed the bound of {bound}")

    parent: dict[DescentDatum, DescentDatum] = {m: m for m in members}

    def find(m):
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    edges: dict[DescentDatum, list[tuple[DescentDatum, GaugeTransformation, bool]]] = {
        m: [] for m in members
    }
    for src in members:
        x0 = vertex_object(D, src.x, 0, 1)
        for fm in sorted(m for m in L0.g1.source if L0.g1.source[m] == src.x):
            x_prime = L0.g1.dst(fm)
            for c in sorted(L1.g2.group(x0).elements):
                t = GaugeTransformation(fm, c)
                dst = DescentDatum(x_prime, _predicted_g(D, src.g, t), _predicted_a(D, src, t))
                if dst not in member_set:
                    raise CrossedDescError(
                        f"gauge image {dst} of {src} is not a descent datum"
                    )
                edges[src].append((dst, t, True))
                edges[dst].append((src, t, False))
                ra, rb = find(src), find(dst)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    blocks: dict[DescentDatum, list[DescentDatum]] = {}
    for m in members:
        blocks.setdefault(find(m), []).append(m)

    rep_of: dict[DescentDatum, DescentDatum] = {}
    witnesses: dict[DescentDatum, GaugeTransformation] = {}
    for block in blocks.values():
        rep = min(block)
        # breadth-first from the representative, carrying gauges node -> rep
        witnesses[rep] = gauge_identity(D, rep)
        rep_of[rep] = rep
        frontier = [rep]
        while frontier:
            nxt = []
            for node in frontier:
                w_node = witnesses[node]
                for other, t, forward in edges[node]:
                    if other in witnesses:
                        continue
                    if forward:
                        # t : node -> other, so other -> rep is w_node . t^-1
                        w = gauge_compose(D, w_node, gauge_invert(D, t))
                    else:
                        # t : other -> node
                        w = gauge_compose(D, w_node, t)
                    witnesses[other] = w
                    rep_of[other] = rep
                    nxt.append(other)
            frontier = nxt
    for m in members:
        ok, report = is_gauge(D, witnesses[m], m, rep_of[m])
        if not ok:
            raise CrossedDescError(f"witness for {m} failed verification: {report.violations}")
    return ClassTable(members, rep_of, witnesses)
