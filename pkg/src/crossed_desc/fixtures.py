"""Deterministic generators of valid crossed groupoids, diagrams, and weak
equivalences used by the tests and the CLI.

Conventions: 2-morphism ids carry a "2." prefix so that object, 1-morphism and
2-morphism id sets stay disjoint within every structure (pushforward relies on
this).  Fattened ids append "@copy" markers; product ids join components
with "|".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .cosimplicial import CrossedDiagram, DiagramMorphism
from .crossed import (
    CrossedGroupoid,
    CrossedMorphism,
    DisconnectedGroupoid,
    FiniteGroup,
    identity_crossed_morphism,
)
from .groupoid import FiniteGroupoid
from .validation import DomainError, LoadError, ResourceBoundError

DEFAULT_SIZE_BOUND = 1_000_000


# -- elementary groups --------------------------------------------------


def trivial_group(ident: str = "1") -> FiniteGroup:
    return FiniteGroup.from_table((ident,), {(ident, ident): ident}, ident, {ident: ident})


def cyclic_group(n: int, prefix: str = "") -> FiniteGroup:
    """Z/n with elements prefix+"0" .. prefix+str(n-1); identity is the 0."""
    if n < 1:
        raise DomainError("cyclic group order must be positive")
    elems = tuple(f"{prefix}{i}" for i in range(n))
    table = {
        (f"{prefix}{i}", f"{prefix}{j}"): f"{prefix}{(i + j) % n}"
        for i in range(n)
        for j in range(n)
    }
    inv = {f"{prefix}{i}": f"{prefix}{(-i) % n}" for i in range(n)}
    return FiniteGroup.from_table(elems, table, f"{prefix}0", inv)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on {0..n-1}; an element's id is its one-line notation."""
    perms = list(itertools.permutations(range(n)))
    name = {p: "".join(map(str, p)) for p in perms}
    table = {}
    inv = {}
    for p in perms:
        for q in perms:
            # mul(p, q) = p after q
            table[(name[p], name[q])] = name[tuple(p[q[i]] for i in range(n))]
        inv[name[p]] = name[tuple(sorted(range(n), key=lambda i: p[i]))]
    ident = name[tuple(range(n))]
    return FiniteGroup.from_table(tuple(name[p] for p in perms), table, ident, inv)


NAMED_GROUPS: dict[str, Callable[[], FiniteGroup]] = {
    "trivial": trivial_group,
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "s3": lambda: symmetric_group(3),
}


# -- groupoid and crossed-groupoid builders -----------------------------


def one_object_groupoid(grp: FiniteGroup, obj: str = "*",
                        bound: int = DEFAULT_SIZE_BOUND) -> FiniteGroupoid:
    """A group viewed as a groupoid with one object."""
    n = len(grp)
    if n * n > bound:
        raise ResourceBoundError(f"{n * n} composition entries exceed the bound")
    table = {(a, b): grp.mul(a, b) for a in grp for b in grp}
    return FiniteGroupoid(
        objects=(obj,),
        source={a: obj for a in grp},
        target={a: obj for a in grp},
        identities={obj: grp.identity},
        table=table,
        inverses={a: grp.inv(a) for a in grp},
    )


def one_object_crossed(
    g1_grp: FiniteGroup,
    g2_grp: FiniteGroup,
    feedback: dict[str, str],
    twist: Callable[[str, str], str],
    obj: str = "*",
    bound: int = DEFAULT_SIZE_BOUND,
) -> CrossedGroupoid:
    """Assemble a one-object crossed groupoid from explicit group data."""
    if len(g1_grp) * len(g2_grp) > bound:
        raise ResourceBoundError("twist table would exceed the size bound")
    g1 = one_object_groupoid(g1_grp, obj, bound)
    g2 = DisconnectedGroupoid({obj: g2_grp})
    twist_table = {(g, a): twist(g, a) for g in g1_grp for a in g2_grp}
    return CrossedGroupoid(g1, g2, twist_table, dict(feedback))


def crossed_from_normal_subgroup(G: FiniteGroup, N) -> CrossedGroupoid:
    """One object; lower group G, upper group a normal subgroup N with the
    inclusion as feedback and conjugation as twist."""
    N = sorted(N)
    members = set(N)
    for x in N:
        if x not in G:
            raise DomainError(f"{x!r} is not an element of the ambient group")
    if G.identity not in members:
        raise DomainError("subgroup must contain the identity")
    for a in N:
        if G.inv(a) not in members:
            raise DomainError(f"subset is not a subgroup: inverse of {a!r} missing")
        for b in N:
            if G.mul(a, b) not in members:
                raise DomainError(f"subset is not a subgroup: {a!r} . {b!r} escapes")
    for g in G:
        for a in N:
            conj = G.mul(G.mul(g, a), G.inv(g))
            if conj not in members:
                raise DomainError(
                    f"subgroup is not normal: {g!r} . {a!r} . {g!r}^-1 escapes"
                )
    up = {a: f"2.{a}" for a in N}
    table = {(up[a], up[b]): up[G.mul(a, b)] for a in N for b in N}
    g2_grp = FiniteGroup.from_table(
        tuple(up[a] for a in N), table, up[G.identity], {up[a]: up[G.inv(a)] for a in N}
    )
    feedback = {up[a]: a for a in N}

    def twist(g: str, a2: str) -> str:
        a = a2[2:]
        return up[G.mul(G.mul(g, a), G.inv(g))]

    return one_object_crossed(G, g2_grp, feedback, twist)


def crossed_group(g2_grp_base: FiniteGroup) -> CrossedGroupoid:
    """The crossed group with trivial lower group: feedback kills everything.

    Valid exactly when the upper group is abelian; checked here.
    """
    for a in g2_grp_base:
        for b in g2_grp_base:
            if g2_grp_base.mul(a, b) != g2_grp_base.mul(b, a):
                raise DomainError(
                    "trivial feedback requires an abelian upper group "
                    f"({a!r} and {b!r} do not commute)"
                )
    up = {a: f"2.{a}" for a in g2_grp_base}
    table = {
        (up[a], up[b]): up[g2_grp_base.mul(a, b)]
        for a in g2_grp_base
        for b in g2_grp_base
    }
    g2_grp = FiniteGroup.from_table(
        tuple(up[a] for a in g2_grp_base),
        table,
        up[g2_grp_base.identity],
        {up[a]: up[g2_grp_base.inv(a)] for a in g2_grp_base},
    )
    g1_grp = trivial_group()
    feedback = {up[a]: g1_grp.identity for a in g2_grp_base}
    return one_object_crossed(g1_grp, g2_grp, feedback, lambda g, a: a)


# -- automorphism groups ------------------------------------------------


def _element_orders(G: FiniteGroup) -> dict[str, int]:
    orders = {}
    for a in G:
        n, cur = 1, a
        while cur != G.identity:
            cur = G.mul(cur, a)
            n += 1
        orders[a] = n
    return orders


def _generating_words(G: FiniteGroup) -> tuple[list[str], dict[str, tuple[int, ...]]]:
    """A small generating sequence and, per element, one word in the generators."""
    gens: list[str] = []
    words: dict[str, tuple[int, ...]] = {G.identity: ()}
    for e in sorted(G.elements):
        if e in words:
            continue
        gens.append(e)
        gi = len(gens) - 1
        # close under right multiplication by all known generators
        frontier = list(words)
        while frontier:
            nxt = []
            for w in frontier:
                for k, g in enumerate(gens):
                    prod = G.mul(w, g)
                    if prod not in words:
                        words[prod] = words[w] + (k,)
                        nxt.append(prod)
            frontier = nxt
        assert e in words, "closure failed to reach a generator"
        del gi
    return gens, words


def automorphisms(G: FiniteGroup) -> list[dict[str, str]]:
    """All group automorphisms, by backtracking over generator images.

    Intended for small groups (|G| <= 24 or so).
    """
    orders = _element_orders(G)
    gens, words = _generating_words(G)
    by_order: dict[int, list[str]] = {}
    for a in G:
        by_order.setdefault(orders[a], []).append(a)
    results = []
    for images in itertools.product(*(sorted(by_order[orders[g]]) for g in gens)):
        phi = {}
        for e in G:
            val = G.identity
            for k in words[e]:
                val = G.mul(val, images[k])
            phi[e] = val
        if len(set(phi.values())) != len(G):
            continue
        if all(
            phi[G.mul(a, b)] == G.mul(phi[a], phi[b])
            for a in G
            for b in G
        ):
            results.append(phi)
    return results


def inner_crossed(G: FiniteGroup) -> CrossedGroupoid:
    """One object; lower group Aut(G), upper group G, feedback sends an
    element to conjugation by it, twist is evaluation."""
    auts = automorphisms(G)
    order = tuple(G.elements)
    name = {tuple(phi[e] for e in order): ",".join(phi[e] for e in order) for phi in auts}
    by_name = {name[tuple(phi[e] for e in order)]: phi for phi in auts}
    table = {}
    inv_table = {}
    for phi in auts:
        np = name[tuple(phi[e] for e in order)]
        for psi in auts:
            comp = tuple(phi[psi[e]] for e in order)  # phi after psi
            table[(np, name[tuple(psi[e] for e in order)])] = name[comp]
        inv = {phi[e]: e for e in order}
        inv_table[np] = name[tuple(inv[e] for e in order)]
    ident = name[tuple(order)]
    aut_grp = FiniteGroup.from_table(tuple(sorted(by_name)), table, ident, inv_table)

    up = {a: f"2.{a}" for a in G}
    g2_table = {(up[a], up[b]): up[G.mul(a, b)] for a in G for b in G}
    g2_grp = FiniteGroup.from_table(
        tuple(up[a] for a in G), g2_table, up[G.identity], {up[a]: up[G.inv(a)] for a in G}
    )
    feedback = {}
    for a in G:
        conj = tuple(G.mul(G.mul(a, e), G.inv(a)) for e in order)
        feedback[up[a]] = name[conj]

    def twist(phi_name: str, a2: str) -> str:
        return up[by_name[phi_name][a2[2:]]]

    return one_object_crossed(aut_grp, g2_grp, feedback, twist)


# -- diagram constructions ----------------------------------------------


def constant_diagram(C: CrossedGroupoid) -> CrossedDiagram:
    """All four levels equal to C, all cofaces the identity."""
    cofaces = {
        (p, k): identity_crossed_morphism(C) for p in range(3) for k in range(p + 2)
    }
    # reattach endpoints so the diagram's identity checks hold per level slot
    levels = (C, C, C, C)
    return CrossedDiagram(levels, cofaces)


def _relabel_group(base: FiniteGroup, tag: str) -> FiniteGroup:
    """A copy of `base` with every id suffixed by `tag` (lazy arithmetic)."""
    elems = tuple(f"{e}{tag}" for e in base.elements)
    cut = -len(tag)

    def mul(a: str, b: str) -> str:
        return f"{base.mul(a[:cut], b[:cut])}{tag}"

    def inv(a: str) -> str:
        return f"{base.inv(a[:cut])}{tag}"

    return FiniteGroup(elems, f"{base.identity}{tag}", mul, inv)


def fatten(
    C: CrossedGroupoid, n: int, bound: int = DEFAULT_SIZE_BOUND
) -> tuple[CrossedGroupoid, CrossedMorphism]:
    """Replace each object by n copies connected by transported isomorphisms.

    Returns the fattened crossed groupoid and the inclusion of copy 0, which
    is a weak equivalence.
    """
    if n < 1:
        raise DomainError("copy count must be at least 1")
    g1 = C.g1
    objects = tuple(f"{x}@{i}" for x in g1.objects for i in range(n))
    source, target, inverses = {}, {}, {}
    morph_ids = {}
    for m in g1.source:
        for i in range(n):
            for j in range(n):
                mid = f"{m}@{i}.{j}"
                morph_ids[(m, i, j)] = mid
                source[mid] = f"{g1.source[m]}@{i}"
                target[mid] = f"{g1.target[m]}@{j}"
    if len(source) ** 2 > bound:
        raise ResourceBoundError("fattened composition table would exceed the bound")
    for (m, i, j), mid in morph_ids.items():
        inverses[mid] = morph_ids[(g1.inverses[m], j, i)]
    table = {}
    for (m2, j2, k) in morph_ids:
        for (m1, i, j1) in morph_ids:
            if j1 == j2 and g1.target[m1] == g1.source[m2]:
                table[(morph_ids[(m2, j2, k)], morph_ids[(m1, i, j1)])] = morph_ids[
                    (g1.table[(m2, m1)], i, k)
                ]
    identities = {f"{x}@{i}": morph_ids[(g1.identities[x], i, i)] for x in g1.objects for i in range(n)}
    fat_g1 = FiniteGroupoid(objects, source, target, identities, table, inverses)

    fat_groups = {
        f"{x}@{i}": _relabel_group(C.g2.group(x), f"@{i}")
        for x in g1.objects
        for i in range(n)
    }
    fat_g2 = DisconnectedGroupoid(fat_groups)

    twist_table = {}
    for (m, i, j), mid in morph_ids.items():
        for a in C.g2.group(g1.source[m]):
            twist_table[(mid, f"{a}@{i}")] = f"{C.twist_table[(m, a)]}@{j}"
    feedback_table = {}
    for a, d in C.feedback_table.items():
        x = C.g2.object_of(a)
        for i in range(n):
            feedback_table[f"{a}@{i}"] = morph_ids[(d, i, i)]
    fat = CrossedGroupoid(fat_g1, fat_g2, twist_table, feedback_table)

    inclusion = CrossedMorphism(
        C,
        fat,
        {x: f"{x}@0" for x in g1.objects},
        {m: morph_ids[(m, 0, 0)] for m in g1.source},
        {a: f"{a}@0" for a in C.g2.owner},
    )
    return fat, inclusion


def fatten_diagram(
    D: CrossedDiagram, n: int, bound: int = DEFAULT_SIZE_BOUND
) -> tuple[CrossedDiagram, DiagramMorphism]:
    """Fatten every level compatibly; returns the inclusion of copy 0."""
    fattened = [fatten(L, n, bound) for L in D.levels]
    levels = tuple(f for f, _ in fattened)
    cofaces = {}
    for (p, k), d in D.cofaces.items():
        obj_map = {
            f"{x}@{i}": f"{d.apply_obj(x)}@{i}"
            for x in d.source.g1.objects
            for i in range(n)
        }
        mor1_map = {
            f"{m}@{i}.{j}": f"{d.apply_mor1(m)}@{i}.{j}"
            for m in d.source.g1.source
            for i in range(n)
            for j in range(n)
        }
        mor2_map = {
            f"{a}@{i}": f"{d.apply_mor2(a)}@{i}"
            for a in d.source.g2.owner
            for i in range(n)
        }
        cofaces[(p, k)] = CrossedMorphism(levels[p], levels[p + 1], obj_map, mor1_map, mor2_map)
    fat = CrossedDiagram(levels, cofaces)
    incl_levels = []
    for p in range(4):
        _, incl = fattened[p]
        # re-point the inclusion at the shared level objects
        incl_levels.append(
            CrossedMorphism(D.levels[p], levels[p], incl.obj_map, incl.mor1_map, incl.mor2_map)
        )
    return fat, DiagramMorphism(D, fat, tuple(incl_levels))


def cech_diagram(
    C: CrossedGroupoid, m: int, bound: int = DEFAULT_SIZE_BOUND
) -> CrossedDiagram:
    """The Čech diagram of a one-object crossed group over an abstract cover
    with m indices: level p is the product over all (p+1)-tuples of indices,
    cofaces reindex by omitting a position."""
    if len(C.objects) != 1:
        raise DomainError("the Čech construction needs a one-object crossed group")
    if m < 1:
        raise DomainError("cover size must be at least 1")
    obj = C.objects[0]
    base_g1 = _one_object_group(C.g1)
    base_g2 = C.g2.group(obj)

    tuples = [sorted(itertools.product(range(m), repeat=p + 1)) for p in range(4)]
    for p in range(4):
        k = len(tuples[p])
        if len(base_g2) ** k > bound or (len(base_g1) ** k) ** 2 > bound:
            raise ResourceBoundError(f"Čech level {p} exceeds the size bound")

    g1_groups = [FiniteGroup.product([base_g1] * len(tuples[p])) for p in range(4)]
    g2_groups = [FiniteGroup.product([base_g2] * len(tuples[p])) for p in range(4)]

    levels = []
    for p in range(4):
        g1p = one_object_groupoid(g1_groups[p], obj, bound)
        g2p = DisconnectedGroupoid({obj: g2_groups[p]})
        feedback = {}
        for a in g2_groups[p]:
            parts = a.split("|")
            feedback[a] = "|".join(C.feedback_table[x] for x in parts)
        twist_table = {}
        for g in g1_groups[p]:
            gparts = g.split("|")
            for a in g2_groups[p]:
                aparts = a.split("|")
                twist_table[(g, a)] = "|".join(
                    C.twist_table[(gx, ax)] for gx, ax in zip(gparts, aparts)
                )
        levels.append(CrossedGroupoid(g1p, g2p, twist_table, feedback))
    levels = tuple(levels)

    def reindex(parts: list[str], p: int, k: int) -> str:
        val = dict(zip(tuples[p], parts))
        out = []
        for u in tuples[p + 1]:
            out.append(val[u[:k] + u[k + 1:]])
        return "|".join(out)

    cofaces = {}
    for p in range(3):
        for k in range(p + 2):
            mor1_map = {
                g: reindex(g.split("|"), p, k) for g in g1_groups[p]
            }
            mor2_map = {
                a: reindex(a.split("|"), p, k) for a in g2_groups[p]
            }
            cofaces[(p, k)] = CrossedMorphism(
                levels[p], levels[p + 1], {obj: obj}, mor1_map, mor2_map
            )
    return CrossedDiagram(levels, cofaces)


def _one_object_group(G: FiniteGroupoid) -> FiniteGroup:
    obj = G.objects[0]
    elems = tuple(sorted(G.source))
    return FiniteGroup.from_table(
        elems,
        dict(G.table),
        G.identities[obj],
        dict(G.inverses),
    )


# -- named fixtures -----------------------------------------------------


def fix_a_core() -> CrossedGroupoid:
    """Trivial lower group, upper group Z/2, everything else trivial."""
    return crossed_group(cyclic_group(2))


def fix_b_core() -> CrossedGroupoid:
    """Lower group Z/2, trivial upper group."""
    g1 = cyclic_group(2)
    g2 = FiniteGroup.from_table(("2.1",), {("2.1", "2.1"): "2.1"}, "2.1", {"2.1": "2.1"})
    return one_object_crossed(g1, g2, {"2.1": g1.identity}, lambda g, a: a)


def fix_c_core() -> CrossedGroupoid:
    """The identity crossed module on Z/2."""
    return crossed_from_normal_subgroup(cyclic_group(2), cyclic_group(2).elements)


def fix_a() -> CrossedDiagram:
    return constant_diagram(fix_a_core())


def fix_b() -> CrossedDiagram:
    return constant_diagram(fix_b_core())


def fix_c() -> CrossedDiagram:
    return constant_diagram(fix_c_core())


def fix_cech(m: int = 2) -> CrossedDiagram:
    """Čech diagram of the crossed group (Z/2 over a trivial lower group)."""
    return cech_diagram(fix_a_core(), m)


NAMED_CROSSED: dict[str, Callable[[], CrossedGroupoid]] = {
    "fix-a-core": fix_a_core,
    "fix-b-core": fix_b_core,
    "fix-c-core": fix_c_core,
    "inner-s3": lambda: inner_crossed(symmetric_group(3)),
    "inner-z3": lambda: inner_crossed(cyclic_group(3)),
    "s3-a3": lambda: crossed_from_normal_subgroup(
        symmetric_group(3), [p for p in symmetric_group(3) if _is_even(p)]
    ),
}


def _is_even(perm: str) -> bool:
    p = [int(ch) for ch in perm]
    inversions = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inversions % 2 == 0


# -- fixture specs (CLI-facing) -----------------------------------------


@dataclass
class FixtureSpec:
    """A declarative recipe for one of the generator families."""

    kind: str
    params: dict = field(default_factory=dict)


def build_fixture(spec: FixtureSpec, bound: int = DEFAULT_SIZE_BOUND):
    """Build a fixture; returns ("crossed", C), ("diagram", D) or
    ("diagram-morphism", F) depending on the kind."""
    kind = spec.kind
    p = spec.params
    if kind == "normal-subgroup":
        G = _resolve_group(p["group"])
        return "crossed", crossed_from_normal_subgroup(G, p["subgroup"])
    if kind == "inner":
        return "crossed", inner_crossed(_resolve_group(p["group"]))
    if kind == "constant-diagram":
        return "diagram", constant_diagram(_resolve_crossed(p["base"], bound))
    if kind == "fatten":
        n = int(p.get("copies", 2))
        base_kind, base = _resolve_base(p["base"], bound)
        if base_kind == "diagram":
            fat, incl = fatten_diagram(base, n, bound)
            return "diagram-morphism", incl
        fat, incl = fatten(base, n, bound)
        return "crossed", fat
    if kind == "cech":
        base = _resolve_crossed(p["base"], bound)
        return "diagram", cech_diagram(base, int(p.get("cover", 2)), bound)
    raise LoadError(f"unknown fixture kind {kind!r}")


def _resolve_group(ref) -> FiniteGroup:
    if isinstance(ref, str):
        try:
            return NAMED_GROUPS[ref]()
        except KeyError:
            raise LoadError(f"unknown group name {ref!r}") from None
    raise LoadError("group reference must be a name")


def _resolve_crossed(ref, bound: int) -> CrossedGroupoid:
    if isinstance(ref, str):
        try:
            return NAMED_CROSSED[ref]()
        except KeyError:
            raise LoadError(f"unknown crossed-groupoid name {ref!r}") from None
    if isinstance(ref, dict):
        kind, built = build_fixture(FixtureSpec(ref["kind"], ref.get("params", {})), bound)
        if kind != "crossed":
            raise LoadError("nested fixture does not produce a crossed groupoid")
        return built
    raise LoadError("crossed-groupoid reference must be a name or a nested spec")


def _resolve_base(ref, bound: int):
    if isinstance(ref, str) and ref in NAMED_CROSSED:
        return "crossed", NAMED_CROSSED[ref]()
    if isinstance(ref, dict):
        return build_fixture(FixtureSpec(ref["kind"], ref.get("params", {})), bound)
    raise LoadError("fatten base must be a named crossed groupoid or a nested spec")
