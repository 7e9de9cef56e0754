import pytest

from crossed_desc import (
    CrossedGroupoid,
    CrossedMorphism,
    DomainError,
    FiniteGroup,
    homotopy,
    is_weak_equivalence_crossed,
    validate_crossed,
    validate_crossed_morphism,
    validate_group,
)
from crossed_desc.crossed import hom_quotient
from crossed_desc.fixtures import (
    NAMED_CROSSED,
    cyclic_group,
    fatten,
    fix_a_core,
    fix_b_core,
    fix_c_core,
    inner_crossed,
    symmetric_group,
    trivial_group,
    crossed_group,
    one_object_crossed,
)


@pytest.mark.parametrize("name", sorted(NAMED_CROSSED))
def test_named_fixtures_validate(name):
    report = validate_crossed(NAMED_CROSSED[name]())
    assert report.ok, [v.detail for v in report]


def test_group_axioms_checked():
    bad = FiniteGroup.from_table(
        ("e", "a"),
        {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "a"},
        "e",
        {"e": "e", "a": "a"},
    )
    report = validate_group(bad)
    assert "group-inverse" in report.rules()


def test_product_group_arithmetic():
    P = FiniteGroup.product([cyclic_group(2), cyclic_group(3)])
    assert len(P) == 6
    assert P.mul("1|2", "1|2") == "0|1"
    assert P.inv("1|2") == "1|1"
    assert P.identity == "0|0"


def _rebuild(C, twist_table=None, feedback_table=None):
    return CrossedGroupoid(
        C.g1,
        C.g2,
        dict(C.twist_table) if twist_table is None else twist_table,
        dict(C.feedback_table) if feedback_table is None else feedback_table,
    )


def test_broken_peiffer_reported():
    C = fix_c_core()  # identity crossed module on Z/2: twist is conjugation
    twist = dict(C.twist_table)
    # conjugation by the nontrivial element must fix everything in an abelian
    # group; swapping one value breaks the Peiffer identity
    twist[("1", "2.1")] = "2.0"
    report = validate_crossed(_rebuild(C, twist_table=twist))
    assert not report.ok
    assert {"peiffer"} & report.rules()


def test_broken_equivariance_reported():
    C = NAMED_CROSSED["s3-a3"]()
    twist = dict(C.twist_table)
    (g, a) = next((g, a) for (g, a) in twist if twist[(g, a)] != a)
    twist[(g, a)] = a
    report = validate_crossed(_rebuild(C, twist_table=twist))
    assert not report.ok
    assert {"equivariance", "twist-homomorphism", "twist-action", "twist-bijective",
            "peiffer"} & report.rules()


def test_broken_feedback_functor_reported():
    C = NAMED_CROSSED["s3-a3"]()
    fb = dict(C.feedback_table)
    a = next(a for a in fb if fb[a] != C.g1.identity("*"))
    fb[a] = C.g1.identity("*")
    report = validate_crossed(_rebuild(C, feedback_table=fb))
    assert not report.ok
    assert {"feedback-functor", "equivariance", "peiffer"} & report.rules()


def test_missing_twist_entry_rejected():
    C = fix_b_core()
    twist = dict(C.twist_table)
    twist.popitem()
    with pytest.raises(Exception):
        _rebuild(C, twist_table=twist)


def test_twist_feedback_domain_errors():
    C = fix_c_core()
    with pytest.raises(DomainError):
        C.feedback("nope")
    with pytest.raises(DomainError):
        C.twist("0", "nope")


# -- homotopy invariants ------------------------------------------------


def test_homotopy_fix_a_core():
    h = homotopy(fix_a_core())
    assert h.pi1["*"].reps == ("1",)  # trivial lower group
    assert len(h.pi2["*"]) == 2  # all of Z/2 is in the kernel


def test_homotopy_fix_b_core():
    h = homotopy(fix_b_core())
    assert len(h.pi1["*"].reps) == 2  # Z/2 survives: nothing to quotient by
    assert h.pi2["*"] == ("2.1",)


def test_homotopy_fix_c_core():
    h = homotopy(fix_c_core())
    assert len(h.pi1["*"].reps) == 1  # feedback surjective
    assert len(h.pi2["*"]) == 1  # feedback injective


def test_homotopy_inner_z3():
    h = homotopy(inner_crossed(cyclic_group(3)))
    assert len(h.pi1["*"].reps) == 2  # Aut(Z/3) = Z/2, inner part trivial
    assert len(h.pi2["*"]) == 3  # abelian: everything central


def test_homotopy_inner_s3():
    h = homotopy(inner_crossed(symmetric_group(3)))
    assert len(h.pi1["*"].reps) == 1  # Aut(S3) = Inn(S3)
    assert len(h.pi2["*"]) == 1  # trivial center


def test_homotopy_s3_a3():
    h = homotopy(NAMED_CROSSED["s3-a3"]())
    assert len(h.pi1["*"].reps) == 2  # S3 / A3
    assert len(h.pi2["*"]) == 1  # inclusion injective
    grp = h.pi1["*"].group
    nontrivial = next(r for r in grp if r != grp.identity)
    assert grp.mul(nontrivial, nontrivial) == grp.identity


def test_pi1_cokernel_is_a_group():
    h = homotopy(NAMED_CROSSED["s3-a3"]())
    assert validate_group(h.pi1["*"].group).ok


def test_hom_quotient_fibers():
    C = fix_c_core()
    q = hom_quotient(C, "*", "*")
    # feedback is onto Z/2, so the two lower morphisms collapse to one class
    assert len(q.reps) == 1
    g = q.reps[0]
    for g_prime in C.g1.hom("*", "*"):
        fiber = q.fiber(g, g_prime)
        assert len(fiber) == 1  # feedback is injective here


# -- weak equivalences --------------------------------------------------


def test_fatten_inclusion_is_weak_equivalence():
    for name in ("fix-a-core", "s3-a3", "inner-z3"):
        C = NAMED_CROSSED[name]()
        fat, incl = fatten(C, 3)
        assert validate_crossed(fat).ok
        assert validate_crossed_morphism(incl).ok
        ok, report = is_weak_equivalence_crossed(incl)
        assert ok, [v.detail for v in report]


def test_fatten_preserves_homotopy_invariants():
    C = NAMED_CROSSED["inner-z3"]()
    fat, _ = fatten(C, 2)
    h, hf = homotopy(C), homotopy(fat)
    for x in C.objects:
        for i in range(2):
            assert len(hf.pi1[f"{x}@{i}"].reps) == len(h.pi1[x].reps)
            assert len(hf.pi2[f"{x}@{i}"]) == len(h.pi2[x])
    assert len(set(hf.pi0.values())) == len(set(h.pi0.values()))


def collapse_to_trivial(C):
    """The unique morphism to the one-object trivial crossed groupoid."""
    T = one_object_crossed(
        trivial_group(), trivial_group("2.1"), {"2.1": "1"}, lambda g, a: a
    )
    return CrossedMorphism(
        C,
        T,
        {x: "*" for x in C.objects},
        {m: "1" for m in C.g1.source},
        {a: "2.1" for a in C.g2.owner},
    )


def test_collapse_is_not_weak_equivalence():
    F = collapse_to_trivial(fix_a_core())
    assert validate_crossed_morphism(F).ok
    ok, report = is_weak_equivalence_crossed(F)
    assert not ok
    assert "pi2" in report.rules()


def test_weak_equivalence_failure_names_pi1():
    F = collapse_to_trivial(fix_b_core())
    ok, report = is_weak_equivalence_crossed(F)
    assert not ok
    assert "pi1" in report.rules()
