import itertools

import pytest

from crossed_desc import (
    DescentDatum,
    DomainError,
    GaugeTransformation,
    PartialDescentDatum,
    ResourceBoundError,
    complete_descent,
    completion_steps,
    enumerate_descent,
    gauge_classes,
    gauge_compose,
    gauge_identity,
    gauge_invert,
    is_descent_datum,
    is_gauge,
)
from crossed_desc.descent import vertex_object

from oracles import brute_descent_data, brute_gauge_classes, brute_gauge_related


def test_counts_match_oracle(diag_a, diag_b, diag_c, diag_cech):
    for D, expected in ((diag_a, 2), (diag_b, 1), (diag_c, 2), (diag_cech, 8)):
        data = enumerate_descent(D)
        oracle = brute_descent_data(D)
        assert [(t.x, t.g, t.a) for t in data] == oracle
        assert len(data) == expected


def test_fattened_counts_match_oracle(fat_a):
    fat, _ = fat_a
    data = enumerate_descent(fat)
    assert [(t.x, t.g, t.a) for t in data] == brute_descent_data(fat)
    assert len(data) == 4


def test_constant_diagram_data_are_feedback_pairs(diag_s3, diag_c):
    """On a constant diagram the conditions degenerate: g must be D(a)."""
    for D in (diag_s3, diag_c):
        C = D.levels[0]
        expected = sorted(
            DescentDatum(x, C.feedback(a), a)
            for x in C.objects
            for a in C.g2.group(x)
        )
        assert enumerate_descent(D) == expected
    assert len(enumerate_descent(diag_s3)) == 6


def test_enumeration_bound(diag_a):
    with pytest.raises(ResourceBoundError):
        enumerate_descent(diag_a, bound=1)


def test_ill_typed_datum_raises(diag_a):
    with pytest.raises(DomainError):
        is_descent_datum(diag_a, DescentDatum("ghost", "1", "2.0"))
    with pytest.raises(DomainError):
        is_descent_datum(diag_a, DescentDatum("*", "2.0", "2.0"))  # not a 1-morphism


def test_failed_conditions_reported(diag_c):
    # (x, g, a) with g != D(a) breaks the first condition on a constant diagram
    ok, report = is_descent_datum(diag_c, DescentDatum("*", "1", "2.0"))
    assert not ok
    assert "cocycle-failure" in report.rules()


def test_twisted_cocycle_violation_reported(diag_cech):
    # flip one component of a valid datum's 2-cell: condition (ii) must break
    t = enumerate_descent(diag_cech)[0]
    parts = t.a.split("|")
    parts[0] = "2.1" if parts[0] == "2.0" else "2.0"
    bad = DescentDatum(t.x, t.g, "|".join(parts))
    ok, report = is_descent_datum(diag_cech, bad)
    assert not ok
    assert "twisted-2-cocycle" in report.rules()


# -- the gauge relation -------------------------------------------------


def _all_gauges(D, src, dst):
    L0, L1 = D.levels[0], D.levels[1]
    x0 = vertex_object(D, src.x, 0, 1)
    for f in L0.g1.hom(src.x, dst.x):
        for c in sorted(L1.g2.group(x0).elements):
            t = GaugeTransformation(f, c)
            ok, _ = is_gauge(D, t, src, dst)
            if ok:
                yield t


def test_gauge_relation_matches_oracle(diag_a, diag_b, diag_c, fat_a):
    fat, _ = fat_a
    for D in (diag_a, diag_b, diag_c, fat):
        data = enumerate_descent(D)
        for s, d in itertools.product(data, repeat=2):
            lib = any(True for _ in _all_gauges(D, s, d))
            assert lib == brute_gauge_related(
                D, (s.x, s.g, s.a), (d.x, d.g, d.a)
            ), (s, d)


def test_classes_match_oracle(diag_a, diag_b, diag_cech, fat_a):
    fat, _ = fat_a
    for D, n_classes in ((diag_a, 1), (diag_b, 1), (diag_cech, 1), (fat, 1)):
        table = gauge_classes(D)
        oracle = brute_gauge_classes(D)
        assert len(table.reps) == len(oracle) == n_classes
        lib_blocks = sorted(
            [sorted((m.x, m.g, m.a) for m in table.class_members(rep))
             for rep in table.reps]
        )
        assert lib_blocks == oracle


def test_witnesses_verify(diag_cech):
    table = gauge_classes(diag_cech)
    for m in table.members:
        ok, _ = is_gauge(diag_cech, table.witnesses[m], m, table.rep_of[m])
        assert ok


def test_gauge_identity_compose_invert(fat_a):
    """The generated structure stays inside the verified relation."""
    fat, _ = fat_a
    data = enumerate_descent(fat)
    for s in data:
        ident = gauge_identity(fat, s)
        ok, _ = is_gauge(fat, ident, s, s)
        assert ok
    for s, d in itertools.product(data, repeat=2):
        for t in _all_gauges(fat, s, d):
            inv = gauge_invert(fat, t)
            ok, _ = is_gauge(fat, inv, d, s)
            assert ok
            for e in data:
                for t2 in _all_gauges(fat, d, e):
                    comp = gauge_compose(fat, t2, t)
                    ok, _ = is_gauge(fat, comp, s, e)
                    assert ok


def test_gauge_compose_rejects_mismatched(fat_a):
    fat, _ = fat_a
    data = enumerate_descent(fat)
    s = data[0]
    t = gauge_identity(fat, s)
    other = next(d for d in data if d.x != s.x)
    t_other = gauge_identity(fat, other)
    with pytest.raises(DomainError):
        gauge_compose(fat, t_other, t)


# -- completion ---------------------------------------------------------


def _completion_triples(D):
    """Every (src datum, partial destination, partial gauge) that type-checks
    and satisfies the first gauge condition."""
    from crossed_desc.descent import _predicted_g

    L0, L1 = D.levels[0], D.levels[1]
    for src in enumerate_descent(D):
        x0 = vertex_object(D, src.x, 0, 1)
        for f in sorted(L0.g1.source):
            if L0.g1.src(f) != src.x:
                continue
            for c in sorted(L1.g2.group(x0).elements):
                t = GaugeTransformation(f, c)
                dst_x = L0.g1.dst(f)
                dst_g = _predicted_g(D, src.g, t)
                yield src, PartialDescentDatum(dst_x, dst_g), t


def test_completion_unique_and_valid_exhaustive(diag_a, diag_cech):
    for D in (diag_a, diag_cech):
        count = 0
        for src, partial, t in _completion_triples(D):
            a_prime, dst = complete_descent(D, src, partial, t)
            # uniqueness: no other 2-cell in the ambient group works
            x0_2 = vertex_object(D, partial.x, 0, 2)
            others = [
                b
                for b in D.levels[2].g2.group(x0_2)
                if b != a_prime
                and is_gauge(D, t, src, DescentDatum(partial.x, partial.g, b))[0]
            ]
            assert others == []
            count += 1
        assert count > 0


def test_completion_steps_all_agree(diag_cech, fat_a):
    fat, _ = fat_a
    for D in (diag_cech, fat):
        for src, partial, t in _completion_triples(D):
            steps = completion_steps(D, src, partial, t)
            values = {v for _, v in steps}
            assert len(values) == 1, steps


def test_completion_rejects_non_partial_gauge(diag_a):
    data = enumerate_descent(diag_a)
    src = data[0]
    t = gauge_identity(diag_a, src)
    with pytest.raises(DomainError):
        complete_descent(
            diag_a, src, PartialDescentDatum(src.x, "0"), t
        )  # wrong predicted 1-morphism
