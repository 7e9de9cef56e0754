import pytest
from hypothesis import given, strategies as st

from crossed_desc import (
    DomainError,
    FiniteGroupoid,
    LoadError,
    Word,
    evaluate_word,
    pi0_groupoid,
    validate_groupoid,
)
from crossed_desc.fixtures import cyclic_group, symmetric_group
from crossed_desc.fixtures import one_object_groupoid


@pytest.fixture(scope="module")
def s3_groupoid():
    return one_object_groupoid(symmetric_group(3))


def two_component_groupoid():
    """Z/2 at object u, trivial at object v; no cross morphisms."""
    return FiniteGroupoid(
        objects=("u", "v"),
        source={"e": "u", "t": "u", "ev": "v"},
        target={"e": "u", "t": "u", "ev": "v"},
        identities={"u": "e", "v": "ev"},
        table={
            ("e", "e"): "e",
            ("e", "t"): "t",
            ("t", "e"): "t",
            ("t", "t"): "e",
            ("ev", "ev"): "ev",
        },
        inverses={"e": "e", "t": "t", "ev": "ev"},
    )


def test_valid_groupoids_pass(s3_groupoid):
    assert validate_groupoid(s3_groupoid).ok
    assert validate_groupoid(two_component_groupoid()).ok


def test_accessors(s3_groupoid):
    G = s3_groupoid
    assert G.src("012") == "*" and G.dst("012") == "*"
    assert G.identity("*") == "012"
    assert G.compose("120", "201") == "012"  # mutually inverse 3-cycles
    assert G.inverse("120") == "201"
    assert sorted(G.hom("*", "*")) == sorted(G.morphisms)


def test_unknown_ids_raise(s3_groupoid):
    G = s3_groupoid
    with pytest.raises(DomainError):
        G.identity("missing")
    with pytest.raises(DomainError):
        G.inverse("missing")
    with pytest.raises(DomainError):
        G.compose("012", "missing")


def test_structurally_broken_table_rejected():
    with pytest.raises(LoadError):
        FiniteGroupoid(
            objects=("u",),
            source={"e": "u"},
            target={"e": "u"},
            identities={"u": "e"},
            table={("e", "e"): "ghost"},  # result id does not resolve
            inverses={"e": "e"},
        )


@pytest.mark.parametrize(
    "mutate, rule",
    [
        (lambda t: t.__setitem__(("120", "120"), "120"), "associativity"),
        (lambda t: t.__setitem__(("012", "120"), "201"), "unit-law"),
        (lambda t: t.__setitem__(("120", "201"), "120"), "inverse-law"),
    ],
)
def test_corrupted_entries_are_reported(mutate, rule):
    G = one_object_groupoid(symmetric_group(3))
    table = dict(G.table)
    mutate(table)
    broken = FiniteGroupoid(
        G.objects, G.source, G.target, G.identities, table, G.inverses
    )
    report = validate_groupoid(broken)
    assert not report.ok
    assert rule in report.rules()


def test_corrupted_inverse_reported():
    G = one_object_groupoid(cyclic_group(4))
    inverses = dict(G.inverses)
    inverses["1"] = "1"
    report = validate_groupoid(
        FiniteGroupoid(G.objects, G.source, G.target, G.identities, G.table, inverses)
    )
    assert "inverse-law" in report.rules()


def test_word_evaluation_right_to_left(s3_groupoid):
    G = s3_groupoid
    # rightmost factor applies first, matching compose(after, before)
    w = Word.of(("120", +1), ("102", +1))
    assert evaluate_word(G, w) == G.compose("120", "102")
    assert evaluate_word(G, Word.of(("120", -1))) == "201"


def test_empty_word_needs_anchor(s3_groupoid):
    with pytest.raises(DomainError):
        evaluate_word(s3_groupoid, Word(factors=(), anchor=None))
    w = Word(factors=(), anchor="*")
    assert evaluate_word(s3_groupoid, w) == "012"


@given(st.lists(st.sampled_from(sorted(symmetric_group(3).elements)), max_size=5),
       st.sampled_from(sorted(symmetric_group(3).elements)),
       st.integers(min_value=0, max_value=5))
def test_word_insertion_invariance(ms, extra, pos):
    """Splicing m . m^-1 anywhere into a word never changes its value."""
    G = one_object_groupoid(symmetric_group(3))
    base = tuple((m, +1) for m in ms)
    value = evaluate_word(G, Word(factors=base, anchor="*"))
    pos = min(pos, len(base))
    spliced = base[:pos] + ((extra, +1), (extra, -1)) + base[pos:]
    assert evaluate_word(G, Word(factors=spliced, anchor="*")) == value


def test_pi0_components():
    G = two_component_groupoid()
    labels = pi0_groupoid(G)
    assert labels["u"] != labels["v"]
    assert set(labels) == {"u", "v"}


def test_pi0_one_component(s3_groupoid):
    assert len(set(pi0_groupoid(s3_groupoid).values())) == 1
