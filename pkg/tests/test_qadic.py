import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import elements
from thompcert.elements import compose, equals, invert
from thompcert.errors import DomainError, ExtendNeeded, GroupMembershipError, ParseError
from thompcert.qadic import (
    PermGroupSpec,
    QElement,
    cross_check,
    cylinders_disjoint,
    format_qelement,
    from_tree,
    is_division,
    kraft_sum,
    parse_perm,
    parse_qelement,
    q_apply,
    q_build_certificate,
    q_certificate_from_json,
    q_certificate_to_json,
    q_compose,
    q_decompose_small,
    q_equals,
    q_expand,
    q_invert,
    q_mutate,
    q_pointwise_equal,
    q_product,
    q_support_cover,
    q_support_size,
    q_verify_certificate,
    random_qelement,
    to_tree,
)
from thompcert.support import support_size

TRIV2 = PermGroupSpec.trivial(2)
S3 = PermGroupSpec.symmetric(3)
GROUPS = [TRIV2, S3, PermGroupSpec.trivial(3), PermGroupSpec.symmetric(2)]
seeds = st.integers(0, 2**32)
groups = st.sampled_from(GROUPS)


def test_group_closure():
    assert len(S3.elements) == 6
    assert TRIV2.is_trivial
    assert len(PermGroupSpec(4, ((1, 2, 3, 0),)).elements) == 4
    with pytest.raises(DomainError):
        PermGroupSpec(3, ((0, 0, 1),))


def test_apply_examples():
    ident = QElement.identity(S3)
    assert q_apply(ident, "0121") == "0121"
    v = parse_qelement("- -> - ; (0 1 2)", S3)
    assert q_apply(v, "002") == "110"
    swap = parse_qelement("0 -> 1 ; id\n1 -> 0 ; id", TRIV2)
    assert q_apply(swap, "011") == "111"


def test_apply_needs_long_word():
    v = parse_qelement("00 -> 0 ; id | 01 -> 10 ; id | 1 -> 11 ; id", TRIV2)
    with pytest.raises(ExtendNeeded):
        q_apply(v, "0")


def test_inverse_examples():
    v = parse_qelement("- -> - ; (0 1 2)", S3)
    assert format_qelement(q_invert(v)) == "- -> - ; (0 2 1)"
    assert q_invert(QElement.identity(S3)).is_identity()


def test_support_examples():
    assert q_support_cover(QElement.identity(S3)) == []
    swap = parse_qelement("0 -> 1 ; id | 1 -> 0 ; id", TRIV2)
    assert q_support_cover(swap) == ["0", "1"] and q_support_size(swap) == 1
    v = parse_qelement("0 -> 0 ; id | 1 -> 1 ; id | 2 -> 2 ; (0 1)", S3)
    assert q_support_cover(v) == ["2"] and q_support_size(v) == Fraction(1, 3)


def test_normal_form_merges_expansion():
    expanded = parse_qelement("0 -> 0 ; id | 1 -> 1 ; id", TRIV2)
    assert expanded.is_identity()


def test_twist_outside_group():
    with pytest.raises(GroupMembershipError):
        parse_qelement("- -> - ; (0 1)", PermGroupSpec.trivial(3))


def test_perm_parsing():
    assert parse_perm("(0 1 2)", 3) == (1, 2, 0)
    assert parse_perm("id", 3) == (0, 1, 2)
    with pytest.raises(ParseError):
        parse_perm("(0 1", 3)
    with pytest.raises(ParseError):
        parse_perm("(0 5)", 3)


@given(groups, seeds)
@settings(max_examples=40)
def test_group_axioms(group, seed):
    rng = random.Random(seed)
    a, b, c = (random_qelement(rng, group) for _ in range(3))
    left = q_compose(a, q_compose(b, c))
    right = q_compose(q_compose(a, b), c)
    assert q_equals(left, right)
    assert q_pointwise_equal(left, right)
    assert q_compose(a, q_invert(a)).is_identity()
    assert q_equals(q_compose(QElement.identity(group), a), a)
    assert q_equals(q_invert(q_invert(a)), a)


@given(groups, seeds)
@settings(max_examples=40)
def test_equality_matches_pointwise(group, seed):
    rng = random.Random(seed)
    a = random_qelement(rng, group)
    b = a if rng.random() < 0.5 else random_qelement(rng, group)
    assert q_equals(a, b) == q_pointwise_equal(a, b)


@given(groups, seeds)
def test_expand_then_normalize(group, seed):
    rng = random.Random(seed)
    a = random_qelement(rng, group)
    e = q_expand(a, rng, 4)
    assert q_pointwise_equal(a, e)
    assert q_equals(e, a)


@given(groups, seeds)
@settings(max_examples=40)
def test_kraft_identity(group, seed):
    rng = random.Random(seed)
    a, b = random_qelement(rng, group), random_qelement(rng, group)
    for v in (q_compose(a, b), q_invert(a)):
        for ws in (v.domain_words, v.range_words):
            assert kraft_sum(ws, group.q) == 1
            assert is_division(ws, group.q)


@given(groups, seeds)
@settings(max_examples=40)
def test_disjoint_cylinders_commute(group, seed):
    rng = random.Random(seed)
    a, b = random_qelement(rng, group), random_qelement(rng, group)
    # push the two elements into the cylinders 0... and 1...
    pa = q_restrict_to(a, "0")
    pb = q_restrict_to(b, "1")
    assert cylinders_disjoint(q_support_cover(pa), q_support_cover(pb))
    assert q_equals(q_compose(pa, pb), q_compose(pb, pa))


def q_restrict_to(v, prefix):
    """Copy of v acting inside the cylinder ``prefix``, identity elsewhere."""
    q = v.q
    ident = tuple(range(q))
    others = [str(a) for a in range(q) if str(a) != prefix]
    rules = [(prefix + d, prefix + r, s) for d, r, s in v.rules] + [(o, o, ident) for o in others]
    return QElement.from_rules(rules, v.group)


@given(elements("V", 8), elements("V", 8))
def test_tree_bridge(g, h):
    assert equals(to_tree(from_tree(g)), g)
    assert equals(to_tree(q_compose(from_tree(g), from_tree(h))), compose(g, h))
    assert equals(to_tree(q_invert(from_tree(g))), invert(g))
    assert q_support_size(from_tree(g)) == support_size(g).fraction()


@given(groups, seeds, st.sampled_from([Fraction(1, 4), Fraction(1, 8)]))
@settings(max_examples=20)
def test_small_support_factors(group, seed, eps):
    rng = random.Random(seed)
    v = random_qelement(rng, group)
    factors = q_decompose_small(v, eps)
    assert q_equals(q_product(factors, group), v)
    assert all(q_support_size(f) < eps for f in factors)


@pytest.mark.parametrize("group", [TRIV2, S3])
@pytest.mark.parametrize("k", [1, 2])
def test_certificate_round_trip(group, k):
    rng = random.Random(k)
    for _ in range(5):
        v = random_qelement(rng, group)
        c = q_build_certificate(v, k)
        assert q_verify_certificate(c).overall
        again = q_certificate_from_json(q_certificate_to_json(c))
        assert q_certificate_to_json(again) == q_certificate_to_json(c)
        assert q_verify_certificate(again).overall


def test_single_twist_certificate():
    v = parse_qelement("0 -> 0 ; (0 1 2) | 1 -> 1 ; id | 2 -> 2 ; id", S3)
    assert q_verify_certificate(q_build_certificate(v, 2)).overall
    assert q_verify_certificate(q_build_certificate(QElement.identity(S3), 3)).overall


@pytest.mark.parametrize("kind", ["identity_witness", "shifted_chain", "swapped_intervals",
                                  "dropped_fact", "displaced_conjugator", "escaped_witness",
                                  "wrong_seed", "tampered_factor"])
def test_q_mutations(kind):
    rng = random.Random(9)
    for group in (TRIV2, S3):
        for _ in range(4):
            c = q_build_certificate(random_qelement(rng, group), 2)
            bad = q_mutate(c, kind)
            if bad is None:
                continue
            assert q_verify_certificate(bad).failing()
            if group is TRIV2:
                assert cross_check(bad)


@given(seeds)
@settings(max_examples=20)
def test_q2_matches_tree_pipeline(seed):
    rng = random.Random(seed)
    c = q_build_certificate(random_qelement(rng, TRIV2), 2)
    assert cross_check(c)
