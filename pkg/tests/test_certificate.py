import json
import random

import pytest
from hypothesis import given, settings

from conftest import elements
from thompcert.certificate import (
    EXPECTED_FAILURE,
    MUTATIONS,
    build_certificate,
    build_commuting_family,
    canonical_chain,
    certificate_from_json,
    certificate_to_json,
    composite_eps,
    disjoint_slots,
    family_from_json,
    family_to_json,
    mutate,
    verify_certificate,
    verify_commuting_family,
)
from thompcert.dyadic import Dyadic, DySet, Space, inside_interior, sets_disjoint
from thompcert.elements import IDENTITY, from_cells, generator, image_of, random_element
from thompcert.errors import PreconditionError, StructuralError
from thompcert.small_support import decompose_small
from thompcert.support import support_cover

A, B, C, P0 = (generator(n) for n in ("A", "B", "C", "P0"))


@pytest.mark.parametrize("g,k", [(P0, 2), (B, 1), (A, 1), (C, 2), (IDENTITY, 3)])
def test_round_trip(g, k):
    c = build_certificate(g, k)
    report = verify_certificate(c)
    assert report.overall, report.lines()
    assert report.assumed_facts == c.facts


def test_chain_is_strictly_nested():
    chain = canonical_chain(2)
    assert [str(I) for I in chain] == [
        "[21/2^6,22/2^6]", "[5/2^4,6/2^4]", "[1/2^2,2/2^2]", "[0/2^0,1/2^0]"]
    for inner, outer in zip(chain, chain[1:]):
        assert inside_interior(DySet.of([inner], Space.LINE), outer)


def test_whole_cover_seed_is_composite():
    c = build_certificate(C, 2)
    assert c.composite
    assert all(not support_cover(f.s).is_whole() for f in c.factors)
    assert "V5" in [name for name, _, _ in verify_certificate(c).checks]


def test_composite_eps():
    assert composite_eps(1) == Dyadic(1, 1)
    assert composite_eps(2) == Dyadic(1, 2)
    assert composite_eps(3) == Dyadic(1, 2)
    assert composite_eps(4) == Dyadic(1, 3)


@pytest.mark.parametrize("g", [P0, B, C])
@pytest.mark.parametrize("kind", sorted(MUTATIONS))
def test_mutations_are_caught(g, kind):
    c = build_certificate(g, 2)
    bad = mutate(c, kind)
    if bad is None:
        assert kind == "tampered_factor" and not c.composite
        return
    failing = verify_certificate(bad).failing()
    assert failing
    if not c.composite:
        assert EXPECTED_FAILURE[kind] in failing


def test_malformed_chain_is_structural():
    c = build_certificate(B, 2)
    c.chain = c.chain[:-1]
    with pytest.raises(StructuralError):
        verify_certificate(c)


def test_json_round_trip_and_key_order():
    c = build_certificate(P0, 2)
    text = certificate_to_json(c)
    assert list(json.loads(text))[:7] == ["class", "k", "s", "g0", "chain", "witnesses", "facts"]
    again = certificate_from_json(text)
    assert certificate_to_json(again) == text
    assert verify_certificate(again).overall


def test_json_garbage():
    with pytest.raises(StructuralError):
        certificate_from_json("{\"class\": \"T\"}")
    with pytest.raises(StructuralError):
        certificate_from_json("not json")


def test_seed_class_checks():
    with pytest.raises(PreconditionError):
        build_certificate(P0, 1, "T")
    with pytest.raises(PreconditionError):
        build_certificate(B, 0)


@given(elements("T", 8))
@settings(max_examples=15)
def test_random_t_certificates(g):
    assert verify_certificate(build_certificate(g, 2)).overall


def test_displacement_implies_condition_ii():
    # any h supported in I_i has its cover moved off itself by g_i
    rng = random.Random(2)
    c = build_certificate(B, 3)
    for i, g in enumerate(c.witnesses, start=1):
        w = c.chain[i].word
        for _ in range(10):
            tail = format(rng.randrange(4), "02b")
            h = from_cells([w + tail + "0", w + tail + "1"] + _rest(w + tail),
                           [w + tail + "1", w + tail + "0"] + _rest(w + tail))
            cover = support_cover(h)
            assert sets_disjoint(image_of(g, cover), cover)


def _rest(w):
    return [w[:i] + ("1" if w[i] == "0" else "0") for i in range(len(w))]


def test_commuting_family_examples():
    fam = build_commuting_family([B], 1)
    assert verify_commuting_family(fam).overall
    empty = build_commuting_family([], 2)
    assert verify_commuting_family(empty).overall
    with pytest.raises(PreconditionError):
        build_commuting_family([A], 1)


def test_commuting_family_from_factors():
    S = decompose_small(C, Dyadic(1, 2)).factors
    for f in S:
        assert verify_commuting_family(build_commuting_family([f], 2)).overall


def test_commuting_family_mutations():
    fam = build_commuting_family([B], 2)
    fam.opens = [fam.opens[0], fam.opens[0], fam.opens[2]]
    assert "W1" in verify_commuting_family(fam).failing()
    fam = build_commuting_family([B], 2)
    fam.movers = [IDENTITY] + fam.movers[1:]
    assert "W2" in verify_commuting_family(fam).failing()


def test_w3_follows_w1_w2():
    rng = random.Random(4)
    for _ in range(10):
        g = random_element(rng, "V", 8)
        S = [f for f in decompose_small(g, Dyadic(1, 2)).factors][:2]
        try:
            fam = build_commuting_family(S, 2, seed=rng.randrange(100))
        except PreconditionError:
            continue
        report = dict((n, ok) for n, ok, _ in verify_commuting_family(fam).checks)
        if report["W1"] and report["W2"]:
            assert report["W3"]


def test_family_json_round_trip():
    fam = build_commuting_family([B], 1)
    text = family_to_json(fam)
    assert family_to_json(family_from_json(text)) == text


def test_slots_are_disjoint():
    for n in range(1, 7):
        slots = disjoint_slots(n)
        for i in range(n):
            for j in range(i + 1, n):
                assert sets_disjoint(slots[i], slots[j])
