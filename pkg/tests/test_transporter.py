import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thompcert.dyadic import DySet, Space, StdInterval, contains_point, is_subset, make_interval
from thompcert.elements import (
    IDENTITY,
    ElementClass,
    class_of,
    commutator,
    compose,
    from_cells,
    generator,
    image_of,
)
from thompcert.errors import ClassError, PreconditionError
from thompcert.transporter import identity_near_boundary, shrink_into, shrink_within

C = Space.CIRCLE


def random_set(rng, depth=4, parts=3):
    ws = set()
    for _ in range(rng.randint(1, parts)):
        b = rng.randint(1, depth)
        ws.add(format(rng.randrange(1 << b), "b").zfill(b))
    return DySet.of(sorted(ws), C)


def random_excluded_point(rng, U2):
    while True:
        b = rng.randint(1, 6)
        x = Fraction(rng.randrange(1 << b), 1 << b)
        if not contains_point(U2, x):
            return x


def test_into_examples():
    U2, U1 = DySet.of(["10"], C), DySet.of(["00"], C)
    g = shrink_into("T", U2, U1, Fraction(3, 8))
    assert is_subset(image_of(g, U2), U1)
    assert ElementClass.T.contains(class_of(g))
    U2, U1 = DySet.of(["00", "100"], C), DySet.of(["111"], C)
    g = shrink_into("V", U2, U1, Fraction(3, 8))
    assert is_subset(image_of(g, U2), U1)


def test_into_trivial_case():
    U = DySet.of(["01"], C)
    g = shrink_into("T", U, DySet.of(["0"], C), Fraction(7, 8))
    assert g == IDENTITY


def test_into_preconditions():
    with pytest.raises(PreconditionError):
        shrink_into("T", DySet.of(["10"], C), DySet.empty(C), 0)
    with pytest.raises(PreconditionError):
        shrink_into("T", DySet.of(["10"], C), DySet.of(["0"], C), Fraction(5, 8))
    with pytest.raises(ClassError):
        shrink_into("F", DySet.of(["10"], C), DySet.of(["0"], C), 0)


@pytest.mark.parametrize("cls", ["T", "V"])
def test_into_random(cls):
    rng = random.Random(11)
    for _ in range(60):
        U2 = random_set(rng)
        if U2.is_whole():
            continue
        U1 = random_set(rng, depth=6, parts=2)
        x = random_excluded_point(rng, U2)
        g = shrink_into(cls, U2, U1, x)
        assert is_subset(image_of(g, U2), U1)
        if cls == "T":
            assert ElementClass.T.contains(class_of(g))


def test_within_examples():
    I = make_interval(0, 1)
    g = shrink_within("F", I, DySet.of(["0010"], C), DySet.of(["0100"], C))
    assert is_subset(image_of(g, DySet.of(["0010"], C)), DySet.of(["0100"], C))
    assert identity_near_boundary(g, I)
    I = make_interval(0, 0)
    g = shrink_within("F", I, DySet.of(["01"], C), DySet.of(["0001"], C))
    assert is_subset(image_of(g, DySet.of(["01"], C)), DySet.of(["0001"], C))
    assert identity_near_boundary(g, I)


def test_within_identity_case():
    I = make_interval(0, 1)
    U = DySet.of(["0101"], C)
    assert shrink_within("F", I, U, U) == IDENTITY


def test_within_rejects_boundary_contact():
    with pytest.raises(PreconditionError):
        shrink_within("F", make_interval(0, 1), DySet.of(["000"], C), DySet.of(["01"], C))
    with pytest.raises(PreconditionError):
        shrink_within("F", make_interval(0, 1), DySet.of(["001"], C), DySet.of(["1"], C))


def test_identity_near_boundary_examples():
    whole = make_interval(0, 0)
    assert identity_near_boundary(IDENTITY, whole)
    assert not identity_near_boundary(generator("B"), whole)


@given(st.text("01", min_size=0, max_size=3), st.text("01", min_size=1, max_size=3),
       st.text("01", min_size=1, max_size=3), st.sampled_from(["F", "T", "V"]))
def test_within_random(prefix, inner_tail, target_tail, cls):
    I = StdInterval.from_word(prefix)
    inner = prefix + "0" + inner_tail + "1"  # never touches the ends of I
    U2 = DySet.of([inner], C)
    U1 = DySet.of([prefix + target_tail], C)
    g = shrink_within(cls, I, U2, U1)
    assert is_subset(image_of(g, U2), U1)
    assert identity_near_boundary(g, I)
    # commutes with anything supported off I
    if prefix:
        other = prefix[:-1] + ("1" if prefix[-1] == "0" else "0")
        rest = [prefix[:i] + ("1" if prefix[i] == "0" else "0") for i in range(len(prefix) - 1)]
        h = from_cells([prefix, other + "0", other + "1"] + rest,
                       [prefix, other + "1", other + "0"] + rest)
        assert commutator(g, h).is_identity()
