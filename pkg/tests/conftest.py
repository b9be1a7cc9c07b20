import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from thompcert.elements import eval_word

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

NAMES = {"F": ["A", "B"], "T": ["A", "B", "C"], "V": ["A", "B", "C", "P0"]}


def words(cls="V", max_len=8):
    token = st.tuples(st.sampled_from(NAMES[cls]), st.sampled_from([1, -1]))
    return st.lists(token, max_size=max_len)


def elements(cls="V", max_len=8):
    return words(cls, max_len).map(lambda w: eval_word(w, cls))


def dyadics(max_exp=8):
    """Dyadic points of [0, 1) as Fractions."""
    from fractions import Fraction

    return st.integers(0, max_exp).flatmap(
        lambda b: st.integers(0, (1 << b) - 1).map(lambda a: Fraction(a, 1 << b)))


@pytest.fixture
def rng():
    return random.Random(0)
