"""Moved points and leaf-granular support covers.

The exact moved set of an element can have non-dyadic boundary points, so a
support is tracked as the union of the leaf cells of the reduced tree pair on
which the element is not the identity.  That cover contains every moved point
and exceeds the moved set by finitely many points at most.
"""

from __future__ import annotations

from typing import Iterable

from .dyadic import Dyadic, DySet, Space, canonical_words, set_size
from .elements import Element, evaluate, reduce


def moved(g: Element, x) -> bool:
    return evaluate(g, x) != Dyadic.coerce(x)


def support_cover(g: Element, space: Space = Space.CIRCLE) -> DySet:
    return DySet(space, canonical_words(d for d, r in reduce(g).rules if d != r))


def support_size(g: Element) -> Dyadic:
    return set_size(support_cover(g))


def support_cover_of_set(elements: Iterable[Element], space: Space = Space.CIRCLE) -> DySet:
    words: list[str] = []
    for g in elements:
        words.extend(d for d, r in reduce(g).rules if d != r)
    return DySet(space, canonical_words(words))
