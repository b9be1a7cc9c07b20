"""Elements carrying a compact dyadic set into a prescribed open target.

``shrink_into`` works on the whole circle and avoids one excluded point x.
``shrink_within`` stays inside a standard interval I and is the identity near
both ends of I, so its output lies in the commutator subgroup of the copy of
F living on I.

Targets are always carved out of K, the leftmost largest part of U1, so the
same input gives the same element every time.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import (
    Dyadic,
    DySet,
    Space,
    StdInterval,
    complement_words,
    contains_point,
    inside_interior,
    is_subset,
    leftmost_largest,
    word_bounds,
)
from .elements import (
    IDENTITY,
    Element,
    ElementClass,
    compose,
    from_cells,
    image_of,
    pl_map,
    rotation,
)
from .errors import ClassError, PreconditionError
from .support import support_cover


def _as_class(cls) -> ElementClass:
    return ElementClass(cls) if isinstance(cls, str) else cls


def _hull(words) -> tuple[Fraction, Fraction]:
    bounds = [word_bounds(w) for w in words]
    return min(a for a, _ in bounds), max(b for _, b in bounds)


def _second_quarter(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    L = hi - lo
    return lo + L / 4, lo + L / 2


def _even_out(words: list[str], n: int) -> list[str]:
    # split the shortest-prefix (largest) cells until there are n of them
    words = list(words)
    while len(words) < n:
        i = min(range(len(words)), key=lambda j: (len(words[j]), words[j]))
        w = words.pop(i)
        words[i:i] = [w + "0", w + "1"]
    return words


def shrink_into(cls, U2: DySet, U1: DySet, x) -> Element:
    """Element of T or V with image_of(g, U2) inside U1; U2 must avoid x."""
    cls = _as_class(cls)
    if cls is ElementClass.F:
        raise ClassError("shrink_into builds elements of T or V")
    if U1.is_empty():
        raise PreconditionError("target set U1 is empty")
    if contains_point(U2, x):
        raise PreconditionError(f"excluded point {Dyadic.coerce(x)} lies in U2")
    U2 = DySet(Space.CIRCLE, U2.words)
    U1 = DySet(Space.CIRCLE, U1.words)
    if U2.is_empty() or is_subset(U2, U1):
        return IDENTITY
    K = leftmost_largest(U1)
    klo, khi = K.bounds()
    if cls is ElementClass.T:
        # rotate x to 0; the image of U2 then sits in the open interval (0, 1)
        spin = rotation(-Dyadic.coerce(x).fraction())
        lo, hi = _hull(image_of(spin, U2).words)
        c, d = _second_quarter(klo, khi)
        squeeze = pl_map([0, lo, hi, 1], [0, c, d, 1])
        return compose(squeeze, spin)
    parts = list(U2.words)
    depth = max(len(parts) - 1, 0).bit_length()
    slots = [K.word + format(i, "b").zfill(depth) if depth else K.word for i in range(len(parts))]
    rest_dom = complement_words(parts)
    rest_rng = complement_words(slots)
    n = max(len(rest_dom), len(rest_rng))
    rest_dom = _even_out(rest_dom, n)
    rest_rng = _even_out(rest_rng, n)
    return from_cells(parts + rest_dom, slots + rest_rng)


def shrink_within(cls, I: StdInterval, U2: DySet, U1: DySet) -> Element:
    """Element of F supported on a closed J inside Int(I), carrying U2 into U1."""
    _as_class(cls)
    line_U2 = DySet(Space.LINE, U2.words)
    line_U1 = DySet(Space.LINE, U1.words)
    if not inside_interior(line_U2, I):
        raise PreconditionError(f"U2 = {U2} must lie in the interior of {I}")
    if U1.is_empty() or not is_subset(line_U1, DySet.of([I], Space.LINE)):
        raise PreconditionError(f"U1 = {U1} must be a nonempty subset of {I}")
    if line_U2.is_empty() or is_subset(line_U2, line_U1):
        return IDENTITY
    ilo, ihi = I.bounds()
    lo, hi = _hull(line_U2.words)
    K = leftmost_largest(line_U1)
    inner = _second_quarter(*K.bounds())
    c, d = _second_quarter(*inner)
    j0 = (ilo + min(lo, c)) / 2
    j1 = (ihi + max(hi, d)) / 2
    return pl_map([0, j0, lo, hi, j1, 1], [0, j0, c, d, j1, 1])


def identity_near_boundary(g: Element, I: StdInterval) -> bool:
    """Support cover of g inside I and away from both of its endpoints."""
    cover = DySet(Space.LINE, support_cover(g).words)
    return inside_interior(cover, I)
