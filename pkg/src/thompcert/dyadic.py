"""Exact dyadic rationals, standard dyadic intervals and finite unions of them.

A standard dyadic interval [a/2^b, (a+1)/2^b] is identified with the binary
word of length b spelling ``a``; this is how every other module addresses
leaves of binary trees.  Interval unions (``DySet``) are kept canonical:
sorted, nested parts dropped, complete sibling pairs merged.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, UsageError


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """The number ``num / 2**exp`` with ``exp >= 0``, stored canonically."""

    num: int
    exp: int = 0

    def __post_init__(self):
        if self.exp < 0:
            raise DomainError(f"negative exponent {self.exp}")
        num, exp = self.num, self.exp
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, Fraction):
            if not _is_pow2(value.denominator):
                raise DomainError(f"{value} is not a dyadic rational")
            return cls(value.numerator, value.denominator.bit_length() - 1)
        if isinstance(value, str):
            return parse_dyadic(value)
        raise TypeError(f"cannot make a Dyadic from {value!r}")

    def fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __add__(self, other):
        return Dyadic.coerce(self.fraction() + Dyadic.coerce(other).fraction())

    def __sub__(self, other):
        return Dyadic.coerce(self.fraction() - Dyadic.coerce(other).fraction())

    def __mul__(self, other):
        return Dyadic.coerce(self.fraction() * Dyadic.coerce(other).fraction())

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __eq__(self, other):
        if isinstance(other, (Dyadic, int, Fraction)):
            return self.fraction() == Dyadic.coerce(other).fraction()
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.exp))

    def __lt__(self, other):
        return self.fraction() < Dyadic.coerce(other).fraction()

    def __str__(self):
        return f"{self.num}/2^{self.exp}"

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"


_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\s*\^\s*(\d+)|(\d+)))?\s*$")


def parse_dyadic(text: str) -> Dyadic:
    """Parse ``"a/2^b"``, ``"a/d"`` with d a power of two, or an integer."""
    m = _DYADIC_RE.match(text)
    if not m:
        raise ParseError(f"not a dyadic rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is not None:
        return Dyadic(num, int(m.group(2)))
    if m.group(3) is not None:
        den = int(m.group(3))
        if not _is_pow2(den):
            raise ParseError(f"denominator {den} is not a power of two")
        return Dyadic(num, den.bit_length() - 1)
    return Dyadic(num, 0)


# -- binary words -----------------------------------------------------------

def word_bounds(word: str) -> tuple[Fraction, Fraction]:
    b = len(word)
    a = int(word, 2) if word else 0
    return Fraction(a, 1 << b), Fraction(a + 1, 1 << b)


def word_of(a: int, b: int) -> str:
    return format(a, "b").zfill(b) if b else ""


def is_prefix(p: str, w: str) -> bool:
    return w.startswith(p)


def words_between(lo: Fraction, hi: Fraction) -> list[str]:
    """Greedy partition of [lo, hi] (dyadic endpoints) into standard intervals."""
    out = []
    x = lo
    while x < hi:
        # largest 2^-j with x a multiple of it and x + 2^-j <= hi
        j = 0
        while True:
            step = Fraction(1, 1 << j)
            if (x / step).denominator == 1 and x + step <= hi:
                break
            j += 1
        out.append(word_of(int(x / step), j))
        x += step
    return out


def complement_words(words: Iterable[str]) -> list[str]:
    """Words completing a prefix-free set of binary words to a complete code."""
    words = set(words)
    out: list[str] = []

    def walk(node: str):
        if node in words:
            return
        if not any(w.startswith(node) for w in words):
            out.append(node)
            return
        walk(node + "0")
        walk(node + "1")

    walk("")
    return out


def canonical_words(words: Iterable[str]) -> tuple[str, ...]:
    ws = sorted(set(words))
    # drop parts nested inside another part
    kept: list[str] = []
    for w in ws:
        if kept and w.startswith(kept[-1]):
            continue
        kept.append(w)
    merged = set(kept)
    changed = True
    while changed:
        changed = False
        for w in sorted(merged, key=len, reverse=True):
            if w and w[-1] == "0" and w[:-1] + "1" in merged:
                merged -= {w, w[:-1] + "1"}
                merged.add(w[:-1])
                changed = True
                break
    return tuple(sorted(merged))


# -- standard intervals -----------------------------------------------------

@dataclass(frozen=True, order=True)
class StdInterval:
    """[a/2^b, (a+1)/2^b]."""

    a: int
    b: int

    def __post_init__(self):
        if self.b < 0 or not (0 <= self.a < (1 << self.b)):
            raise DomainError(f"({self.a}, {self.b}) is not a standard dyadic interval")

    @classmethod
    def from_word(cls, word: str) -> "StdInterval":
        return cls(int(word, 2) if word else 0, len(word))

    @property
    def word(self) -> str:
        return word_of(self.a, self.b)

    @property
    def left(self) -> Dyadic:
        return Dyadic(self.a, self.b)

    @property
    def right(self) -> Dyadic:
        return Dyadic(self.a + 1, self.b)

    @property
    def length(self) -> Dyadic:
        return Dyadic(1, self.b)

    def bounds(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, 1 << self.b), Fraction(self.a + 1, 1 << self.b)

    def __str__(self):
        return f"[{self.a}/2^{self.b},{self.a + 1}/2^{self.b}]"


def make_interval(a: int, b: int) -> StdInterval:
    return StdInterval(a, b)


_INTERVAL_RE = re.compile(r"\[\s*(\d+)\s*/\s*2\s*\^\s*(\d+)\s*,\s*(\d+)\s*/\s*2\s*\^\s*(\d+)\s*\]")


def parse_interval(text: str) -> StdInterval:
    m = _INTERVAL_RE.fullmatch(text.strip())
    if not m:
        raise ParseError(f"not an interval: {text!r}")
    a, b, a1, b1 = map(int, m.groups())
    if b != b1 or a1 != a + 1:
        raise ParseError(f"not a standard dyadic interval: {text!r}")
    try:
        return StdInterval(a, b)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def image_under_affine(interval: StdInterval, slope, offset) -> StdInterval:
    """Image of ``interval`` under x -> slope*x + offset."""
    slope = Dyadic.coerce(slope).fraction()
    offset = Dyadic.coerce(offset).fraction()
    lo, hi = interval.bounds()
    nlo, nhi = slope * lo + offset, slope * hi + offset
    length = nhi - nlo
    if length <= 0 or length.numerator != 1 or not _is_pow2(length.denominator):
        raise AssertionError(f"affine image of {interval} is not standard")
    b = length.denominator.bit_length() - 1
    a = nlo * (1 << b)
    if a.denominator != 1 or not (0 <= a < (1 << b)):
        raise AssertionError(f"affine image of {interval} is not standard")
    return StdInterval(int(a), b)


# -- unions -----------------------------------------------------------------

class Space(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"


@dataclass(frozen=True)
class DySet:
    """Canonical finite union of standard dyadic intervals."""

    space: Space
    words: tuple[str, ...]

    @classmethod
    def of(cls, parts: Iterable, space: Space = Space.LINE) -> "DySet":
        ws = []
        for p in parts:
            if isinstance(p, StdInterval):
                ws.append(p.word)
            elif isinstance(p, str):
                if set(p) - {"0", "1"}:
                    raise DomainError(f"bad binary word {p!r}")
                ws.append(p)
            else:
                raise TypeError(f"not an interval: {p!r}")
        return cls(space, canonical_words(ws))

    @classmethod
    def empty(cls, space: Space = Space.LINE) -> "DySet":
        return cls(space, ())

    @classmethod
    def whole(cls, space: Space = Space.LINE) -> "DySet":
        return cls(space, ("",))

    @property
    def parts(self) -> tuple[StdInterval, ...]:
        return tuple(StdInterval.from_word(w) for w in self.words)

    def is_empty(self) -> bool:
        return not self.words

    def is_whole(self) -> bool:
        return self.words == ("",)

    def __str__(self):
        return "{" + ",".join(str(p) for p in self.parts) + "}"


def parse_dyset(text: str, space: Space = Space.LINE) -> DySet:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ParseError(f"interval set must be braced: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return DySet.empty(space)
    found = _INTERVAL_RE.findall(inner)
    leftover = _INTERVAL_RE.sub("", inner).replace(",", "").strip()
    if leftover:
        raise ParseError(f"unparsable interval set: {text!r}")
    parts = [parse_interval(f"[{a}/2^{b},{c}/2^{d}]") for a, b, c, d in found]
    return DySet.of(parts, space)


def canonical(A: DySet) -> DySet:
    return DySet(A.space, canonical_words(A.words))


def _check_space(A: DySet, B: DySet):
    if A.space != B.space:
        raise UsageError(f"mixed spaces {A.space.value} and {B.space.value}")


def _closed_meet(w1: str, w2: str, circle: bool) -> bool:
    a1, b1 = word_bounds(w1)
    a2, b2 = word_bounds(w2)
    if a1 <= b2 and a2 <= b1:
        return True
    return circle and ((b1 == 1 and a2 == 0) or (b2 == 1 and a1 == 0))


def sets_disjoint(A: DySet, B: DySet) -> bool:
    """No common point, endpoints included (0 and 1 identified on the circle)."""
    _check_space(A, B)
    circle = A.space is Space.CIRCLE
    return not any(_closed_meet(u, v, circle) for u in A.words for v in B.words)


def set_size(A: DySet) -> Dyadic:
    total = Fraction(0)
    for w in A.words:
        total += Fraction(1, 1 << len(w))
    return Dyadic.coerce(total)


def union(A: DySet, B: DySet) -> DySet:
    _check_space(A, B)
    return DySet(A.space, canonical_words(A.words + B.words))


def intersection(A: DySet, B: DySet) -> DySet:
    """Intersection up to finitely many points (shared endpoints are dropped)."""
    _check_space(A, B)
    out = []
    for u in A.words:
        for v in B.words:
            if v.startswith(u):
                out.append(v)
            elif u.startswith(v):
                out.append(u)
    return DySet(A.space, canonical_words(out))


def complement(A: DySet) -> DySet:
    return DySet(A.space, canonical_words(complement_words(A.words)))


def is_subset(A: DySet, B: DySet) -> bool:
    """A contained in B as closed sets."""
    _check_space(A, B)
    return all(any(u.startswith(v) for v in B.words) for u in A.words)


def inside_interior(A: DySet, interval: StdInterval) -> bool:
    """A lies in the interior of ``interval``, measured on the line.

    The whole circle counts as open, so everything lies in its interior.
    """
    if interval.b == 0 and A.space is Space.CIRCLE:
        return True
    lo, hi = interval.bounds()
    for w in A.words:
        if not w.startswith(interval.word):
            return False
        a, b = word_bounds(w)
        if a == lo or b == hi:
            return False
    return True


def contains_point(A: DySet, x) -> bool:
    x = Dyadic.coerce(x).fraction()
    circle = A.space is Space.CIRCLE
    for w in A.words:
        a, b = word_bounds(w)
        if a <= x <= b or (circle and x == 0 and b == 1):
            return True
    return False


def leftmost_largest(A: DySet) -> StdInterval:
    if A.is_empty():
        raise DomainError("empty set has no largest part")
    return min(A.parts, key=lambda p: (p.b, p.a))


def max_exponent(sets: Sequence[DySet]) -> int:
    return max((len(w) for s in sets for w in s.words), default=0)
