"""Factorisations into elements of small support.

``decompose_small(g, eps)`` writes any element of F, T or V as a product of
elements whose support covers have total length below ``eps``:

* F: midpoint routing.  For f supported in a carrier [lo, hi] with midpoint m,
  move d = f(m) back to m with at most two point movers, each supported in a
  half-length sub-carrier (left half, middle half, right half).  The corrected
  map fixes m and splits into a left and a right piece.  Every piece lives on
  a carrier of half the length, so recursion stops once carriers are shorter
  than eps.
* T: move g(0) back to 0 along the arcs [0,1/2], [1/4,3/4], [1/2,1] and
  [3/4,1]∪[0,1/4]; the remainder fixes 0 and is handled as an element of F.
  Arc [3/4,1/4] is treated by conjugating with the half-turn rotation.
* V: refine until every leaf is shorter than eps/2, then split into an
  order-preserving part (an element of F) and a permutation of domain leaves,
  written as leaf exchanges.

Factors are listed leftmost-applied-last, like ``compose``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dyadic import Dyadic, DySet, Space, is_subset
from .elements import (
    IDENTITY,
    Element,
    ElementClass,
    Word,
    class_of,
    compose,
    equals,
    eval_word,
    evaluate,
    from_cells,
    invert,
    pl_map,
    product,
    refine,
    restrict,
    rotation,
)
from .errors import ClassError, DomainError
from .support import support_cover, support_size

HALF_TURN = rotation(Fraction(1, 2))



@dataclass(frozen=True)
class LocalCopy:
    """Affine copy of [0,1] of length 1/2 on which a copy of F (or T) acts."""

    name: str
    carrier: DySet
    kind: str  # "F" or "T"

    def contains(self, g: Element) -> bool:
        return is_subset(support_cover(g), self.carrier)


LOCAL_COPIES = {
    "U1": LocalCopy("U1", DySet.of(["0"], Space.CIRCLE), "F"),
    "U2": LocalCopy("U2", DySet.of(["01", "10"], Space.CIRCLE), "F"),
    "U3": LocalCopy("U3", DySet.of(["1"], Space.CIRCLE), "F"),
    # wraps through 0, so only the circle sees it as an interval
    "U4": LocalCopy("U4", DySet.of(["11", "00"], Space.CIRCLE), "T"),
}
CARRIERS = {name: c.carrier for name, c in LOCAL_COPIES.items()}


@dataclass
class FactorList:
    factors: list[Element]
    target: Element
    epsilon: Dyadic
    carriers: list[str] = field(default_factory=list)

    def product(self) -> Element:
        return product(self.factors)

    def sizes(self) -> list[Dyadic]:
        return [support_size(f) for f in self.factors]

    def verify(self) -> bool:
        if not equals(self.product(), self.target):
            return False
        return all(s < self.epsilon for s in self.sizes())


# -- point movers -----------------------------------------------------------------

def point_mover(lo, hi, p, q) -> Element:
    """Element of F supported in [lo, hi] sending p to q (both interior)."""
    lo, hi, p, q = (Dyadic.coerce(v).fraction() for v in (lo, hi, p, q))
    if not (lo < p < hi and lo < q < hi):
        raise DomainError(f"points {p}, {q} must lie inside ({lo}, {hi})")
    if p == q:
        return IDENTITY
    dom = sorted({Fraction(0), lo, p, hi, Fraction(1)})
    rng = sorted({Fraction(0), lo, q, hi, Fraction(1)})
    return pl_map(dom, rng)


def _arc_mover(p: Fraction, q: Fraction) -> Element:
    # mover on the arc [3/4,1] ∪ [0,1/4], conjugated from [1/4,3/4]
    half = Fraction(1, 2)
    inner = point_mover(Fraction(1, 4), Fraction(3, 4), (p + half) % 1, (q + half) % 1)
    return compose(invert(HALF_TURN), compose(inner, HALF_TURN))


# -- F ----------------------------------------------------------------------------

def _split_f(f: Element, lo: Fraction, hi: Fraction, eps: Fraction, out: list[Element]):
    if f.is_identity():
        return
    if support_size(f).fraction() < eps:
        out.append(f)
        return
    L = hi - lo
    mid, q1, q3 = lo + L / 2, lo + L / 4, lo + 3 * L / 4
    d = evaluate(f, mid).fraction()
    moves: list[tuple[Element, Fraction, Fraction]] = []
    if d != mid:
        if q1 < d < q3:
            moves.append((point_mover(q1, q3, d, mid), q1, q3))
        elif d <= q1:
            stop = lo + 3 * L / 8
            moves.append((point_mover(lo, mid, d, stop), lo, mid))
            moves.append((point_mover(q1, q3, stop, mid), q1, q3))
        else:
            stop = lo + 5 * L / 8
            moves.append((point_mover(mid, hi, d, stop), mid, hi))
            moves.append((point_mover(q1, q3, stop, mid), q1, q3))
    h = f
    for m, _, _ in moves:
        h = compose(m, h)
    # f = m0^-1 ∘ m1^-1 ∘ left ∘ right
    for m, a, b in moves:
        _split_f(invert(m), a, b, eps, out)
    _split_f(restrict(h, lo, mid), lo, mid, eps, out)
    _split_f(restrict(h, mid, hi), mid, hi, eps, out)


def decompose_f(f: Element, eps, lo=0, hi=1) -> list[Element]:
    out: list[Element] = []
    _split_f(f, Dyadic.coerce(lo).fraction(), Dyadic.coerce(hi).fraction(),
             Dyadic.coerce(eps).fraction(), out)
    return out


# -- T ----------------------------------------------------------------------------

def _return_to_zero(y: Fraction) -> list[tuple[Element, str]]:
    """Movers, first applied first, taking y back to 0 along the four arcs."""
    q = Fraction(1, 4)
    if y == 0:
        return []
    if y > 3 * q or y < q:
        return [(_arc_mover(y, Fraction(0)), "U4")]
    if y < 2 * q:
        stop = Fraction(1, 8)
        return [(point_mover(0, 2 * q, y, stop), "U1"), (_arc_mover(stop, Fraction(0)), "U4")]
    if y > 2 * q:
        stop = Fraction(7, 8)
        return [(point_mover(2 * q, 1, y, stop), "U3"), (_arc_mover(stop, Fraction(0)), "U4")]
    # y == 1/2 sits on the boundary of U1 and U3
    return [
        (point_mover(q, 3 * q, y, Fraction(5, 8)), "U2"),
        (point_mover(2 * q, 1, Fraction(5, 8), Fraction(7, 8)), "U3"),
        (_arc_mover(Fraction(7, 8), Fraction(0)), "U4"),
    ]


_CARRIER_BOUNDS = {
    "U1": (Fraction(0), Fraction(1, 2)),
    "U2": (Fraction(1, 4), Fraction(3, 4)),
    "U3": (Fraction(1, 2), Fraction(1)),
}


def _decompose_in_carrier(f: Element, carrier: str, eps) -> list[Element]:
    if carrier == "U4":
        inner = compose(HALF_TURN, compose(f, invert(HALF_TURN)))
        return [compose(invert(HALF_TURN), compose(x, HALF_TURN))
                for x in decompose_f(inner, eps, Fraction(1, 4), Fraction(3, 4))]
    lo, hi = _CARRIER_BOUNDS[carrier]
    return decompose_f(f, eps, lo, hi)


def decompose_t(g: Element, eps) -> list[Element]:
    moves = _return_to_zero(evaluate(g, 0).fraction())
    rest = g
    for m, _ in moves:
        rest = compose(m, rest)
    out: list[Element] = []
    for m, carrier in moves:
        out += _decompose_in_carrier(invert(m), carrier, eps)
    return out + decompose_f(rest, eps)


# -- V ----------------------------------------------------------------------------

def _exchange(cells: Sequence[str], a: int, b: int) -> Element:
    rng = list(cells)
    rng[a], rng[b] = rng[b], rng[a]
    return from_cells(cells, rng)


def decompose_v(g: Element, eps) -> list[Element]:
    eps = Dyadic.coerce(eps).fraction()
    n = 0
    while Fraction(2, 1 << n) >= eps:
        n += 1
    rules = refine(g, n)
    cells = [d for d, _ in rules]
    ranked = sorted(r for _, r in rules)
    rank = {r: i for i, r in enumerate(ranked)}
    sigma = [rank[r] for _, r in rules]
    order_preserving = from_cells(cells, ranked)
    # g = order_preserving ∘ p with p(cell i) = cell sigma(i)
    exchanges: list[Element] = []
    seen = [False] * len(sigma)
    for start in range(len(sigma)):
        if seen[start] or sigma[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = sigma[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = sigma[nxt]
        # (a1 a2 ... ak) = (a1 a2)(a2 a3)...(a_{k-1} a_k)
        exchanges += [_exchange(cells, cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1)]
    return decompose_f(order_preserving, eps) + exchanges


# -- entry points -----------------------------------------------------------------

def decompose_small(g: Element, eps) -> FactorList:
    eps = Dyadic.coerce(eps)
    if eps.fraction() <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    cls = class_of(g)
    if g.is_identity():
        factors: list[Element] = []
    elif support_size(g) < eps:
        factors = [g]
    elif cls is ElementClass.F:
        factors = decompose_f(g, eps)
    elif cls is ElementClass.T:
        factors = decompose_t(g, eps)
    else:
        factors = decompose_v(g, eps)
    factors = [f for f in factors if not f.is_identity()]
    return FactorList(factors, g, eps)


# Leaf words of the tree diagrams behind the base factorizations of A and C, keyed by
# leaf label.  Consecutive trees define one factor each.
_BASE_A_TREES = [
    ["00", "01", "10", "110", "111"],
    ["00", "01", "100", "101", "11"],
    ["00", "010", "011", "10", "11"],
    ["000", "001", "01", "10", "11"],
]
_BASE_A_CARRIERS = ["U3", "U2", "U1"]

_BASE_C_TREES = [
    {0: "00", 1: "01", 2: "100", 3: "101", 4: "110", 5: "111"},
    {0: "00", 1: "01", 2: "10", 3: "110", 4: "1110", 5: "1111"},
    {4: "0000", 5: "0001", 0: "001", 1: "01", 2: "10", 3: "11"},
    {4: "00", 5: "010", 0: "0110", 1: "0111", 2: "10", 3: "11"},
    {4: "00", 5: "01", 0: "1000", 1: "1001", 2: "101", 3: "11"},
    {4: "00", 5: "01", 0: "100", 1: "101", 2: "110", 3: "111"},
]
_BASE_C_CARRIERS = ["U3", "U4", "U1", "U2", "U3"]


def base_factorization(name: str) -> FactorList:
    """Explicit factors, each supported in one of U1..U4, of A, C or P0."""
    if name == "A":
        steps = [from_cells(a, b) for a, b in zip(_BASE_A_TREES, _BASE_A_TREES[1:])]
        # the drawn chain multiplies out to A^-1; walk it backwards
        factors = [invert(s) for s in steps]
        carriers = list(_BASE_A_CARRIERS)
        target = eval_word([("A", 1)])
    elif name == "C":
        steps = [from_cells([a[k] for k in range(6)], [b[k] for k in range(6)])
                 for a, b in zip(_BASE_C_TREES, _BASE_C_TREES[1:])]
        factors = steps[::-1]
        carriers = _BASE_C_CARRIERS[::-1]
        target = eval_word([("C", 1)])
    elif name == "P0":
        # P0 already lives in [0,1/2]
        factors = [eval_word([("P0", 1)])]
        carriers = ["U1"]
        target = factors[0]
    else:
        raise DomainError(f"no base factorization for {name!r}")
    return FactorList(factors, target, Dyadic(1), carriers)


def carrier_ok(factors: FactorList) -> bool:
    return all(LOCAL_COPIES[c].contains(f) for f, c in zip(factors.factors, factors.carriers))


# -- words for elements of F ------------------------------------------------------

def _vine(n: int) -> list[str]:
    return ["1" * i + "0" for i in range(n - 1)] + ["1" * (n - 1)]


def _leaf_exponents(words: Sequence[str]) -> list[int]:
    out = []
    for w in words:
        head = w.rstrip("0")
        run = len(w) - len(head)
        on_spine = set(head) <= {"1"}
        out.append(max(run - 1, 0) if on_spine else run)
    return out


def _x_power(i: int, e: int) -> Word:
    # x_0 = A^-1, x_i = A^(i-1) B^-1 A^-(i-1)
    if i == 0:
        return [("A", -e)]
    return [("A", i - 1), ("B", -e), ("A", -(i - 1))]


def _positive_word(words: Sequence[str]) -> Word:
    """Word for the element of F carrying the right vine onto this tree."""
    out: Word = []
    for i, e in enumerate(_leaf_exponents(words)):
        if e:
            out += _x_power(i, e)
    return out


def _inverse_word(word: Word) -> Word:
    return [(name, -e) for name, e in reversed(word)]


def _tidy(word: Word) -> Word:
    out: Word = []
    for name, e in word:
        if e == 0:
            continue
        if out and out[-1][0] == name:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((name, e))
    return out


def f_to_word(g: Element) -> Word:
    """Word over A, B evaluating to g (leaf-exponent normal form)."""
    if class_of(g) is not ElementClass.F:
        raise ClassError("f_to_word needs an element of F")
    dom = g.domain_words
    rng = g.range_words
    return _tidy(_positive_word(rng) + _inverse_word(_positive_word(dom)))
