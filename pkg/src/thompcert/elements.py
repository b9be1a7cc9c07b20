"""Tree-pair diagrams for elements of Thompson's groups F, T and V.

An element is stored as its list of leaf rules ``(d, r)``: the standard
interval named by the binary word ``d`` is carried affinely onto the one named
by ``r``.  Domain words are sorted, so they read the domain tree's leaves left
to right; ``perm`` is recovered by ranking the range words.  Every public
constructor returns the reduced representative, which makes ``==`` on
``Element`` the word-problem equality.
"""

from __future__ import annotations

import enum
import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadic import (
    Dyadic,
    DySet,
    Space,
    StdInterval,
    canonical_words,
    word_bounds,
    words_between,
)
from .errors import ClassError, DomainError, ParseError

Rule = tuple[str, str]


class ElementClass(enum.Enum):
    F = "F"
    T = "T"
    V = "V"

    def contains(self, other: "ElementClass") -> bool:
        order = {"F": 0, "T": 1, "V": 2}
        return order[other.value] <= order[self.value]


# -- prefix codes ---------------------------------------------------------------

def _is_complete_code(words: Sequence[str]) -> bool:
    ws = sorted(words)
    for u, v in zip(ws, ws[1:]):
        if v.startswith(u):
            return False
    return sum(Fraction(1, 1 << len(w)) for w in ws) == 1


def _reduce_rules(mapping: dict[str, str]) -> dict[str, str]:
    stack = list(mapping)
    while stack:
        w = stack.pop()
        if not w or w not in mapping:
            continue
        parent = w[:-1]
        w0, w1 = parent + "0", parent + "1"
        if w0 not in mapping or w1 not in mapping:
            continue
        r0, r1 = mapping[w0], mapping[w1]
        if r0 and r1 and r0[:-1] == r1[:-1] and r0[-1] == "0" and r1[-1] == "1":
            del mapping[w0], mapping[w1]
            mapping[parent] = r0[:-1]
            stack.append(parent)
    return mapping


@dataclass(frozen=True)
class Element:
    """Reduced tree pair, as sorted leaf rules (domain word, range word)."""

    rules: tuple[Rule, ...]

    @classmethod
    def identity(cls) -> "Element":
        return cls((("", ""),))

    @classmethod
    def from_rules(cls, pairs: Iterable[Rule], reduced: bool = True) -> "Element":
        mapping = dict(pairs)
        if not _is_complete_code(list(mapping)) or not _is_complete_code(list(mapping.values())):
            raise DomainError("leaf words do not partition [0,1]")
        if len(set(mapping.values())) != len(mapping):
            raise DomainError("range leaves repeat")
        if reduced:
            mapping = _reduce_rules(mapping)
        return cls(tuple(sorted(mapping.items())))

    @property
    def leaf_count(self) -> int:
        return len(self.rules)

    @property
    def domain_words(self) -> list[str]:
        return [d for d, _ in self.rules]

    @property
    def range_words(self) -> list[str]:
        return sorted(r for _, r in self.rules)

    @property
    def perm(self) -> list[int]:
        rank = {r: i for i, r in enumerate(self.range_words)}
        return [rank[r] + 1 for _, r in self.rules]

    def is_identity(self) -> bool:
        return self.rules == (("", ""),)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"Element({format_element(self)!r})"


IDENTITY = Element.identity()


def reduce(g: Element) -> Element:
    return Element(tuple(sorted(_reduce_rules(dict(g.rules)).items())))


def equals(g: Element, h: Element) -> bool:
    return reduce(g).rules == reduce(h).rules


def grid_equal(g: Element, h: Element) -> bool:
    """Pointwise oracle for ``equals``.

    Both maps are affine on every cell of the common refinement of their
    domain leaves, so three sample points per cell settle the question.
    """
    cells = sorted(set(g.domain_words) | set(h.domain_words))
    finest = [w for i, w in enumerate(cells)
              if not (i + 1 < len(cells) and cells[i + 1].startswith(w))]
    for w in finest:
        lo, hi = word_bounds(w)
        step = (hi - lo) / 4
        for x in (lo, lo + step, lo + 2 * step):
            if evaluate(g, x) != evaluate(h, x):
                return False
    return True


def class_of(g: Element) -> ElementClass:
    perm = reduce(g).perm
    n = len(perm)
    if all(p == i + 1 for i, p in enumerate(perm)):
        return ElementClass.F
    shift = perm[0] - 1
    if all(p - 1 == (i + shift) % n for i, p in enumerate(perm)):
        return ElementClass.T
    return ElementClass.V


# -- group law --------------------------------------------------------------------

def compose(g: Element, h: Element) -> Element:
    """g after h (h is applied first)."""
    gdom = [d for d, _ in g.rules]
    gmap = dict(g.rules)
    out: dict[str, str] = {}
    for d, r in h.rules:
        hit = None
        for i in range(len(r) + 1):
            if r[:i] in gmap:
                hit = r[:i]
                break
        if hit is not None:
            out[d] = gmap[hit] + r[len(hit):]
            continue
        j = bisect_left(gdom, r)
        while j < len(gdom) and gdom[j].startswith(r):
            d2 = gdom[j]
            out[d + d2[len(r):]] = gmap[d2]
            j += 1
    return Element(tuple(sorted(_reduce_rules(out).items())))


def invert(g: Element) -> Element:
    return Element(tuple(sorted((r, d) for d, r in g.rules)))


def product(factors: Sequence[Element]) -> Element:
    """factors[0] ∘ factors[1] ∘ ... (the last factor acts first)."""
    acc = IDENTITY
    for f in reversed(factors):
        acc = compose(f, acc)
    return acc


def conjugate(g: Element, h: Element) -> Element:
    """g h g^-1."""
    return compose(g, compose(h, invert(g)))


def commutator(g: Element, h: Element) -> Element:
    """g h g^-1 h^-1."""
    return compose(compose(g, h), compose(invert(g), invert(h)))


# -- evaluation ---------------------------------------------------------------------

def _locate(g: Element, x: Fraction) -> Rule:
    for d, r in g.rules:
        lo, hi = word_bounds(d)
        if lo <= x < hi:
            return d, r
    raise DomainError(f"{x} is outside [0,1)")


def evaluate(g: Element, x) -> Dyadic:
    """Image of x; the half-open leaf cell [a, b) containing x decides.

    At x = 1 the left limit is returned (1 for elements of F).
    """
    x = Dyadic.coerce(x).fraction()
    if x == 1:
        d, r = g.rules[-1]
        _, rhi = word_bounds(r)
        return Dyadic.coerce(rhi % 1 if rhi != 1 else rhi)
    if not 0 <= x < 1:
        raise DomainError(f"{x} is outside [0,1]")
    d, r = _locate(g, x)
    dlo, _ = word_bounds(d)
    rlo, _ = word_bounds(r)
    scale = Fraction(1 << len(d), 1 << len(r))
    return Dyadic.coerce(rlo + (x - dlo) * scale)


def image_of(g: Element, A: DySet) -> DySet:
    out = []
    for w in A.words:
        for d, r in g.rules:
            if w.startswith(d):
                out.append(r + w[len(d):])
            elif d.startswith(w):
                out.append(r)
    return DySet(A.space, canonical_words(out))


# -- text forms ---------------------------------------------------------------------

def tree_text(words: Iterable[str]) -> str:
    leaves = set(words)

    def build(node: str) -> str:
        if node in leaves:
            return "*"
        return "(" + build(node + "0") + build(node + "1") + ")"

    return build("")


def tree_words(text: str) -> list[str]:
    s = re.sub(r"\s+", "", text)
    pos = 0
    out: list[str] = []

    def parse(node: str):
        nonlocal pos
        if pos >= len(s):
            raise ParseError(f"truncated tree: {text!r}")
        if s[pos] == "*":
            pos += 1
            out.append(node)
        elif s[pos] == "(":
            pos += 1
            parse(node + "0")
            parse(node + "1")
            if pos >= len(s) or s[pos] != ")":
                raise ParseError(f"expected ')' in tree: {text!r}")
            pos += 1
        else:
            raise ParseError(f"unexpected {s[pos]!r} in tree: {text!r}")

    parse("")
    if pos != len(s):
        raise ParseError(f"trailing text in tree: {text!r}")
    return out


def format_element(g: Element) -> str:
    dom = tree_text(g.domain_words)
    rng = tree_text(g.range_words)
    return f"{dom} -> {rng} ; [{' '.join(map(str, g.perm))}]"


def parse_element(text: str) -> Element:
    if "->" not in text:
        raise ParseError(f"element needs '->': {text!r}")
    lhs, rest = text.split("->", 1)
    if ";" in rest:
        rhs, perm_text = rest.split(";", 1)
    else:
        rhs, perm_text = rest, "[id]"
    dom = tree_words(lhs)
    rng = sorted(tree_words(rhs))
    if len(dom) != len(rng):
        raise ParseError("trees have different leaf counts")
    body = perm_text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"bad permutation: {perm_text!r}")
    body = body[1:-1].split()
    if body == ["id"]:
        perm = list(range(1, len(dom) + 1))
    else:
        try:
            perm = [int(t) for t in body]
        except ValueError as exc:
            raise ParseError(f"bad permutation: {perm_text!r}") from exc
    if sorted(perm) != list(range(1, len(dom) + 1)):
        raise ParseError(f"not a permutation of 1..{len(dom)}: {perm_text!r}")
    try:
        return Element.from_rules(zip(dom, (rng[p - 1] for p in perm)))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


# -- generators and words -----------------------------------------------------------

_GENERATORS = {
    "A": (("00", "0"), ("01", "10"), ("1", "11")),
    "B": (("0", "0"), ("100", "10"), ("101", "110"), ("11", "111")),
    "C": (("0", "10"), ("10", "11"), ("11", "0")),
    "P0": (("00", "01"), ("01", "00"), ("1", "1")),
}
_GEN_CLASS = {"A": ElementClass.F, "B": ElementClass.F, "C": ElementClass.T, "P0": ElementClass.V}


def generator(name: str) -> Element:
    try:
        return Element(tuple(sorted(_GENERATORS[name])))
    except KeyError:
        raise DomainError(f"unknown generator {name!r}") from None


Word = list[tuple[str, int]]

_TOKEN_RE = re.compile(r"^(A|B|C|P0|ID)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    word: Word = []
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ParseError(f"bad word token {tok!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if name == "ID" or exp == 0:
            continue
        word.append((name, exp))
    return word


def format_word(word: Word) -> str:
    if not word:
        return "ID"
    return " ".join(name if e == 1 else f"{name}^{e}" for name, e in word)


def eval_word(word: Word, cls: ElementClass | str = ElementClass.V) -> Element:
    cls = ElementClass(cls) if isinstance(cls, str) else cls
    acc = IDENTITY
    for name, exp in reversed(word):
        if name not in _GENERATORS:
            raise DomainError(f"unknown generator {name!r}")
        if not cls.contains(_GEN_CLASS[name]):
            raise ClassError(f"{name} is not in {cls.value}")
        g = generator(name)
        if exp < 0:
            g, exp = invert(g), -exp
        for _ in range(exp):
            acc = compose(g, acc)
    return acc


def parse_element_or_word(text: str, cls: ElementClass | str = ElementClass.V) -> Element:
    if "->" in text:
        return parse_element(text)
    return eval_word(parse_word(text), cls)


# -- constructors used by the decomposition and transport modules ----------------------

def pad_words(words: list[str], n: int) -> list[str]:
    """Split the largest cells (leftmost first) until there are n of them."""
    words = list(words)
    if len(words) > n:
        raise ValueError("cannot shrink a partition")
    while len(words) < n:
        i = min(range(len(words)), key=lambda j: len(words[j]))
        w = words[i]
        words[i:i + 1] = [w + "0", w + "1"]
    return words


def from_cells(dom: Sequence[str], rng: Sequence[str]) -> Element:
    """Element carrying dom[i] onto rng[i]; the two lists partition [0,1]."""
    if len(dom) != len(rng):
        raise DomainError("cell lists differ in length")
    return Element.from_rules(zip(dom, rng))


def pl_map(dom_breaks: Sequence, rng_breaks: Sequence) -> Element:
    """Element of F sending [dom_breaks[i], dom_breaks[i+1]] onto the
    corresponding range segment, order preserving on each piece.
    """
    db = [Dyadic.coerce(x).fraction() for x in dom_breaks]
    rb = [Dyadic.coerce(x).fraction() for x in rng_breaks]
    if len(db) != len(rb) or db[0] != 0 or rb[0] != 0 or db[-1] != 1 or rb[-1] != 1:
        raise DomainError("breakpoints must run from 0 to 1 in equal numbers")
    dom: list[str] = []
    rng: list[str] = []
    for i in range(len(db) - 1):
        if not (db[i] < db[i + 1] and rb[i] < rb[i + 1]):
            raise DomainError("breakpoints must increase strictly")
        dw = words_between(db[i], db[i + 1])
        rw = words_between(rb[i], rb[i + 1])
        n = max(len(dw), len(rw))
        dom += pad_words(dw, n)
        rng += pad_words(rw, n)
    return from_cells(dom, rng)


def rotation(r) -> Element:
    """The circle rotation x -> x + r (mod 1), an element of T."""
    r = Dyadic.coerce(r).fraction() % 1
    if r == 0:
        return IDENTITY
    b = r.denominator.bit_length() - 1
    a = r.numerator
    n = 1 << b
    fmt = lambda i: format(i, "b").zfill(b)
    return Element.from_rules((fmt(i), fmt((i + a) % n)) for i in range(n))


def restrict(g: Element, lo, hi) -> Element:
    """Agree with g on [lo, hi], identity elsewhere.

    g must carry [lo, hi] onto itself.
    """
    lo = Dyadic.coerce(lo).fraction()
    hi = Dyadic.coerce(hi).fraction()
    out: dict[str, str] = {}
    work = list(g.rules)
    while work:
        d, r = work.pop()
        a, b = word_bounds(d)
        if lo <= a and b <= hi:
            out[d] = r
        elif b <= lo or a >= hi:
            out[d] = d
        else:
            work.append((d + "0", r + "0"))
            work.append((d + "1", r + "1"))
    return Element.from_rules(out.items())


def refine(g: Element, min_len: int) -> list[Rule]:
    """Unreduced rules of g with every domain and range word at least min_len long."""
    out = []
    work = list(g.rules)
    while work:
        d, r = work.pop()
        if len(d) >= min_len and len(r) >= min_len:
            out.append((d, r))
        else:
            work.append((d + "0", r + "0"))
            work.append((d + "1", r + "1"))
    return sorted(out)


def random_word(rng, length: int, names: Sequence[str]) -> Word:
    return [(rng.choice(names), rng.choice((1, -1))) for _ in range(length)]


def random_element(rng, cls: ElementClass | str, max_length: int = 10) -> Element:
    cls = ElementClass(cls) if isinstance(cls, str) else cls
    names = {"F": ["A", "B"], "T": ["A", "B", "C"], "V": ["A", "B", "C", "P0"]}[cls.value]
    return eval_word(random_word(rng, rng.randint(0, max_length), names), cls)


def element_dyset(words: Iterable[str], space: Space = Space.CIRCLE) -> DySet:
    return DySet(space, canonical_words(words))


