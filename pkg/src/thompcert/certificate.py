"""Fixed-point certificates and commuting-family certificates.

A fixed-point certificate for a seed s and dimension bound k records

* a chain of standard intervals I_0 < I_1 < ... < I_k < I_{k+1} = [0,1],
  each inside the interior of the next;
* a conjugator g0 pushing the support of s into the interior of I_0;
* witnesses g_1..g_k, g_i supported inside Int(I_{i+1}) and moving I_i off
  itself;
* citations for the facts that are not checked here (simplicity of the
  relevant commutator subgroups and the fixed-point criterion itself).

Everything about intervals and elements is checked exactly by
``verify_certificate``; nothing about CAT(0) spaces is.

Seeds whose support cover is the whole circle cannot be pushed anywhere.  For
those the builder writes s as a product of small-support factors and stores
one conjugator per factor ("composite" certificates, check V5).
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from .dyadic import (
    Dyadic,
    DySet,
    Space,
    StdInterval,
    complement_words,
    inside_interior,
    is_subset,
    parse_dyset,
    parse_interval,
    sets_disjoint,
    word_bounds,
)
from .elements import (
    IDENTITY,
    Element,
    ElementClass,
    class_of,
    commutator,
    compose,
    conjugate,
    equals,
    format_element,
    image_of,
    invert,
    parse_element,
    product,
    rotation,
)
from .errors import BuildError, PreconditionError, StructuralError
from .small_support import decompose_small
from .support import support_cover, support_cover_of_set
from .transporter import identity_near_boundary, shrink_into, shrink_within


class Template(enum.Enum):
    WHOLE_GROUP = "WHOLE_GROUP"
    INTERVAL_COPY = "INTERVAL_COPY"
    COMMUTATOR_OF_INTERVAL_COPY = "COMMUTATOR_OF_INTERVAL_COPY"
    CYCLIC = "CYCLIC"


@dataclass(frozen=True)
class SubgroupDescriptor:
    template: Template
    cls: str
    interval: Optional[StdInterval] = None
    element: Optional[Element] = None

    def to_dict(self) -> dict:
        out = {"template": self.template.value, "class": self.cls}
        if self.interval is not None:
            out["interval"] = str(self.interval)
        if self.element is not None:
            out["element"] = format_element(self.element)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SubgroupDescriptor":
        try:
            template = Template(d["template"])
            interval = parse_interval(d["interval"]) if "interval" in d else None
            element = parse_element(d["element"]) if "element" in d else None
            return cls(template, d["class"], interval, element)
        except (KeyError, ValueError) as exc:
            raise StructuralError(f"bad subgroup descriptor {d!r}: {exc}") from exc


@dataclass(frozen=True)
class Seed:
    s: Element
    g0: Element


@dataclass
class FixpointCertificate:
    cls: str
    k: int
    s: Element
    g0: Element
    chain: list[StdInterval]
    witnesses: list[Element]
    facts: list[dict]
    subgroups: list[SubgroupDescriptor] = field(default_factory=list)
    factors: list[Seed] = field(default_factory=list)

    @property
    def composite(self) -> bool:
        return bool(self.factors)


@dataclass
class CommutingFamilyCertificate:
    cls: str
    k: int
    S: list[Element]
    opens: list[DySet]
    movers: list[Element]
    seed: int = 0


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]]
    assumed_facts: list[dict] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failing(self) -> list[str]:
        return sorted({name for name, ok, _ in self.checks if not ok})

    def lines(self) -> list[str]:
        out = [f"{name}: {'pass' if ok else 'FAIL'}{' - ' + detail if detail else ''}"
               for name, ok, detail in self.checks]
        out.append(f"overall: {'pass' if self.overall else 'FAIL'}")
        return out


# -- facts ----------------------------------------------------------------------------

_CITATIONS = {
    "F": "the commutator subgroup [F,F] is simple (Cannon-Floyd-Parry); an element of F^I "
         "lies in [F^I,F^I] iff it is the identity near both ends of I",
    "T": "the commutator subgroup [F,F] is simple (Cannon-Floyd-Parry); an element of F^I "
         "lies in [F^I,F^I] iff it is the identity near both ends of I",
    "V": "V^I is isomorphic to V, which is simple (Higman, Cannon-Floyd-Parry)",
}

CHAIN_FACT = {
    "claim": "chain: conditions (i) and (ii) along H_0 < ... < H_{k+1} give s a fixed point "
             "for every semi-simple action on a complete CAT(0) space of dimension k",
    "citation": "fixed-point criterion for chains of subgroups (assumed, not checked)",
}

PRODUCT_FACT = {
    "claim": "product: if every factor has a fixed point and factors have supports of size "
             "below 1/(k+1), the factors have a common fixed point, which s fixes",
    "citation": "Bridson, semisimple actions of mapping class groups on CAT(0) spaces "
                "(commuting-family fixed-point theorem)",
}


def subgroup_fact(i: int, cls: str) -> dict:
    return {
        "claim": f"H{i}: every homomorphism from H{i} to R is trivial",
        "citation": _CITATIONS[cls],
    }


# -- chain ---------------------------------------------------------------------------

def canonical_chain(k: int) -> list[StdInterval]:
    """I_{k+1} = [0,1]; each I_i is the second quarter of I_{i+1}."""
    words = [""]
    for _ in range(k + 1):
        words.append(words[-1] + "01")
    return [StdInterval.from_word(w) for w in reversed(words)]


def displacement_target(outer: StdInterval) -> StdInterval:
    """Fourth quarter of ``outer``: disjoint from its second quarter, endpoints included."""
    return StdInterval.from_word(outer.word + "11")


@lru_cache(maxsize=None)
def _witnesses(k: int, cls: str) -> tuple[Element, ...]:
    chain = canonical_chain(k)
    out = []
    for i in range(1, k + 1):
        inner, outer = chain[i], chain[i + 1]
        out.append(shrink_within(cls, outer, DySet.of([inner], Space.CIRCLE),
                                 DySet.of([displacement_target(outer)], Space.CIRCLE)))
    return tuple(out)


def _excluded_point(cover: DySet) -> Fraction:
    rest = complement_words(cover.words)
    lo, hi = word_bounds(rest[0])
    return (lo + hi) / 2


def _conjugator(s: Element, cls: str, I0: StdInterval) -> Element:
    cover = support_cover(s)
    if cover.is_whole():
        raise BuildError(f"support cover of {s} is the whole circle")
    target = DySet.of([I0.word + "01"], Space.CIRCLE)
    return shrink_into(cls, cover, target, _excluded_point(cover))


def _seed_class(s: Element, cls: Optional[str]) -> str:
    if cls is None:
        cls = "V" if class_of(s) is ElementClass.V else "T"
    if cls not in ("T", "V"):
        raise PreconditionError(f"certificates are built over T or V, not {cls}")
    if not ElementClass(cls).contains(class_of(s)):
        raise PreconditionError(f"seed is not an element of {cls}")
    return cls


def composite_eps(k: int) -> Dyadic:
    """Largest power of 1/2 not exceeding 1/(k+1)."""
    b = 0
    while (1 << b) < k + 1:
        b += 1
    return Dyadic(1, b)


def build_certificate(s: Element, k: int, cls: Optional[str] = None) -> FixpointCertificate:
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    cls = _seed_class(s, cls)
    chain = canonical_chain(k)
    witnesses = list(_witnesses(k, cls))
    subgroups = [SubgroupDescriptor(Template.COMMUTATOR_OF_INTERVAL_COPY, cls, chain[i])
                 for i in range(1, k + 1)]
    facts = [subgroup_fact(i, cls) for i in range(1, k + 1)] + [dict(CHAIN_FACT)]
    if not support_cover(s).is_whole():
        g0 = _conjugator(s, cls, chain[0])
        return FixpointCertificate(cls, k, s, g0, chain, witnesses, facts, subgroups)
    pieces = decompose_small(s, composite_eps(k)).factors
    factors = [Seed(f, _conjugator(f, cls, chain[0])) for f in pieces]
    facts.append(dict(PRODUCT_FACT))
    return FixpointCertificate(cls, k, s, IDENTITY, chain, witnesses, facts, subgroups, factors)


def _interior(A: DySet, I: StdInterval) -> bool:
    return inside_interior(DySet(Space.LINE, A.words), I)


def verify_certificate(c: FixpointCertificate) -> VerificationReport:
    k = c.k
    if not isinstance(k, int) or k < 1:
        raise StructuralError(f"k must be a positive integer, got {k!r}")
    if len(c.chain) != k + 2:
        raise StructuralError(f"chain has {len(c.chain)} intervals, expected {k + 2}")
    if len(c.witnesses) != k:
        raise StructuralError(f"{len(c.witnesses)} witnesses, expected {k}")
    if c.subgroups and len(c.subgroups) != k:
        raise StructuralError(f"{len(c.subgroups)} subgroups, expected {k}")
    checks: list[tuple[str, bool, str]] = []
    chain = c.chain

    bad = [i for i in range(k + 1) if not _interior(DySet.of([chain[i]], Space.LINE), chain[i + 1])]
    if chain[-1].b != 0:
        bad.append(k + 1)
    checks.append(("V0", not bad, f"not strictly nested at index {bad}" if bad else ""))

    seeds = c.factors if c.factors else [Seed(c.s, c.g0)]
    bad = [j for j, seed in enumerate(seeds)
           if not _interior(support_cover(conjugate(seed.g0, seed.s)), chain[0])]
    checks.append(("V1", not bad, f"conjugated seed escapes Int(I_0) for factor {bad}" if bad else ""))

    bad = [i + 1 for i, g in enumerate(c.witnesses) if not identity_near_boundary(g, chain[i + 2])]
    checks.append(("V2", not bad, f"witness not the identity near the ends of I_(i+1) for i in {bad}"
                   if bad else ""))

    bad = []
    for i, g in enumerate(c.witnesses, start=1):
        I = DySet.of([chain[i]], Space.CIRCLE)
        if not sets_disjoint(image_of(g, I), I):
            bad.append(i)
    checks.append(("V3", not bad, f"witness fails to displace I_i for i in {bad}" if bad else ""))

    missing = []
    for i in range(1, k + 1):
        if c.subgroups:
            d = c.subgroups[i - 1]
            if d.template is not Template.COMMUTATOR_OF_INTERVAL_COPY or d.interval != chain[i]:
                missing.append(i)
                continue
        if not any(str(f.get("claim", "")).startswith(f"H{i}:") and f.get("citation")
                   for f in c.facts):
            missing.append(i)
    checks.append(("V4", not missing, f"no accepted citation for H_i, i in {missing}"
                   if missing else ""))

    if c.factors:
        ok = equals(product([seed.s for seed in c.factors]), c.s)
        checks.append(("V5", ok, "" if ok else "factors do not multiply to s"))
    return VerificationReport(checks, list(c.facts))


# -- JSON -----------------------------------------------------------------------------

def certificate_to_dict(c: FixpointCertificate) -> dict:
    out = {
        "class": c.cls,
        "k": c.k,
        "s": format_element(c.s),
        "g0": format_element(c.g0),
        "chain": [str(I) for I in c.chain],
        "witnesses": [format_element(g) for g in c.witnesses],
        "facts": [{"claim": f.get("claim"), "citation": f.get("citation")} for f in c.facts],
        "subgroups": [d.to_dict() for d in c.subgroups],
    }
    if c.factors:
        out["factors"] = [{"s": format_element(f.s), "g0": format_element(f.g0)} for f in c.factors]
    return out


def certificate_to_json(c: FixpointCertificate) -> str:
    return json.dumps(certificate_to_dict(c), indent=2) + "\n"


def certificate_from_dict(d: dict) -> FixpointCertificate:
    try:
        return FixpointCertificate(
            cls=d["class"],
            k=d["k"],
            s=parse_element(d["s"]),
            g0=parse_element(d["g0"]),
            chain=[parse_interval(t) for t in d["chain"]],
            witnesses=[parse_element(t) for t in d["witnesses"]],
            facts=[dict(f) for f in d["facts"]],
            subgroups=[SubgroupDescriptor.from_dict(x) for x in d.get("subgroups", [])],
            factors=[Seed(parse_element(f["s"]), parse_element(f["g0"]))
                     for f in d.get("factors", [])],
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise StructuralError(f"malformed certificate: {exc}") from exc


def certificate_from_json(text: str) -> FixpointCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"certificate is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise StructuralError("certificate must be a JSON object")
    return certificate_from_dict(data)


# -- mutations ------------------------------------------------------------------------

HALF_TURN = rotation(Fraction(1, 2))


def _m_identity_witness(c):
    return replace(c, witnesses=[IDENTITY] + c.witnesses[1:])


def _m_shifted_chain(c):
    return replace(c, chain=[c.chain[1]] + c.chain[1:])


def _m_swapped_intervals(c):
    return replace(c, chain=[c.chain[1], c.chain[0]] + c.chain[2:])


def _m_dropped_fact(c):
    return replace(c, facts=[f for f in c.facts if not str(f.get("claim", "")).startswith("H1:")])


def _m_displaced_conjugator(c):
    if c.factors:
        first = c.factors[0]
        moved = Seed(first.s, compose(HALF_TURN, first.g0))
        return replace(c, factors=[moved] + c.factors[1:])
    if c.s.is_identity():
        return None  # any conjugator works for the identity
    return replace(c, g0=compose(HALF_TURN, c.g0))


def _m_escaped_witness(c):
    return replace(c, witnesses=[HALF_TURN] + c.witnesses[1:])


def _m_wrong_seed(c):
    return replace(c, s=compose(HALF_TURN, c.s))


def _m_tampered_factor(c):
    if not c.factors:
        return None
    first = c.factors[0]
    return replace(c, factors=[Seed(compose(HALF_TURN, first.s), first.g0)] + c.factors[1:])


MUTATIONS = {
    "identity_witness": _m_identity_witness,
    "shifted_chain": _m_shifted_chain,
    "swapped_intervals": _m_swapped_intervals,
    "dropped_fact": _m_dropped_fact,
    "displaced_conjugator": _m_displaced_conjugator,
    "escaped_witness": _m_escaped_witness,
    "wrong_seed": _m_wrong_seed,
    "tampered_factor": _m_tampered_factor,
}

# check expected to catch each mutation on a plain (non-composite) certificate
EXPECTED_FAILURE = {
    "identity_witness": "V3",
    "shifted_chain": "V0",
    "swapped_intervals": "V0",
    "dropped_fact": "V4",
    "displaced_conjugator": "V1",
    "escaped_witness": "V2",
    "wrong_seed": "V1",
    "tampered_factor": "V5",
}


def mutate(c: FixpointCertificate, kind: str) -> Optional[FixpointCertificate]:
    """Single-field corruption of c; None when the kind does not apply."""
    try:
        return MUTATIONS[kind](c)
    except KeyError:
        raise PreconditionError(f"unknown mutation {kind!r}") from None


# -- commuting families ---------------------------------------------------------------

def disjoint_slots(count: int) -> list[DySet]:
    """Closed-disjoint standard intervals [2(i-1)/2^b, (2i-1)/2^b], i = 1..count."""
    b = 0
    while (1 << b) < 2 * count:
        b += 1
    return [DySet.of([format(2 * i, "b").zfill(b)], Space.CIRCLE) for i in range(count)]


def _family_class(S: Sequence[Element]) -> str:
    return "V" if any(class_of(s) is ElementClass.V for s in S) else "T"


def build_commuting_family(S: Sequence[Element], k: int, seed: int = 0) -> CommutingFamilyCertificate:
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    S = list(S)
    cls = _family_class(S)
    cover = support_cover_of_set(S)
    if cover.is_whole():
        raise PreconditionError("support of S covers the circle; decompose into small-support "
                                "factors first")
    opens = disjoint_slots(k + 1)
    if cover.is_empty():
        movers = [IDENTITY] * (k + 1)
    else:
        x = _excluded_point(cover)
        movers = [shrink_into(cls, cover, J, x) for J in opens]
    return CommutingFamilyCertificate(cls, k, S, opens, movers, seed)


def verify_commuting_family(c: CommutingFamilyCertificate, samples: int = 24) -> VerificationReport:
    checks: list[tuple[str, bool, str]] = []
    bad = [(i + 1, j + 1) for i, j in combinations(range(len(c.opens)), 2)
           if not sets_disjoint(c.opens[i], c.opens[j])]
    checks.append(("W1", not bad, f"overlapping opens {bad}" if bad else ""))

    cover = support_cover_of_set(c.S)
    bad = [i + 1 for i, (f, J) in enumerate(zip(c.movers, c.opens))
           if not is_subset(image_of(f, cover), J)]
    if len(c.movers) != len(c.opens):
        bad.append("count")
    checks.append(("W2", not bad, f"cover not carried into J_i for i in {bad}" if bad else ""))

    rng = random.Random(c.seed)
    bad = []
    if c.S and len(c.movers) > 1:
        for _ in range(samples):
            s, t = rng.choice(c.S), rng.choice(c.S)
            i, j = rng.sample(range(len(c.movers)), 2)
            a = conjugate(c.movers[i], s)
            b = conjugate(c.movers[j], t)
            if not commutator(a, b).is_identity():
                bad.append((i + 1, j + 1))
    checks.append(("W3", not bad, f"conjugates fail to commute for {bad}" if bad else ""))
    return VerificationReport(checks)


def family_to_dict(c: CommutingFamilyCertificate) -> dict:
    return {
        "class": c.cls,
        "k": c.k,
        "S": [format_element(s) for s in c.S],
        "opens": [str(J) for J in c.opens],
        "movers": [format_element(f) for f in c.movers],
        "seed": c.seed,
    }


def family_to_json(c: CommutingFamilyCertificate) -> str:
    return json.dumps(family_to_dict(c), indent=2) + "\n"


def family_from_json(text: str) -> CommutingFamilyCertificate:
    try:
        d = json.loads(text)
        return CommutingFamilyCertificate(
            cls=d["class"],
            k=d["k"],
            S=[parse_element(t) for t in d["S"]],
            opens=[parse_dyset(t, Space.CIRCLE) for t in d["opens"]],
            movers=[parse_element(t) for t in d["movers"]],
            seed=d.get("seed", 0),
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise StructuralError(f"malformed commuting family: {exc}") from exc
