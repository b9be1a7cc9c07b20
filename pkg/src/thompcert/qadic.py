"""Prefix-replacement groups V_q(G) on the q-adic Cantor space.

An element is a table of rules (w, w', sigma): a point w u is sent to
w' sigma(u), sigma acting letter by letter.  Words are digit strings, so q is
at most 10.  Refining a rule by a letter a gives (w a, w' sigma(a), sigma); the
normal form undoes every such refinement it can.

With q = 2 and trivial twists a word names a standard dyadic interval and a
table is an element of V, which is what ``to_tree``/``from_tree`` exploit.
"""

from __future__ import annotations

import json
import random
import re
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .certificate import VerificationReport
from .elements import Element
from .errors import (
    DomainError,
    ExtendNeeded,
    GroupMembershipError,
    ParseError,
    PreconditionError,
    StructuralError,
)

Perm = tuple[int, ...]


def identity_perm(q: int) -> Perm:
    return tuple(range(q))


def perm_compose(s: Perm, t: Perm) -> Perm:
    """s after t."""
    return tuple(s[t[a]] for a in range(len(t)))


def perm_inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for a, b in enumerate(s):
        out[b] = a
    return tuple(out)


def format_perm(s: Perm) -> str:
    seen = set()
    cycles = []
    for a in range(len(s)):
        if a in seen or s[a] == a:
            continue
        cyc = [a]
        seen.add(a)
        b = s[a]
        while b != a:
            cyc.append(b)
            seen.add(b)
            b = s[b]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "id"


def parse_perm(text: str, q: int) -> Perm:
    text = text.strip()
    if text == "id":
        return identity_perm(q)
    if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\)\s*)+", text):
        raise ParseError(f"bad cycle notation {text!r}")
    img = list(range(q))
    for body in re.findall(r"\(([^)]*)\)", text):
        cyc = [int(t) for t in body.split()]
        if any(a >= q for a in cyc) or len(set(cyc)) != len(cyc):
            raise ParseError(f"bad cycle ({body}) for q = {q}")
        step = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
        # cycles are applied right to left
        img = [step.get(b, b) for b in img]
    return tuple(img)


@dataclass(frozen=True)
class PermGroupSpec:
    q: int
    generators: tuple[Perm, ...] = ()

    def __post_init__(self):
        if self.q < 2 or self.q > 10:
            raise DomainError(f"q must lie in 2..10, got {self.q}")
        for g in self.generators:
            if sorted(g) != list(range(self.q)):
                raise DomainError(f"{g} is not a permutation of 0..{self.q - 1}")

    @classmethod
    def trivial(cls, q: int) -> "PermGroupSpec":
        return cls(q, ())

    @classmethod
    def symmetric(cls, q: int) -> "PermGroupSpec":
        gens = [tuple([1, 0] + list(range(2, q)))]
        if q > 2:
            gens.append(tuple(list(range(1, q)) + [0]))
        return cls(q, tuple(gens))

    @cached_property
    def elements(self) -> frozenset:
        start = identity_perm(self.q)
        seen = {start}
        todo = deque([start])
        while todo:
            p = todo.popleft()
            for g in self.generators:
                n = perm_compose(g, p)
                if n not in seen:
                    seen.add(n)
                    todo.append(n)
        return frozenset(seen)

    def contains(self, s: Perm) -> bool:
        return tuple(s) in self.elements

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1


# -- words and divisions ------------------------------------------------------------

def act(s: Perm, u: str) -> str:
    return "".join(str(s[int(c)]) for c in u)


def kraft_sum(words: Iterable[str], q: int) -> Fraction:
    return sum((Fraction(1, q ** len(w)) for w in words), Fraction(0))


def is_division(words: Sequence[str], q: int) -> bool:
    ws = sorted(words)
    prefix_free = all(not ws[i + 1].startswith(ws[i]) for i in range(len(ws) - 1))
    return prefix_free and kraft_sum(ws, q) == 1


def q_complement(words: Iterable[str], q: int) -> list[str]:
    """Cylinders completing a prefix-free set to a division."""
    words = set(words)
    out: list[str] = []

    def walk(node: str):
        if node in words:
            return
        if not any(w.startswith(node) for w in words):
            out.append(node)
            return
        for a in range(q):
            walk(node + str(a))

    walk("")
    return out


def q_canonical(words: Iterable[str], q: int) -> tuple[str, ...]:
    ws = sorted(set(words))
    kept: list[str] = []
    for w in ws:
        if kept and w.startswith(kept[-1]):
            continue
        kept.append(w)
    cur = set(kept)
    changed = True
    while changed:
        changed = False
        for w in sorted(cur, key=len, reverse=True):
            if not w:
                continue
            fam = {w[:-1] + str(a) for a in range(q)}
            if fam <= cur:
                cur = (cur - fam) | {w[:-1]}
                changed = True
                break
    return tuple(sorted(cur))


def _expand(words: list[str], n: int, q: int) -> list[str]:
    # split the largest, leftmost cell until there are at least n cells
    words = list(words)
    while len(words) < n:
        i = min(range(len(words)), key=lambda j: (len(words[j]), words[j]))
        w = words.pop(i)
        words[i:i] = [w + str(a) for a in range(q)]
    return words


# -- elements -------------------------------------------------------------------------

Rule = tuple[str, str, Perm]


@dataclass(frozen=True)
class QElement:
    q: int
    rules: tuple[Rule, ...]
    group: PermGroupSpec = field(compare=False, default=None)

    def __post_init__(self):
        if self.group is None:
            object.__setattr__(self, "group", PermGroupSpec.trivial(self.q))

    @classmethod
    def identity(cls, group: PermGroupSpec) -> "QElement":
        return cls(group.q, (("", "", identity_perm(group.q)),), group)

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], group: PermGroupSpec,
                   normalize: bool = True) -> "QElement":
        rules = [(d, r, tuple(s)) for d, r, s in rules]
        q = group.q
        for d, r, s in rules:
            if set(d + r) - set("0123456789"[:q]):
                raise DomainError(f"letter outside 0..{q - 1} in {d!r} -> {r!r}")
            if not group.contains(s):
                raise GroupMembershipError(f"twist {format_perm(s)} is not in G")
        if not is_division([d for d, _, _ in rules], q):
            raise DomainError("domain words do not form a division")
        if not is_division([r for _, r, _ in rules], q):
            raise DomainError("range words do not form a division")
        v = cls(q, tuple(sorted(rules)), group)
        return q_normalize(v) if normalize else v

    @property
    def domain_words(self) -> list[str]:
        return [d for d, _, _ in self.rules]

    @property
    def range_words(self) -> list[str]:
        return [r for _, r, _ in self.rules]

    def is_identity(self) -> bool:
        return self.rules == (("", "", identity_perm(self.q)),)

    def __str__(self):
        return format_qelement(self)


def _refine_rule(rule: Rule, q: int) -> list[Rule]:
    d, r, s = rule
    return [(d + str(a), r + str(s[a]), s) for a in range(q)]


def q_normalize(v: QElement) -> QElement:
    q = v.q
    rules = {d: (r, s) for d, r, s in v.rules}
    changed = True
    while changed:
        changed = False
        for d in sorted(rules, key=len, reverse=True):
            if not d or d not in rules:
                continue
            parent = d[:-1]
            kids = [parent + str(a) for a in range(q)]
            if not all(k in rules for k in kids):
                continue
            r0, s = rules[kids[0]]
            stem = r0[:-1]
            if r0 and all(rules[k][1] == s and rules[k][0] == stem + str(s[a])
                          for a, k in enumerate(kids)):
                for k in kids:
                    del rules[k]
                rules[parent] = (stem, s)
                changed = True
    return QElement(q, tuple(sorted((d, r, s) for d, (r, s) in rules.items())), v.group)


def q_apply(v: QElement, u: str) -> str:
    for d, r, s in v.rules:
        if u.startswith(d):
            return r + act(s, u[len(d):])
    raise ExtendNeeded(f"word {u!r} is too short to select a rule")


def _check_same(v1: QElement, v2: QElement):
    if v1.q != v2.q:
        raise DomainError(f"q differs: {v1.q} vs {v2.q}")


def q_compose(v1: QElement, v2: QElement) -> QElement:
    """v1 after v2."""
    _check_same(v1, v2)
    q = v1.q
    table = {d: (r, s) for d, r, s in v1.rules}
    keys = sorted(table)
    out: list[Rule] = []
    for d, r, t in v2.rules:
        hit = False
        for n in range(len(r) + 1):
            p = r[:n]
            if p in table:
                r1, s = table[p]
                out.append((d, r1 + act(s, r[n:]), perm_compose(s, t)))
                hit = True
                break
        if hit:
            continue
        tinv = perm_inverse(t)
        i = bisect_left(keys, r)
        while i < len(keys) and keys[i].startswith(r):
            d1 = keys[i]
            r1, s = table[d1]
            out.append((d + act(tinv, d1[len(r):]), r1, perm_compose(s, t)))
            i += 1
    for _, _, s in out:
        if not v1.group.contains(s):
            raise GroupMembershipError(f"twist {format_perm(s)} escaped G")
    return q_normalize(QElement(q, tuple(out), v1.group))


def q_invert(v: QElement) -> QElement:
    return q_normalize(QElement(v.q, tuple((r, d, perm_inverse(s)) for d, r, s in v.rules), v.group))


def q_product(factors: Sequence[QElement], group: PermGroupSpec) -> QElement:
    out = QElement.identity(group)
    for f in reversed(factors):
        out = q_compose(f, out)
    return out


def q_conjugate(g: QElement, h: QElement) -> QElement:
    return q_compose(g, q_compose(h, q_invert(g)))


def q_equals(v1: QElement, v2: QElement) -> bool:
    return v1.q == v2.q and q_normalize(v1).rules == q_normalize(v2).rules


def _all_words(q: int, n: int) -> Iterable[str]:
    if n == 0:
        yield ""
        return
    for w in _all_words(q, n - 1):
        for a in range(q):
            yield w + str(a)


def q_pointwise_equal(v1: QElement, v2: QElement) -> bool:
    """Compare on every word one letter longer than any domain word."""
    _check_same(v1, v2)
    L = max(len(d) for d in v1.domain_words + v2.domain_words) + 1
    return all(q_apply(v1, u) == q_apply(v2, u) for u in _all_words(v1.q, L))


def q_expand(v: QElement, rng: random.Random, steps: int) -> QElement:
    """Same map, unnormalized: refine randomly chosen rules."""
    rules = list(v.rules)
    for _ in range(steps):
        i = rng.randrange(len(rules))
        rules[i:i + 1] = _refine_rule(rules[i], v.q)
    return QElement(v.q, tuple(sorted(rules)), v.group)


# -- supports -------------------------------------------------------------------------

def q_support_cover(v: QElement) -> list[str]:
    ident = identity_perm(v.q)
    return [d for d, r, s in v.rules if not (d == r and s == ident)]


def q_support_size(v: QElement) -> Fraction:
    return kraft_sum(q_support_cover(v), v.q)


def q_image(v: QElement, words: Iterable[str]) -> tuple[str, ...]:
    out = []
    for w in words:
        for d, r, s in v.rules:
            if w.startswith(d):
                out.append(r + act(s, w[len(d):]))
            elif d.startswith(w):
                out.append(r)
    return q_canonical(out, v.q)


def cylinders_disjoint(A: Iterable[str], B: Iterable[str]) -> bool:
    B = list(B)
    return not any(a.startswith(b) or b.startswith(a) for a in A for b in B)


def strictly_inside(words: Iterable[str], outer: str, q: int) -> bool:
    """Every word extends ``outer`` and avoids both of its end points.

    Under the interval picture the ends of I(outer) are outer 000... and
    outer (q-1)(q-1)(q-1)...
    """
    top = str(q - 1)
    for w in words:
        if not w.startswith(outer) or len(w) == len(outer):
            return False
        tail = w[len(outer):]
        if set(tail) == {"0"} or set(tail) == {top}:
            return False
    return True


# -- text -----------------------------------------------------------------------------

def format_qelement(v: QElement, sep: str = "\n") -> str:
    return sep.join(f"{d or '-'} -> {r or '-'} ; {format_perm(s)}" for d, r, s in v.rules)


_RULE_RE = re.compile(r"^\s*(-|\d+)\s*->\s*(-|\d+)\s*;\s*(.+?)\s*$")


def parse_qelement(text: str, group: PermGroupSpec) -> QElement:
    """One rule per line (or separated by '|'): ``w -> w' ; sigma``."""
    rules = []
    for line in re.split(r"[\n|]", text):
        if not line.strip():
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise ParseError(f"bad rule {line!r}")
        d, r, s = m.groups()
        d = "" if d == "-" else d
        r = "" if r == "-" else r
        rules.append((d, r, parse_perm(s, group.q)))
    if not rules:
        raise ParseError("empty rule table")
    return QElement.from_rules(rules, group)


# -- bridge to tree pairs --------------------------------------------------------------

def from_tree(g: Element) -> QElement:
    return QElement.from_rules([(d, r, (0, 1)) for d, r in g.rules], PermGroupSpec.trivial(2))


def to_tree(v: QElement) -> Element:
    if v.q != 2:
        raise DomainError("only q = 2 tables are tree pairs")
    if any(s != (0, 1) for _, _, s in v.rules):
        raise GroupMembershipError("nontrivial twist has no tree-pair form")
    return Element.from_rules((d, r) for d, r, _ in v.rules)


# -- random elements ------------------------------------------------------------------

def random_division(rng: random.Random, q: int, expansions: int) -> list[str]:
    words = [""]
    for _ in range(expansions):
        i = rng.randrange(len(words))
        w = words.pop(i)
        words[i:i] = [w + str(a) for a in range(q)]
    return words


def random_qelement(rng: random.Random, group: PermGroupSpec, max_expansions: int = 4) -> QElement:
    n = rng.randint(0, max_expansions)
    dom = random_division(rng, group.q, n)
    rng_words = random_division(rng, group.q, n)
    rng.shuffle(rng_words)
    twists = sorted(group.elements)
    return QElement.from_rules(
        [(d, r, rng.choice(twists)) for d, r in zip(dom, rng_words)], group)


# -- small-support factors ------------------------------------------------------------

def _depth_for(eps: Fraction, q: int) -> int:
    n = 0
    while Fraction(2, q ** n) >= eps:
        n += 1
    return n


def _refine_to(v: QElement, n: int) -> list[Rule]:
    out = []
    work = list(v.rules)
    while work:
        rule = work.pop()
        if len(rule[0]) >= n and len(rule[1]) >= n:
            out.append(rule)
        else:
            work.extend(_refine_rule(rule, v.q))
    return sorted(out)


def _block_map(dom: Sequence[str], rng: Sequence[str], group: PermGroupSpec) -> QElement:
    """Trivial-twist element sending dom[i] to rng[i], identity off their union."""
    ident = identity_perm(group.q)
    rest = q_complement(dom, group.q)
    rest_r = q_complement(rng, group.q)
    if q_canonical(rest, group.q) != q_canonical(rest_r, group.q):
        raise DomainError("block map must fix the complement")
    rules = [(d, r, ident) for d, r in zip(dom, rng)] + [(w, w, ident) for w in rest]
    return QElement.from_rules(rules, group)


def q_decompose_small(v: QElement, eps) -> list[QElement]:
    """Factors (rightmost first) of support size < eps whose product is v.

    Refine until all cells are short, peel off one twist per domain cell, then
    balance how many cells each level-n cylinder holds by transfers between two
    cylinders, and finish with order-preserving maps inside each cylinder and
    cell exchanges.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    group, q = v.group, v.q
    if v.is_identity():
        return []
    if q_support_size(v) < eps:
        return [v]
    n = _depth_for(eps, q)
    ident = identity_perm(q)
    rules = _refine_to(v, n)
    twists = [QElement.from_rules([(d, d, s)] + [(w, w, ident) for w in q_complement([d], q)], group)
              for d, _, s in rules if s != ident]
    pairs = [(d, r) for d, r, _ in rules]

    def buckets(words):
        out: dict[str, list[str]] = {}
        for w in words:
            out.setdefault(w[:n], []).append(w)
        return out

    # transfers: reshape the domain division until each level-n cylinder
    # holds as many domain cells as range cells
    cur = buckets(d for d, _ in pairs)
    want = buckets(r for _, r in pairs)
    transfers: list[QElement] = []
    cell_map = {d: d for d, _ in pairs}
    while True:
        over = [c for c in sorted(cur) if len(cur[c]) > len(want.get(c, []))]
        under = [c for c in sorted(set(cur) | set(want))
                 if len(cur.get(c, [])) < len(want.get(c, []))]
        if not over:
            break
        a, b = under[0], over[0]
        src = cur[a] + cur[b]
        new_a = _expand([a], len(cur[a]) + q - 1, q)
        new_b = _coarsen(b, len(cur[b]) - (q - 1), q)
        dst = new_a + new_b
        step = _block_map(src, dst, group)
        transfers.append(step)
        moved = dict(zip(src, dst))
        cell_map = {d: moved.get(c, c) for d, c in cell_map.items()}
        cur[a], cur[b] = new_a, new_b

    # now each cylinder holds matching counts; order-preserving local maps
    # finish the job after a permutation of cells
    inv_cells = {c: d for d, c in cell_map.items()}
    target_of = dict(pairs)
    local_dom, local_rng = [], []
    for c in sorted(cur):
        local_dom += sorted(cur[c])
        local_rng += sorted(want[c])
    back = dict(zip(local_rng, local_dom))
    perm = {c: back[target_of[inv_cells[c]]] for c in local_dom}
    exchanges = []
    seen = set()
    for start in local_dom:
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        # (c1 c2 ... cm) = (c1 c2)(c2 c3)...(c_{m-1} c_m)
        exchanges += [_block_map([x, y], [y, x], group) for x, y in zip(cyc, cyc[1:])]
    locals_ = [_block_map(sorted(cur[c]), sorted(want[c]), group)
               for c in sorted(cur) if sorted(cur[c]) != sorted(want[c])]
    factors = locals_ + exchanges + transfers[::-1] + twists
    return [f for f in factors if not f.is_identity()]


def _coarsen(c: str, count: int, q: int) -> list[str]:
    """A division of cylinder c into exactly ``count`` cells."""
    return _expand([c], count, q)


# -- cylinder certificates ------------------------------------------------------------

Q_CITATION = "V_q(G) is finitely generated and virtually simple (Nekrashevych; Farley-Hughes)"


@dataclass
class QCertificate:
    group: PermGroupSpec
    k: int
    s: QElement
    g0: QElement
    chain: list[str]
    witnesses: list[QElement]
    facts: list[dict]
    factors: list[tuple[QElement, QElement]] = field(default_factory=list)


def q_chain(k: int) -> list[str]:
    """w_i = (01)^(k+1-i); the q = 2 picture is the interval chain of the tree pipeline."""
    return ["01" * (k + 1 - i) for i in range(k + 2)]


def q_witness(outer: str, group: PermGroupSpec) -> QElement:
    """Three-cycle of cylinders moving outer+01 onto outer+101."""
    a, b, c = outer + "01", outer + "101", outer + "100"
    return _block_map([a, b, c], [b, c, a], group)


def q_shift(group: PermGroupSpec) -> QElement:
    """First letter a -> a+1 mod q; moves every point."""
    q = group.q
    ident = identity_perm(q)
    return QElement.from_rules([(str(a), str((a + 1) % q), ident) for a in range(q)], group)


def q_conjugator(s: QElement, target: str) -> QElement:
    """Trivial-twist element carrying the support cover of s into cylinder target."""
    q, group = s.q, s.group
    cover = list(q_canonical(q_support_cover(s), q))
    if cover == [""]:
        raise PreconditionError("support cover is all of C_q; decompose first")
    if not cover:
        return QElement.identity(group)
    inside = _expand([target], len(cover), q)
    slots, spare = inside[:len(cover)], inside[len(cover):]
    dom = cover + q_complement(cover, q)
    rng = slots + spare + q_complement([target], q)
    if len(dom) < len(rng):
        dom = cover + _expand(dom[len(cover):], len(rng) - len(cover), q)
    else:
        rng = slots + _expand(rng[len(slots):], len(dom) - len(slots), q)
    ident = identity_perm(q)
    return QElement.from_rules([(d, r, ident) for d, r in zip(dom, rng)], group)


def q_build_certificate(s: QElement, k: int) -> QCertificate:
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    group = s.group
    chain = q_chain(k)
    witnesses = [q_witness(chain[i + 1], group) for i in range(1, k + 1)]
    facts = [{"claim": f"H{i}: every homomorphism from H{i} to R is trivial",
              "citation": Q_CITATION} for i in range(1, k + 1)]
    target = chain[0] + "01"
    if q_canonical(q_support_cover(s), s.q) != ("",):
        return QCertificate(group, k, s, q_conjugator(s, target), chain, witnesses, facts)
    pieces = q_decompose_small(s, Fraction(1, k + 1))
    factors = [(f, q_conjugator(f, target)) for f in pieces]
    return QCertificate(group, k, s, QElement.identity(group), chain, witnesses, facts, factors)


def q_verify_certificate(c: QCertificate) -> VerificationReport:
    k, q = c.k, c.group.q
    if not isinstance(k, int) or k < 1 or len(c.chain) != k + 2 or len(c.witnesses) != k:
        raise StructuralError("chain or witness count does not match k")
    chain = c.chain
    checks: list[tuple[str, bool, str]] = []

    bad = [i for i in range(k + 1) if not strictly_inside([chain[i]], chain[i + 1], q)]
    if chain[-1] != "":
        bad.append(k + 1)
    checks.append(("V0", not bad, f"not strictly nested at index {bad}" if bad else ""))

    seeds = c.factors if c.factors else [(c.s, c.g0)]
    bad = [j for j, (s, g0) in enumerate(seeds)
           if not strictly_inside(q_support_cover(q_conjugate(g0, s)), chain[0], q)]
    checks.append(("V1", not bad, f"conjugated seed escapes I(w_0) for factor {bad}" if bad else ""))

    bad = [i + 1 for i, g in enumerate(c.witnesses)
           if not strictly_inside(q_support_cover(g), chain[i + 2], q)]
    checks.append(("V2", not bad, f"witness not inside I(w_(i+1)) for i in {bad}" if bad else ""))

    bad = [i for i, g in enumerate(c.witnesses, start=1)
           if not cylinders_disjoint(q_image(g, [chain[i]]), [chain[i]])]
    checks.append(("V3", not bad, f"witness fails to displace I(w_i) for i in {bad}" if bad else ""))

    missing = [i for i in range(1, k + 1)
               if not any(str(f.get("claim", "")).startswith(f"H{i}:") and f.get("citation")
                          for f in c.facts)]
    checks.append(("V4", not missing, f"no citation for H_i, i in {missing}" if missing else ""))

    if c.factors:
        ok = q_equals(q_product([s for s, _ in c.factors], c.group), c.s)
        checks.append(("V5", ok, "" if ok else "factors do not multiply to s"))
    return VerificationReport(checks, list(c.facts))


def _rules_list(v: QElement) -> list[str]:
    return format_qelement(v).split("\n")


def q_certificate_to_json(c: QCertificate) -> str:
    out = {
        "class": "Vq",
        "k": c.k,
        "s": _rules_list(c.s),
        "g0": _rules_list(c.g0),
        "chain": [w or "-" for w in c.chain],
        "witnesses": [_rules_list(g) for g in c.witnesses],
        "facts": [{"claim": f.get("claim"), "citation": f.get("citation")} for f in c.facts],
        "q": c.group.q,
        "group": [format_perm(g) for g in c.group.generators],
    }
    if c.factors:
        out["factors"] = [{"s": _rules_list(s), "g0": _rules_list(g0)} for s, g0 in c.factors]
    return json.dumps(out, indent=2) + "\n"


def q_certificate_from_json(text: str) -> QCertificate:
    try:
        d = json.loads(text)
        q = d["q"]
        group = PermGroupSpec(q, tuple(parse_perm(g, q) for g in d["group"]))
        load = lambda lines: parse_qelement("\n".join(lines), group)
        return QCertificate(
            group=group,
            k=d["k"],
            s=load(d["s"]),
            g0=load(d["g0"]),
            chain=["" if w == "-" else w for w in d["chain"]],
            witnesses=[load(g) for g in d["witnesses"]],
            facts=[dict(f) for f in d["facts"]],
            factors=[(load(f["s"]), load(f["g0"])) for f in d.get("factors", [])],
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise StructuralError(f"malformed q-adic certificate: {exc}") from exc


def q_mutate(c: QCertificate, kind: str) -> Optional[QCertificate]:
    from dataclasses import replace

    shift = q_shift(c.group)
    ident = QElement.identity(c.group)
    if kind == "identity_witness":
        return replace(c, witnesses=[ident] + c.witnesses[1:])
    if kind == "shifted_chain":
        return replace(c, chain=[c.chain[1]] + c.chain[1:])
    if kind == "swapped_intervals":
        return replace(c, chain=[c.chain[1], c.chain[0]] + c.chain[2:])
    if kind == "dropped_fact":
        return replace(c, facts=[f for f in c.facts if not f["claim"].startswith("H1:")])
    if kind == "displaced_conjugator":
        if c.factors:
            s, g0 = c.factors[0]
            return replace(c, factors=[(s, q_compose(shift, g0))] + c.factors[1:])
        if c.s.is_identity():
            return None  # any conjugator works for the identity
        return replace(c, g0=q_compose(shift, c.g0))
    if kind == "escaped_witness":
        return replace(c, witnesses=[shift] + c.witnesses[1:])
    if kind == "wrong_seed":
        return replace(c, s=q_compose(shift, c.s))
    if kind == "tampered_factor":
        if not c.factors:
            return None
        s, g0 = c.factors[0]
        return replace(c, factors=[(q_compose(shift, s), g0)] + c.factors[1:])
    raise PreconditionError(f"unknown mutation {kind!r}")


def to_tree_certificate(c: QCertificate):
    """The same certificate read through the q = 2 identification."""
    from .certificate import FixpointCertificate, Seed
    from .dyadic import StdInterval

    return FixpointCertificate(
        cls="V",
        k=c.k,
        s=to_tree(c.s),
        g0=to_tree(c.g0),
        chain=[StdInterval.from_word(w) for w in c.chain],
        witnesses=[to_tree(g) for g in c.witnesses],
        facts=list(c.facts),
        factors=[Seed(to_tree(s), to_tree(g0)) for s, g0 in c.factors],
    )


def cross_check(c: QCertificate) -> bool:
    """Check-for-check agreement with the tree-pair verifier (q = 2, trivial G)."""
    from .certificate import verify_certificate

    mine = [(name, ok) for name, ok, _ in q_verify_certificate(c).checks]
    theirs = [(name, ok) for name, ok, _ in verify_certificate(to_tree_certificate(c)).checks]
    return mine == theirs
