"""Time certificate construction and verification, and tally mutation verdicts.

    python3 scripts/certificate_timing.py --samples 20 --k 1 2 3 4
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from thompcert.certificate import MUTATIONS, build_certificate, mutate, verify_certificate
from thompcert.elements import random_element
from thompcert.qadic import PermGroupSpec, q_build_certificate, q_verify_certificate, random_qelement


@dataclass(frozen=True)
class TimingConfig:
    samples: int = 20
    ks: tuple = (1, 2, 3)
    max_len: int = 10
    seed: int = 0


def tree_timings(cfg: TimingConfig):
    rng = random.Random(cfg.seed)
    for cls in ("T", "V"):
        seeds = [random_element(rng, cls, cfg.max_len) for _ in range(cfg.samples)]
        for k in cfg.ks:
            t0 = time.perf_counter()
            certs = [build_certificate(s, k) for s in seeds]
            t1 = time.perf_counter()
            ok = sum(verify_certificate(c).overall for c in certs)
            t2 = time.perf_counter()
            composite = sum(c.composite for c in certs)
            yield cls, k, ok, len(certs), composite, t1 - t0, t2 - t1


def q_timings(cfg: TimingConfig):
    rng = random.Random(cfg.seed)
    for group in (PermGroupSpec.trivial(2), PermGroupSpec.symmetric(3)):
        for k in cfg.ks:
            t0 = time.perf_counter()
            certs = [q_build_certificate(random_qelement(rng, group), k) for _ in range(cfg.samples)]
            ok = sum(q_verify_certificate(c).overall for c in certs)
            yield group.q, len(group.elements), k, ok, len(certs), time.perf_counter() - t0


def mutation_tally(cfg: TimingConfig) -> Counter:
    rng = random.Random(cfg.seed + 1)
    tally = Counter()
    for _ in range(cfg.samples):
        c = build_certificate(random_element(rng, rng.choice("TV"), cfg.max_len), 2)
        for kind in MUTATIONS:
            bad = mutate(c, kind)
            if bad is not None:
                for name in verify_certificate(bad).failing():
                    tally[kind, name] += 1
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = TimingConfig(samples=a.samples, ks=tuple(a.k), seed=a.seed)
    print("tree certificates: class k verified composite build_s verify_s")
    for cls, k, ok, n, comp, tb, tv in tree_timings(cfg):
        print(f"  {cls} {k} {ok}/{n} {comp} {tb:.2f} {tv:.2f}")
    print("q-adic certificates: q |G| k verified secs")
    for q, order, k, ok, n, secs in q_timings(cfg):
        print(f"  {q} {order} {k} {ok}/{n} {secs:.2f}")
    print("mutation -> failing check counts")
    for (kind, check), count in sorted(mutation_tally(cfg).items()):
        print(f"  {kind:<22}{check:<4}{count}")


if __name__ == "__main__":
    main()
