"""Sweep factor counts of decompose_small over random elements.

    python3 scripts/decomposition_sizes.py --samples 40 --max-len 10
"""

import argparse
import random
import statistics
import time
from dataclasses import dataclass, field

from thompcert.dyadic import Dyadic
from thompcert.elements import equals, random_element
from thompcert.small_support import decompose_small
from thompcert.support import support_size


@dataclass
class SweepConfig:
    samples: int = 40
    max_len: int = 10
    seed: int = 0
    classes: tuple = ("F", "T", "V")
    exponents: tuple = (2, 3, 4)
    results: list = field(default_factory=list)


def run(cfg: SweepConfig) -> list:
    rng = random.Random(cfg.seed)
    rows = []
    for cls in cfg.classes:
        gs = [random_element(rng, cls, cfg.max_len) for _ in range(cfg.samples)]
        for b in cfg.exponents:
            eps = Dyadic(1, b)
            t0 = time.perf_counter()
            counts = []
            for g in gs:
                fl = decompose_small(g, eps)
                assert equals(fl.product(), g)
                assert all(support_size(f) < eps for f in fl.factors)
                counts.append(len(fl.factors))
            rows.append((cls, f"1/2^{b}", statistics.mean(counts), max(counts),
                         time.perf_counter() - t0))
    cfg.results = rows
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--max-len", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = SweepConfig(samples=a.samples, max_len=a.max_len, seed=a.seed)
    print(f"{'class':<6}{'eps':<8}{'mean':>8}{'max':>6}{'secs':>8}")
    for cls, eps, mean, mx, secs in run(cfg):
        print(f"{cls:<6}{eps:<8}{mean:>8.1f}{mx:>6}{secs:>8.2f}")


if __name__ == "__main__":
    main()
