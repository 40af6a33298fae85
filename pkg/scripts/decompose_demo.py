"""Decompose random logarithmic HS-derivations and report certificate stats."""
import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from hsder.decompose import decompose_char_p
from hsder.hs import order
from hsder.sampling import random_log_hs, standard_ideals
from hsder.textio import format_derivation


@dataclass
class Config:
    p: int = 2
    cases: int = 20
    seed: int = 0
    show: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name}", type=int, default=default)
    cfg = Config(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    _, ideals = standard_ideals(cfg.p)
    m = cfg.p**2
    for I in ideals:
        t0 = time.perf_counter()
        verified, shapes = 0, Counter()
        for k in range(cfg.cases):
            D = random_log_hs(I, m, m - 1, rng, degree=2, min_order=2)
            if order(D) <= 1:
                continue
            cert = decompose_char_p(D, I, cfg.p, 2)
            verified += cert.verify()
            shapes[order(cert.extra["F"])] += 1
            if k < cfg.show:
                print(format_derivation(D) + "  = T[p] o F with\nT:\n" + format_derivation(cert.extra["T"])
                      + "F:\n" + format_derivation(cert.extra["F"]))
        secs = time.perf_counter() - t0
        print(f"{I}: {verified}/{cfg.cases} verified, order of F: {dict(sorted(shapes.items()))}, {secs:.2f} s")


if __name__ == "__main__":
    main()
