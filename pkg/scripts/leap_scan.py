"""Bounded leap scan over a few hypersurfaces and derivation families.

Prints one row per witness with the status at each length and the flagged
leap, if any.
"""
import argparse
from dataclasses import dataclass

from hsder.basechange import CounterexampleInstance, counterexample_witness_family, leap_scan
from hsder.hs import HSDerivation
from hsder.logideal import IdealPresentation, is_r_log
from hsder.sampling import standard_ideals


@dataclass
class Config:
    m_max: int = 4


def euler_family(I):
    R = I.ring
    x, y = R.gens()
    zero = R.zero()
    return [
        ("x d_x", HSDerivation.derivation(R, [x, zero])),
        ("y d_y", HSDerivation.derivation(R, [zero, y])),
        ("x d_x + y d_y", HSDerivation.derivation(R, [x, y])),
    ]


def cases():
    inst = CounterexampleInstance.build()
    yield "F_2(s,t): x^2+y^2+tx^4+sy^4", inst.ideal, counterexample_witness_family(inst)
    for p in (2, 3):
        R, (node, cusp) = standard_ideals(p)
        x, y = R.gens()
        yield f"F_{p}: xy", node, euler_family(node)
        h = cusp.gens[0]
        family = [
            ("2x d_x + 3y d_y", HSDerivation.derivation(R, [2 * x, 3 * y])),
            ("h d_x", HSDerivation.derivation(R, [h, R.zero()])),
            ("d_x", HSDerivation.derivation(R, [R.one(), R.zero()])),
            ("x^2 d_y", HSDerivation.derivation(R, [R.zero(), x**2])),
        ]
        yield f"F_{p}: y^2+x^3", cusp, family
        yield f"F_{p}: x", IdealPresentation(R, [x]), euler_family(node)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=Config.m_max)
    cfg = Config(**vars(ap.parse_args()))
    for title, I, witnesses in cases():
        # partials and the like are logarithmic only in some characteristics
        witnesses = [(name, d) for name, d in witnesses if is_r_log(d, I, 1)]
        rep = leap_scan(I, cfg.m_max, witnesses)
        print(f"{title}  candidates={rep.candidates}  powers of p only={rep.consistent}")
        for row in rep.rows:
            statuses = " ".join(f"{k}:{v}" for k, v in row["statuses"].items())
            print(f"  {row['name']:<16} {statuses}  flag={row['flag']}")


if __name__ == "__main__":
    main()
