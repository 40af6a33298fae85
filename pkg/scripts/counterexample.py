"""Run the non-surjectivity harness for x^2 + y^2 + t x^4 + s y^4 over F_2(s,t).

    python3 scripts/counterexample.py --ring-degree 8 --param-degree 4 --json out.json
"""
import argparse
from dataclasses import dataclass
from pathlib import Path

from hsder.basechange import counterexample_report
from hsder.integrate import Bounds


@dataclass
class Config:
    ring_degree: int = 8
    param_degree: int = 4
    json: str | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ring-degree", type=int, default=Config.ring_degree)
    ap.add_argument("--param-degree", type=int, default=Config.param_degree)
    ap.add_argument("--json")
    cfg = Config(**vars(ap.parse_args()))
    rep = counterexample_report(Bounds(cfg.ring_degree, cfg.param_degree))
    print(rep.to_text())
    if cfg.json:
        Path(cfg.json).write_text(rep.to_json())


if __name__ == "__main__":
    main()
