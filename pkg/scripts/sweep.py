"""Seeded random sweep over cluster-cyclic matrices; writes a JSON report."""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from cyclo import PatternTree
from cyclo.sampling import sample_many
from cyclo.sweep import SUITES


@dataclass
class SweepConfig:
    seed: int = 0
    count: int = 20
    depth: int = 6
    suites: list[str] = field(default_factory=lambda: ["signs", "inequalities", "cartan",
                                                       "quadric", "dualities"])
    out: str = "sweep_report.json"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--suites", default=None, help="comma list of suite names")
    p.add_argument("--out", default="sweep_report.json")
    a = p.parse_args()
    cfg = SweepConfig(a.seed, a.count, a.depth, out=a.out)
    if a.suites:
        cfg.suites = a.suites.split(",")

    trees = [PatternTree(B, d) for B, d in sample_many(cfg.seed, cfg.count)]
    results = {}
    for name in cfg.suites:
        t0 = time.perf_counter()
        rep = SUITES[name](trees, cfg.depth)
        results[name] = rep.to_json()
        print(f"{name:14s} {'PASS' if rep.passed else 'FAIL'}  {time.perf_counter() - t0:.1f}s")
    with open(cfg.out, "w") as fh:
        json.dump({"config": asdict(cfg), "results": results}, fh, indent=2, sort_keys=True)
    print("report written to", cfg.out)


if __name__ == "__main__":
    main()
