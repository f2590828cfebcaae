"""Check the theorem and lemma solvers on a full grid or a timed random sample.

    python3 scripts/sweep_theorem.py --max-len 2            # full grid, about 2 minutes (7 with --cross-check)
    python3 scripts/sweep_theorem.py --max-len 5 --sample 2000 --budget 60
"""

import argparse
import json
from dataclasses import asdict, dataclass
from typing import Optional

from cyclicprod import sweep


@dataclass
class SweepConfig:
    alphabet: str = "xy"
    max_len: int = 2
    sample: Optional[int] = None
    seed: int = 0
    budget: Optional[float] = None
    cross_check: bool = False


def run(cfg: SweepConfig) -> dict:
    words = sweep.reduced_words(cfg.alphabet, cfg.max_len)
    total = sweep.grid_instance_count(words)
    if cfg.sample is None:
        items = sweep.instances(sweep.grid_triples(words))
    else:
        items = sweep.instances(sweep.random_triples(words, cfg.sample, cfg.seed))
        total = None
    summary = sweep.run_sweep(items, total=total, budget=cfg.budget, cross_check=cfg.cross_check)
    out = summary.to_json()
    out["grid_instances"] = sweep.grid_instance_count(words)
    out["config"] = asdict(cfg)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--alphabet", default="xy")
    ap.add_argument("--max-len", type=int, default=2)
    ap.add_argument("--sample", type=int, default=None, help="random triples instead of the full grid")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=float, default=None, help="stop after this many seconds")
    ap.add_argument("--cross-check", action="store_true")
    a = ap.parse_args()
    cfg = SweepConfig(a.alphabet, a.max_len, a.sample, a.seed, a.budget, a.cross_check)
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
