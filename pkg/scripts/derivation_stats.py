"""Language size by depth and random-derivation outcomes for the corpus systems.

    python3 scripts/derivation_stats.py --depth 8 --runs 1000
"""

import argparse
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from scatterscore.derivation import derive_random, enumerate_mstrings
from scatterscore.dsl import parse_file

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@dataclass
class Config:
    depth: int = 8
    runs: int = 1000
    max_steps: int = 64
    max_results: int = 100_000


def language_sizes(system, cfg: Config):
    for d in range(1, cfg.depth + 1):
        t0 = time.perf_counter()
        result = enumerate_mstrings(system, d, cfg.max_results)
        more = "+" if result.truncated else ""
        yield d, f"{len(result.strings)}{more}", time.perf_counter() - t0


def outcomes(system, cfg: Config) -> Counter:
    tally = Counter()
    for seed in range(cfg.runs):
        trace = derive_random(system, seed, cfg.max_steps)
        tally[trace.status] += 1
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=Config.depth)
    ap.add_argument("--runs", type=int, default=Config.runs)
    ap.add_argument("--max-steps", type=int, default=Config.max_steps)
    args = ap.parse_args()
    cfg = Config(args.depth, args.runs, args.max_steps)
    for name in ("allegro", "jazz", "trio"):
        system = parse_file(CORPUS / f"{name}.mgs")
        print(f"== {name} (m={system.m}, |Q|={len(system.sync)})")
        for d, size, dt in language_sizes(system, cfg):
            print(f"  depth {d}: {size} terminal m-strings ({dt:.2f}s)")
        tally = outcomes(system, cfg)
        print("  random runs: " + ", ".join(f"{k}={v}" for k, v in sorted(tally.items())))


if __name__ == "__main__":
    main()
