"""Render every corpus system to .txt, .mid and .trace files.

Jazz and trio use their hand-written scripts; allegro is derived at random.

    python3 scripts/render_corpus.py --out renders
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from scatterscore.derivation import TERMINAL, derive_random, derive_scripted
from scatterscore.dsl import parse_file
from scatterscore.music import score_for
from scatterscore.render import export_trace, render_midi, render_text

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

SCRIPTS = {
    "jazz": [(2, 2), (3, 3), (6, 6), (4, 4), (5, 5), (7, 7)],
    "trio": [
        (1, 1, 1), (2, 2, 2), (3, 5, 3), (3, 5, 3), (5, 6, 5),
        (5, 6, 5), (7, 7, 7), (8, 8, 8), (8, 8, 9), (8, 8, 10),
    ],
}


@dataclass
class Config:
    out: Path = Path("renders")
    seed: int = 7
    max_steps: int = 64


def render_one(name: str, cfg: Config) -> str:
    system = parse_file(CORPUS / f"{name}.mgs")
    if name in SCRIPTS:
        trace = derive_scripted(system, SCRIPTS[name])
    else:
        trace = derive_random(system, cfg.seed, cfg.max_steps)
    base = cfg.out / name
    base.with_suffix(".trace").write_text(export_trace(trace))
    if trace.status != TERMINAL:
        return f"{name}: {trace.status} after {len(trace.steps)} steps"
    score = score_for(system, trace.final)
    base.with_suffix(".txt").write_text(render_text(score))
    base.with_suffix(".mid").write_bytes(render_midi(score))
    ticks = ", ".join(f"{t.name}={t.total_ticks}" for t in score.tracks)
    return f"{name}: {len(trace.steps)} steps, ticks {ticks}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--max-steps", type=int, default=Config.max_steps)
    args = ap.parse_args()
    cfg = Config(args.out, args.seed, args.max_steps)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name in ("allegro", "jazz", "trio"):
        print(render_one(name, cfg))


if __name__ == "__main__":
    main()
