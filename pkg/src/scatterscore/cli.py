"""``scatterscore`` command line: validate, classify, derive, enumerate, render.

Exit codes: 0 success / terminal derivation, 1 invalid input or failed
script step, 2 I/O or usage error, 3 stuck derivation, 4 step budget
exhausted.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .derivation import (
    BUDGET_EXHAUSTED,
    LEFTMOST,
    STUCK,
    TERMINAL,
    RandomOccurrence,
    derive_random,
    derive_scripted,
    enumerate_mstrings,
)
from .dsl import parse_system
from .errors import InterpretError, ParseError, ScriptStepFailed, TooManyTracks
from .grammar import classify_system, validate_system
from .music import score_for
from .render import export_trace, format_mstring, render_midi, render_text

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_STUCK = 3
EXIT_BUDGET = 4

STATUS_EXIT = {TERMINAL: EXIT_OK, STUCK: EXIT_STUCK, BUDGET_EXHAUSTED: EXIT_BUDGET}


@dataclass
class CliConfig:
    command: str
    input: Path
    out: Optional[Path] = None
    script: Optional[str] = None
    seed: int = 0
    max_steps: int = 256
    max_results: int = 10000
    policy: Optional[str] = None
    allow_erasing: bool = False
    format: str = "both"


class _Abort(Exception):
    def __init__(self, code):
        self.code = code


def _err(msg: str):
    print(msg, file=sys.stderr)


def _report(path, diagnostics):
    for d in diagnostics:
        where = f"{d.span.line}:{d.span.column}" if d.span else "1:1"
        _err(f"{path}:{where}: {d.severity}: {d.message}")


def _load(cfg: CliConfig, validate: bool = True):
    try:
        text = cfg.input.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        _err(f"{cfg.input}: error: {exc}")
        raise _Abort(EXIT_IO)
    try:
        system = parse_system(text)
    except ParseError as exc:
        _report(cfg.input, exc.diagnostics)
        raise _Abort(EXIT_INVALID)
    if validate:
        diags = validate_system(system, allow_erasing=cfg.allow_erasing)
        _report(cfg.input, diags)
        if any(d.is_error for d in diags):
            raise _Abort(EXIT_INVALID)
    return system


def parse_script(text: str) -> list:
    """``"2,2;3,3"`` -> ``[(2, 2), (3, 3)]``."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        out.append(tuple(int(x) for x in chunk.strip("()").split(",")))
    return out


def _derive(cfg: CliConfig, system):
    if cfg.script is not None:
        try:
            script = parse_script(cfg.script)
        except ValueError:
            _err(f"error: malformed --script {cfg.script!r}")
            raise _Abort(EXIT_IO)
        policy = RandomOccurrence(cfg.seed) if cfg.policy == "random" else LEFTMOST
        bad = [q for q in script if len(q) != system.m]
        if bad:
            _err(f"error: script tuple {bad[0]} has arity {len(bad[0])}, system has {system.m} components")
            raise _Abort(EXIT_INVALID)
        try:
            return derive_scripted(system, script, policy)
        except ScriptStepFailed as exc:
            _err(f"error: {exc}")
            raise _Abort(EXIT_INVALID)
    policy = LEFTMOST if cfg.policy == "leftmost" else None
    return derive_random(system, cfg.seed, cfg.max_steps, policy)


def _out_base(cfg: CliConfig) -> Path:
    return cfg.out if cfg.out is not None else Path(cfg.input.stem)


def cmd_validate(cfg: CliConfig) -> int:
    _load(cfg)
    return EXIT_OK


def cmd_classify(cfg: CliConfig) -> int:
    system = _load(cfg, validate=False)
    sc = classify_system(system)
    yn = {True: "y", False: "n"}
    for i, comp in enumerate(sc.components, 1):
        for label, k in comp.rules:
            print(
                f"G{i} rule {label}: cf={yn[k.is_context_free]} simple={yn[k.is_simple]} "
                f"linear={yn[k.is_linear]} erasing={yn[k.is_erasing]}"
            )
    yes = {True: "yes", False: "no"}
    print(f"context-free-restricted: {yes[sc.context_free_restricted]}")
    print(f"linear-restricted: {yes[sc.linear_restricted]}")
    print(f"non-erasing: {yes[sc.non_erasing]}")
    return EXIT_OK


def cmd_derive(cfg: CliConfig) -> int:
    system = _load(cfg)
    trace = _derive(cfg, system)
    path = _out_base(cfg)
    if path.suffix != ".trace":
        path = path.with_name(path.name + ".trace")
    try:
        path.write_text(export_trace(trace), encoding="utf-8")
    except OSError as exc:
        _err(f"{path}: error: {exc}")
        return EXIT_IO
    if trace.status == TERMINAL:
        print(format_mstring(trace.final))
    else:
        _err(f"derivation {trace.status} after {len(trace.steps)} steps")
    return STATUS_EXIT[trace.status]


def cmd_enumerate(cfg: CliConfig) -> int:
    system = _load(cfg)
    result = enumerate_mstrings(system, cfg.max_steps, cfg.max_results)
    for line in sorted(format_mstring(w) for w in result.strings):
        print(line)
    if result.truncated:
        _err(f"note: output truncated at {cfg.max_results} m-strings")
    return EXIT_OK


def cmd_render(cfg: CliConfig) -> int:
    system = _load(cfg)
    trace = _derive(cfg, system)
    if trace.status != TERMINAL:
        _err(f"derivation {trace.status} after {len(trace.steps)} steps; nothing rendered")
        return STATUS_EXIT[trace.status]
    try:
        score = score_for(system, trace.final)
        payloads = []
        if cfg.format in ("text", "both"):
            payloads.append((".txt", render_text(score).encode("utf-8")))
        if cfg.format in ("midi", "both"):
            payloads.append((".mid", render_midi(score)))
    except (InterpretError, TooManyTracks) as exc:
        _err(f"error: {exc}")
        return EXIT_INVALID
    base = _out_base(cfg)
    for suffix, data in payloads:
        target = base.with_suffix(suffix) if base.suffix in (".txt", ".mid") else base.with_name(base.name + suffix)
        try:
            target.write_bytes(data)
        except OSError as exc:
            _err(f"{target}: error: {exc}")
            return EXIT_IO
        print(target)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "derive": cmd_derive,
    "enumerate": cmd_enumerate,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatterscore",
        description="Synchronized scattered context grammar systems for multi-track scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", type=Path, help=".mgs grammar system file")
        p.add_argument("--allow-erasing", action="store_true", help="accept rules with empty right-hand parts")
        if name in ("derive", "render"):
            p.add_argument("--script", help='rule-label tuples, e.g. "2,2;3,3;6,6"')
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--policy", choices=("leftmost", "random"))
            p.add_argument("--out", type=Path)
        if name in ("derive", "render", "enumerate"):
            p.add_argument("--max-steps", type=int, default=256)
        if name == "enumerate":
            p.add_argument("--max-results", type=int, default=10000)
        if name == "render":
            p.add_argument("--format", choices=("text", "midi", "both"), default="both")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(
        command=args.command,
        input=args.input,
        out=getattr(args, "out", None),
        script=getattr(args, "script", None),
        seed=getattr(args, "seed", 0),
        max_steps=getattr(args, "max_steps", 256),
        max_results=getattr(args, "max_results", 10000),
        policy=getattr(args, "policy", None),
        allow_erasing=args.allow_erasing,
        format=getattr(args, "format", "both"),
    )
    try:
        return COMMANDS[cfg.command](cfg)
    except _Abort as exc:
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
