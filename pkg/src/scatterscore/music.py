"""Turning terminal strings of attributed tokens into timed event tracks.

Pitch names are German: c d e f g a h, with ``is`` raising and ``es``
lowering by a semitone (``es`` and ``as`` are accepted as the usual short
forms).  Register 1 is the octave of middle C.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DuplicateChord, InterpretError, OutOfRange, UnknownDuration, UnresolvedAlias
from .grammar import Chord, Note, TokenDef

PPQ = 480
TEMPO_BPM = 120
DEFAULT_VELOCITY = 75

LETTER_OFFSETS = {"c": 0, "d": 2, "e": 4, "f": 5, "g": 7, "a": 9, "h": 11}
OP_SHIFT = {"down": -12, "up": 12, "flat": -1, "sharp": 1}
DURATION_TICKS = {"e": PPQ // 2, "q": PPQ, "h": PPQ * 2, "f": PPQ * 4}
VELOCITIES = {"pp": 33, "p": 49, "mp": 64, None: DEFAULT_VELOCITY, "mf": 88, "f": 101, "ff": 113}


@dataclass(frozen=True)
class NoteEvent:
    onset: int
    duration: int
    pitches: tuple = ()
    velocity: int = DEFAULT_VELOCITY

    @property
    def is_rest(self) -> bool:
        return not self.pitches


@dataclass(frozen=True)
class Track:
    name: str = ""
    program: int = 0
    events: tuple = ()

    @property
    def total_ticks(self) -> int:
        return sum(e.duration for e in self.events)


@dataclass(frozen=True)
class Score:
    tracks: tuple
    ppq: int = PPQ
    tempo_bpm: int = TEMPO_BPM


def duration_ticks(dur: Optional[str]) -> int:
    """Ticks at 480 ppq; an absent duration counts as a quarter."""
    if dur is None:
        return PPQ
    try:
        return DURATION_TICKS[dur]
    except KeyError:
        raise UnknownDuration(f"unknown duration {dur!r}") from None


def velocity_of(dyn: Optional[str]) -> int:
    return VELOCITIES[dyn]


def split_pitch(name: str):
    """``"es2"`` -> ``(3, 2)``: semitone offset from c and register override (or None)."""
    digits = ""
    while name and name[-1].isdigit():
        digits = name[-1] + digits
        name = name[:-1]
    letter, acc = name[:1], name[1:]
    if letter not in LETTER_OFFSETS or acc not in ("", "is", "es", "s") or (acc == "s" and letter not in "ea"):
        raise UnresolvedAlias(f"not a pitch name: {name!r}")
    shift = {"": 0, "is": 1, "es": -1, "s": -1}[acc]
    return LETTER_OFFSETS[letter] + shift, int(digits) if digits else None


def pitch_of(letter: str, reg: Optional[int] = 1, op: Optional[str] = None, track_offset: int = 0) -> int:
    offset, reg_override = split_pitch(letter)
    if reg_override is not None:
        reg = reg_override
    if reg is None:
        reg = 1
    midi = 60 + 12 * (reg - 1) + offset + OP_SHIFT.get(op, 0) + 12 * track_offset
    if not 0 <= midi <= 127:
        raise OutOfRange(f"{letter} at register {reg} ({op or '-'}) gives MIDI {midi}")
    return midi


class ChordTable:
    """Chord lookup keyed on ``(alias, op label)``; the label is None for plain chords."""

    def __init__(self, rows: Iterable = ()):
        self.entries = {}
        for alias, label, pitches in rows:
            self.add(alias, label, pitches)

    def add(self, alias: str, label: Optional[str], pitches: Sequence[str]):
        key = (alias, label)
        if key in self.entries:
            raise DuplicateChord(f"chord {alias} with label {label or '-'} defined twice")
        self.entries[key] = tuple(pitches)

    def lookup(self, alias: str, label: Optional[str]) -> tuple:
        try:
            return self.entries[(alias, label)]
        except KeyError:
            raise UnresolvedAlias(f"no chord row for {alias} with label {label or '-'}") from None

    @classmethod
    def from_tokens(cls, defs: Iterable[TokenDef]) -> "ChordTable":
        table = cls()
        for t in defs:
            if isinstance(t.payload, Chord):
                table.add(t.name, t.attrs.label, t.payload.pitches)
        return table

    def __len__(self):
        return len(self.entries)


def expand_chord(alias: str, op: Optional[str], table: ChordTable, reg: Optional[int] = 1, track_offset: int = 0) -> list:
    label = None if op is None or op in OP_SHIFT else op
    names = table.lookup(alias, label)
    return sorted({pitch_of(p, reg, op, track_offset) for p in names})


def interpret(
    tokens: Sequence[str],
    defs,
    table: Optional[ChordTable] = None,
    track_offset: int = 0,
    name: str = "",
    program: int = 0,
) -> Track:
    """Lay tokens out back to back from tick 0, one event per token."""
    if not isinstance(defs, Mapping):
        defs = {t.name: t for t in defs}
    if table is None:
        table = ChordTable.from_tokens(defs.values())
    events = []
    onset = 0
    for i, sym in enumerate(tokens):
        try:
            t = defs[sym]
        except KeyError:
            raise InterpretError(i, sym, "no token definition") from None
        a = t.attrs
        try:
            dur = duration_ticks(a.dur)
            if isinstance(t.payload, Note):
                pitches = (pitch_of(t.payload.pitch, a.reg, a.op, track_offset),)
            elif isinstance(t.payload, Chord):
                pitches = tuple(expand_chord(sym, a.op, table, a.reg, track_offset))
            else:
                pitches = ()
        except (OutOfRange, UnresolvedAlias, UnknownDuration) as exc:
            raise InterpretError(i, sym, exc) from exc
        events.append(NoteEvent(onset, dur, pitches, velocity_of(a.dyn)))
        onset += dur
    return Track(name, program, tuple(events))


def score_for(system, mstring) -> Score:
    """Interpret a terminal m-string of ``system``, one track per component."""
    tracks = []
    for c, word in zip(system.components, mstring):
        tracks.append(interpret(word, c.tokens, track_offset=c.octave_offset, name=c.name, program=c.program))
    return Score(tuple(tracks))
