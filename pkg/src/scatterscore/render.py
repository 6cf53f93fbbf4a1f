"""Text, Standard MIDI File and derivation-trace serializers.

All output is byte-deterministic: no timestamps, fixed tempo and
resolution, explicit note-off messages and no running status.
"""

from __future__ import annotations

import struct

from .derivation import DerivationTrace
from .errors import TooManyTracks
from .music import Score

MAX_TRACKS = 15  # 16 channels minus the percussion channel


def render_text(score: Score) -> str:
    lines = [f"score ppq={score.ppq} tempo={score.tempo_bpm}"]
    for idx, track in enumerate(score.tracks):
        lines.append(f"track {idx} name={track.name} program={track.program}")
        for ev in track.events:
            if ev.pitches:
                notes = "+".join(str(p) for p in ev.pitches)
                lines.append(f"{ev.onset} {ev.duration} NOTE {notes} v{ev.velocity}")
            else:
                lines.append(f"{ev.onset} {ev.duration} REST")
    return "\n".join(lines) + "\n"


def var_len(value: int) -> bytes:
    """MIDI variable-length quantity."""
    if value < 0:
        raise ValueError("negative delta time")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def channel_for(index: int) -> int:
    # skip GM percussion channel 9
    return index if index < 9 else index + 1


def _chunk(kind: bytes, body: bytes) -> bytes:
    return kind + struct.pack(">I", len(body)) + body


def _tempo_track(score: Score) -> bytes:
    usec = 60_000_000 // score.tempo_bpm
    body = b"\x00\xff\x51\x03" + usec.to_bytes(3, "big") + b"\x00\xff\x2f\x00"
    return _chunk(b"MTrk", body)


def _note_track(track, channel: int) -> bytes:
    body = bytearray()
    body += b"\x00" + bytes([0xC0 | channel, track.program & 0x7F])
    pending = 0
    for ev in track.events:
        if not ev.pitches:
            pending += ev.duration
            continue
        for k, p in enumerate(ev.pitches):
            body += var_len(pending if k == 0 else 0)
            body += bytes([0x90 | channel, p, ev.velocity])
        for k, p in enumerate(ev.pitches):
            body += var_len(ev.duration if k == 0 else 0)
            body += bytes([0x80 | channel, p, 0])
        pending = 0
    # trailing rests stretch the track to its full length
    body += var_len(pending) + b"\xff\x2f\x00"
    return _chunk(b"MTrk", bytes(body))


def render_midi(score: Score) -> bytes:
    """SMF format 1: a tempo track followed by one track per score track."""
    if len(score.tracks) > MAX_TRACKS:
        raise TooManyTracks(f"{len(score.tracks)} tracks; at most {MAX_TRACKS} channels are available")
    header = _chunk(b"MThd", struct.pack(">HHH", 1, len(score.tracks) + 1, score.ppq))
    parts = [header, _tempo_track(score)]
    for i, track in enumerate(score.tracks):
        parts.append(_note_track(track, channel_for(i)))
    return b"".join(parts)


def _form(symbols) -> str:
    return " ".join(symbols)


def _mform(mform) -> str:
    return "(" + " | ".join(_form(f) for f in mform) + ")"


def _embedding(e) -> str:
    return "(" + ",".join(str(p) for p in e) + ")"


def export_trace(trace: DerivationTrace) -> str:
    lines = [f"start: {_mform(trace.start)}"]
    for k, step in enumerate(trace.steps, 1):
        labels = ",".join(str(label) for label in step.labels)
        pos = "|".join(_embedding(e) for e in step.embeddings)
        lines.append(f"step {k}: Q=({labels}) pos=[{pos}] => {_mform(step.result)}")
    lines.append(f"status: {trace.status}")
    return "\n".join(lines) + "\n"


def format_mstring(mstring) -> str:
    return " | ".join(_form(w) for w in mstring)
