"""Multi-generative rule-synchronized scattered context grammar systems
that derive synchronized multi-instrument scores."""

from .derivation import (
    DerivationTrace,
    Explicit,
    Leftmost,
    RandomOccurrence,
    applicable_tuples,
    apply_at,
    derive_random,
    derive_scripted,
    enumerate_mstrings,
    find_embeddings,
    is_terminal,
    membership,
    sync_step,
)
from .dsl import parse_file, parse_system, print_system
from .grammar import (
    AttributeVector,
    Chord,
    Component,
    Diagnostic,
    GrammarSystem,
    Note,
    Rest,
    ScatteredRule,
    SyncTuple,
    TokenDef,
    classify_rule,
    classify_system,
    validate_component,
    validate_system,
)
from .music import ChordTable, Score, Track, interpret, score_for
from .render import export_trace, render_midi, render_text

__version__ = "0.1.0"
