"""Symbols, rules, components and synchronized grammar systems.

Every value here is an immutable dataclass.  Structural problems are not
raised at construction time; ``validate_component`` and ``validate_system``
collect them as :class:`Diagnostic` records so a tool can report all of
them at once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

Symbol = str
Form = tuple  # tuple[Symbol, ...]

SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

OPERATIONS = ("down", "up", "flat", "sharp")
DURATIONS = ("e", "q", "h", "f")
DYNAMICS = ("pp", "p", "mp", "mf", "f", "ff")


def is_symbol(name: str) -> bool:
    return bool(SYMBOL_RE.match(name))


@dataclass(frozen=True)
class SourceSpan:
    """Location of a construct in DSL source (line and column are 1-based)."""

    offset: int
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


# -- payloads ---------------------------------------------------------------


@dataclass(frozen=True)
class Note:
    pitch: str


@dataclass(frozen=True)
class Rest:
    pass


@dataclass(frozen=True)
class Chord:
    pitches: tuple


Payload = Union[Note, Rest, Chord]


@dataclass(frozen=True)
class AttributeVector:
    """The four token attribute slots; ``None`` marks an absent attribute.

    ``op`` is one of the pitch operations in :data:`OPERATIONS` or any other
    identifier, which is kept as an opaque label (used to key chord lookup).
    """

    op: Optional[str] = None
    dur: Optional[str] = None
    reg: Optional[int] = None
    dyn: Optional[str] = None

    @property
    def label(self) -> Optional[str]:
        if self.op is None or self.op in OPERATIONS:
            return None
        return self.op


@dataclass(frozen=True)
class TokenDef:
    name: Symbol
    payload: Payload
    attrs: AttributeVector = AttributeVector()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ScatteredRule:
    """``(A1, ..., An) -> (x1, ..., xn)``; each ``xi`` is a tuple of symbols."""

    label: int
    lhs: tuple
    rhs: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(tuple(part) for part in self.rhs))
        if len(self.lhs) != len(self.rhs):
            raise ValueError(
                f"rule {self.label}: {len(self.lhs)} left-hand symbols "
                f"but {len(self.rhs)} right-hand parts"
            )
        if not self.lhs:
            raise ValueError(f"rule {self.label}: empty left-hand side")

    @property
    def n(self) -> int:
        return len(self.lhs)

    def __str__(self) -> str:
        if self.n == 1:
            return f"{self.label}: {self.lhs[0]} -> {' '.join(self.rhs[0])}"
        lhs = ", ".join(self.lhs)
        rhs = ", ".join(" ".join(part) for part in self.rhs)
        return f"{self.label}: ({lhs}) -> ({rhs})"


@dataclass(frozen=True)
class Component:
    """One scattered context grammar ``(N, T, P, S)`` plus rendering hints.

    Rules are kept sorted by label; nonterminals and tokens keep their
    declaration order.
    """

    name: str
    nonterminals: tuple
    tokens: tuple
    rules: tuple
    start: Symbol
    program: int = 0
    octave_offset: int = 0
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(
            self, "rules", tuple(sorted(self.rules, key=lambda r: r.label))
        )

    @property
    def terminals(self) -> frozenset:
        return frozenset(t.name for t in self.tokens)

    @property
    def nonterminal_set(self) -> frozenset:
        return frozenset(self.nonterminals)

    def rule(self, label: int) -> ScatteredRule:
        for r in self.rules:
            if r.label == label:
                return r
        raise KeyError(label)

    def token(self, name: Symbol) -> TokenDef:
        for t in self.tokens:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class SyncTuple:
    labels: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __str__(self) -> str:
        return "(" + ",".join(str(label) for label in self.labels) + ")"


@dataclass(frozen=True)
class GrammarSystem:
    name: str
    components: tuple
    sync: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(
            self,
            "sync",
            tuple(q if isinstance(q, SyncTuple) else SyncTuple(q) for q in self.sync),
        )

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def start_form(self) -> tuple:
        return tuple((c.start,) for c in self.components)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    detail: tuple = ()
    severity: str = "error"
    span: Optional[SourceSpan] = None

    @property
    def is_error(self) -> bool:
        return self.severity == "error"


def _diag(code, message, *detail, span=None, severity="error"):
    return Diagnostic(code, message, tuple(detail), severity, span)


def validate_component(c: Component, allow_erasing: bool = False) -> list:
    """Return every structural problem of ``c``; ``[]`` means well-formed."""
    out = []
    nts = c.nonterminal_set
    terms = c.terminals

    for name in c.nonterminals:
        if not is_symbol(name):
            out.append(_diag("InvalidSymbol", f"invalid symbol name {name!r}", name, span=c.span))
    seen_tokens = set()
    for t in c.tokens:
        if not is_symbol(t.name):
            out.append(_diag("InvalidSymbol", f"invalid symbol name {t.name!r}", t.name, span=t.span))
        if t.name in seen_tokens:
            out.append(_diag("DuplicateToken", f"token {t.name} defined twice", t.name, span=t.span))
        seen_tokens.add(t.name)
        if t.name in nts:
            out.append(
                _diag("AlphabetOverlap", f"{t.name} is both a nonterminal and a terminal", t.name, span=t.span)
            )
        if isinstance(t.payload, Chord) and len(t.payload.pitches) < 2:
            out.append(_diag("ChordTooSmall", f"chord {t.name} needs at least two pitches", t.name, span=t.span))

    if c.start not in nts:
        out.append(_diag("StartNotNonterminal", f"start symbol {c.start} is not a nonterminal", c.start, span=c.span))
    if not 0 <= c.program <= 127:
        out.append(_diag("ProgramOutOfRange", f"program {c.program} outside 0..127", c.program, span=c.span))

    seen_labels = set()
    for r in c.rules:
        if r.label < 1:
            out.append(_diag("InvalidLabel", f"rule label {r.label} must be positive", r.label, span=r.span))
        if r.label in seen_labels:
            out.append(_diag("DuplicateLabel", f"rule label {r.label} used twice", r.label, span=r.span))
        seen_labels.add(r.label)
        for a in r.lhs:
            if a not in nts:
                out.append(
                    _diag("LhsNotNonterminal", f"rule {r.label}: {a} is not a nonterminal", r.label, a, span=r.span)
                )
        for part in r.rhs:
            for x in part:
                if x not in nts and x not in terms:
                    out.append(_diag("UnknownSymbol", f"rule {r.label}: unknown symbol {x}", r.label, x, span=r.span))
        if not allow_erasing and any(len(part) == 0 for part in r.rhs):
            out.append(_diag("ErasingRule", f"rule {r.label} erases a nonterminal", r.label, span=r.span))
    return out


def validate_system(s: GrammarSystem, allow_erasing: bool = False) -> list:
    out = []
    if s.m < 1:
        out.append(_diag("NoComponents", "a system needs at least one component", span=s.span))
    for c in s.components:
        out.extend(validate_component(c, allow_erasing))
    labels = [{r.label for r in c.rules} for c in s.components]
    seen = set()
    for q in s.sync:
        if len(q) != s.m:
            out.append(
                _diag("ArityMismatch", f"tuple {q} has arity {len(q)}, expected {s.m}", len(q), s.m, span=q.span)
            )
            continue
        for i, label in enumerate(q.labels):
            if label not in labels[i]:
                out.append(
                    _diag(
                        "UnknownRuleLabel",
                        f"tuple {q}: component {i + 1} has no rule {label}",
                        i + 1,
                        label,
                        span=q.span,
                    )
                )
        if q.labels in seen:
            out.append(_diag("DuplicateTuple", f"tuple {q} listed twice", q.labels, span=q.span, severity="warning"))
        seen.add(q.labels)
    return out


def errors_only(diagnostics: Iterable[Diagnostic]) -> list:
    return [d for d in diagnostics if d.is_error]


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class RuleClass:
    is_context_free: bool
    is_simple: bool
    is_linear: bool
    is_erasing: bool


def classify_rule(r: ScatteredRule, nonterminals: Iterable[Symbol] = ()) -> RuleClass:
    """Classify ``r``; ``nonterminals`` is needed only for linearity."""
    nts = frozenset(nonterminals)
    cf = r.n == 1
    return RuleClass(
        is_context_free=cf,
        is_simple=all(len(part) <= 1 for part in r.rhs),
        is_linear=cf and sum(1 for x in r.rhs[0] if x in nts) <= 1,
        is_erasing=any(len(part) == 0 for part in r.rhs),
    )


@dataclass(frozen=True)
class ComponentClass:
    name: str
    rules: tuple  # (label, RuleClass) pairs
    context_free: bool
    linear: bool
    simple: bool
    non_erasing: bool


@dataclass(frozen=True)
class SystemClass:
    components: tuple
    context_free_restricted: bool
    linear_restricted: bool
    non_erasing: bool


def classify_system(s: GrammarSystem) -> SystemClass:
    comps = []
    for c in s.components:
        rows = tuple((r.label, classify_rule(r, c.nonterminals)) for r in c.rules)
        comps.append(
            ComponentClass(
                name=c.name,
                rules=rows,
                context_free=all(k.is_context_free for _, k in rows),
                linear=all(k.is_linear for _, k in rows),
                simple=all(k.is_simple for _, k in rows),
                non_erasing=not any(k.is_erasing for _, k in rows),
            )
        )
    return SystemClass(
        components=tuple(comps),
        context_free_restricted=all(c.context_free for c in comps),
        linear_restricted=all(c.linear for c in comps),
        non_erasing=all(c.non_erasing for c in comps),
    )
