"""Reader and canonical printer for ``.mgs`` grammar-system files.

Example::

    system duet {
      component G1 {
        start S1
        nonterminals S1 A;
        tokens {
          c = note c [-, q, 1, -];
        }
        rule 1: S1 -> A A;
        rule 2: (A, A) -> (c, c);
      }
      ...
      sync {
        (1, 1)
        (2, 2)
      }
    }

Keywords are contextual, so any identifier may also name a symbol.  Two
small extensions over the base syntax: a parenthesized right-hand side may
contain empty parts (``(A, B) -> (a, )``) so erasing rules stay
expressible, and a chord pitch may carry a register digit (``c2``).
"""

from __future__ import annotations

import re
from typing import NamedTuple, Optional

from .errors import ParseError
from .grammar import (
    DURATIONS,
    DYNAMICS,
    AttributeVector,
    Chord,
    Component,
    Diagnostic,
    GrammarSystem,
    Note,
    Rest,
    ScatteredRule,
    SourceSpan,
    SyncTuple,
    TokenDef,
)

PITCH_RE = re.compile(r"(?P<letter>[cdefgah])(?P<acc>is|es|s)?(?P<reg>\d+)?\Z")
MAX_DIAGNOSTICS = 200

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>-?[0-9]+)
  | (?P<arrow>->)
  | (?P<punct>[-{}()\[\],;:=+])
  | (?P<bad>[^ \t\r\n\#A-Za-z0-9_{}()\[\],;:=+-]+)
    """,
    re.VERBOSE,
)


def is_pitch(text: str) -> bool:
    m = PITCH_RE.match(text)
    if not m:
        return False
    return m.group("acc") != "s" or m.group("letter") in "ea"


class Tok(NamedTuple):
    kind: str  # ident, int, arrow, punct, eof
    text: str
    offset: int  # bytes
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.offset, self.line, self.column, len(self.text.encode("utf-8", "surrogatepass")))


def scan(text: str, diags: list):
    """Yield tokens lazily, ending with an ``eof`` token.

    Runs of characters outside the lexical grammar are appended to ``diags``
    (at most :data:`MAX_DIAGNOSTICS` of them) and skipped.
    """
    ascii_only = text.isascii()
    line, line_start = 1, 0
    byte, seen = 0, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        start, end = m.span()
        if kind == "ws":
            nl = text.count("\n", start, end)
            if nl:
                line += nl
                line_start = text.rindex("\n", start, end) + 1
            continue
        if ascii_only:
            byte = start
        else:
            byte += len(text[seen:start].encode("utf-8", "surrogatepass"))
            seen = start
        tok = Tok(kind, m.group(), byte, line, start - line_start + 1)
        if kind == "bad":
            if len(diags) < MAX_DIAGNOSTICS:
                diags.append(Diagnostic("Syntax", f"unexpected character {tok.text[0]!r}", span=tok.span))
            continue
        yield tok
    if not ascii_only:
        byte += len(text[seen:].encode("utf-8", "surrogatepass"))
    else:
        byte = len(text)
    yield Tok("eof", "", byte, line, len(text) - line_start + 1)


def tokenize(text: str):
    """Return ``(tokens, diagnostics)`` for the whole input."""
    diags = []
    return list(scan(text, diags)), diags


class _Fail(Exception):
    pass


class _Parser:
    def __init__(self, text: str):
        self.diags = []
        self._stream = scan(text, self.diags)
        self._cur = next(self._stream)

    # -- token helpers --

    @property
    def cur(self) -> Tok:
        return self._cur

    def at(self, text: str) -> bool:
        t = self.cur
        return t.kind != "eof" and t.text == text

    def at_keyword(self, *words) -> bool:
        return self.cur.kind == "ident" and self.cur.text in words

    def advance(self) -> Tok:
        t = self._cur
        if t.kind != "eof":
            self._cur = next(self._stream)
        return t

    def error(self, message: str, tok: Optional[Tok] = None):
        tok = tok or self.cur
        self.diags.append(Diagnostic("Syntax", message, span=tok.span))
        if len(self.diags) >= MAX_DIAGNOSTICS:
            raise ParseError(self.diags)
        raise _Fail()

    def expect(self, text: str, what: Optional[str] = None) -> Tok:
        if self.at(text):
            return self.advance()
        self.error(f"expected {what or repr(text)}, found {self.describe()}")

    def expect_ident(self, what: str = "identifier") -> Tok:
        if self.cur.kind == "ident":
            return self.advance()
        self.error(f"expected {what}, found {self.describe()}")

    def expect_int(self, signed: bool = False) -> int:
        t = self.cur
        if t.kind == "int" and (signed or not t.text.startswith("-")):
            self.advance()
            return int(t.text)
        self.error(f"expected {'signed ' if signed else ''}integer, found {self.describe()}")

    def describe(self) -> str:
        t = self.cur
        return "end of input" if t.kind == "eof" else repr(t.text)

    def recover(self, *stop_keywords):
        """Skip past the next ';' or up to a closing brace / stop keyword."""
        depth = 0
        while self.cur.kind != "eof":
            t = self.cur
            if depth == 0 and t.kind == "ident" and t.text in stop_keywords:
                return
            if t.text in ("(", "[") and t.kind == "punct":
                depth += 1
            elif t.text in (")", "]") and t.kind == "punct":
                depth = max(0, depth - 1)
            elif t.text == "{" and t.kind == "punct":
                depth += 1
            elif t.text == "}" and t.kind == "punct":
                if depth == 0:
                    return
                depth -= 1
            elif t.text == ";" and depth == 0:
                self.advance()
                return
            self.advance()

    # -- grammar --

    def system(self) -> Optional[GrammarSystem]:
        if not self.at_keyword("system"):
            self.diags.append(
                Diagnostic("Syntax", "expected 'system'", span=self.cur.span)
            )
            return None
        head = self.advance()
        try:
            name = self.expect_ident("system name").text
            self.expect("{")
        except _Fail:
            return None
        components = []
        while self.at_keyword("component"):
            c = self.component()
            if c is not None:
                components.append(c)
        if not components:
            try:
                self.error(f"expected 'component', found {self.describe()}")
            except _Fail:
                self.recover("sync")
        sync = []
        try:
            if not self.at_keyword("sync"):
                self.error(f"expected 'component' or 'sync', found {self.describe()}")
            sync = self.sync()
            self.expect("}")
            if self.cur.kind != "eof":
                self.error(f"unexpected {self.describe()} after end of system")
        except _Fail:
            pass
        return GrammarSystem(name, components, sync, span=head.span)

    def component(self) -> Optional[Component]:
        head = self.advance()
        start = None
        nts = []
        program = 0
        octave = 0
        tokens = []
        rules = []
        name = None
        try:
            name = self.expect_ident("component name").text
            self.expect("{")
            if not self.at_keyword("start"):
                self.error(f"expected 'start', found {self.describe()}")
            self.advance()
            start = self.expect_ident("start symbol").text
            if not self.at_keyword("nonterminals"):
                self.error(f"expected 'nonterminals', found {self.describe()}")
            self.advance()
            nts.append(self.expect_ident("nonterminal").text)
            while self.cur.kind == "ident":
                nts.append(self.advance().text)
            self.expect(";")
        except _Fail:
            self.recover("rule", "tokens", "program", "octave_offset", "component", "sync")
        if self.at_keyword("program"):
            try:
                self.advance()
                program = self.expect_int()
                self.expect(";")
            except _Fail:
                self.recover("rule", "tokens", "octave_offset", "component", "sync")
        if self.at_keyword("octave_offset"):
            try:
                self.advance()
                octave = self.expect_int(signed=True)
                self.expect(";")
            except _Fail:
                self.recover("rule", "tokens", "component", "sync")
        if self.at_keyword("tokens"):
            tokens = self.tokens_block()
        while self.at_keyword("rule"):
            try:
                r = self.rule()
                if r is not None:
                    rules.append(r)
            except _Fail:
                self.recover("rule", "component", "sync")
        try:
            if not rules and not self.at_keyword("rule"):
                self.error(f"expected 'rule', found {self.describe()}")
            self.expect("}", "'rule' or '}'")
        except _Fail:
            self.recover("component", "sync")
            if self.at("}"):
                self.advance()
        if name is None or start is None:
            return None
        return Component(name, nts, tokens, rules, start, program, octave, span=head.span)

    def tokens_block(self) -> list:
        self.advance()
        out = []
        try:
            self.expect("{")
        except _Fail:
            self.recover("rule")
            return out
        while not self.at("}") and self.cur.kind != "eof" and not self.at_keyword("rule"):
            try:
                out.append(self.tokendef())
            except _Fail:
                self.recover("rule")
        try:
            self.expect("}", "'}' closing tokens")
        except _Fail:
            pass
        return out

    def pitch(self) -> str:
        t = self.cur
        if t.kind == "ident" and is_pitch(t.text):
            return self.advance().text
        self.error(f"expected pitch name (c d e f g a h, optional is/es), found {self.describe()}")

    def tokendef(self) -> TokenDef:
        head = self.expect_ident("token name")
        self.expect("=")
        kind = self.expect_ident("'note', 'rest' or 'chord'")
        if kind.text == "note":
            payload = Note(self.pitch())
        elif kind.text == "rest":
            payload = Rest()
        elif kind.text == "chord":
            pitches = [self.pitch()]
            while self.at("+"):
                self.advance()
                pitches.append(self.pitch())
            payload = Chord(tuple(pitches))
        else:
            self.error(f"expected 'note', 'rest' or 'chord', found {kind.text!r}", kind)
        attrs = self.attrs()
        self.expect(";")
        return TokenDef(head.text, payload, attrs, span=head.span)

    def attr(self):
        t = self.cur
        if t.kind == "punct" and t.text == "-":
            self.advance()
            return None
        if t.kind in ("ident", "int"):
            self.advance()
            return t
        self.error(f"expected attribute value, found {self.describe()}")

    def attrs(self) -> AttributeVector:
        self.expect("[")
        slots = [self.attr()]
        for _ in range(3):
            self.expect(",", "',' (attributes have 4 slots: op, dur, reg, dyn)")
            slots.append(self.attr())
        self.expect("]", "']' (attributes have 4 slots: op, dur, reg, dyn)")
        op, dur, reg, dyn = slots
        if op is not None and op.kind != "ident":
            self.error(f"operation must be an identifier, found {op.text!r}", op)
        if dur is not None and dur.text not in DURATIONS:
            self.error(f"duration must be one of e q h f or -, found {dur.text!r}", dur)
        if reg is not None and reg.kind != "int":
            self.error(f"register must be an integer or -, found {reg.text!r}", reg)
        if dyn is not None and dyn.text not in DYNAMICS:
            self.error(f"dynamic must be one of {' '.join(DYNAMICS)} or -, found {dyn.text!r}", dyn)
        return AttributeVector(
            op.text if op else None,
            dur.text if dur else None,
            int(reg.text) if reg else None,
            dyn.text if dyn else None,
        )

    def seq(self, allow_empty: bool) -> tuple:
        out = []
        while self.cur.kind == "ident":
            out.append(self.advance().text)
        if not out and not allow_empty:
            self.error(f"expected symbol, found {self.describe()}")
        return tuple(out)

    def rule(self) -> Optional[ScatteredRule]:
        head = self.advance()
        label = self.expect_int()
        self.expect(":")
        if self.at("("):
            self.advance()
            lhs = [self.expect_ident("nonterminal").text]
            while self.at(","):
                self.advance()
                lhs.append(self.expect_ident("nonterminal").text)
            self.expect(")", "',' or ')'")
        else:
            lhs = [self.expect_ident("nonterminal or '('").text]
        arrow = self.cur
        if arrow.kind != "arrow":
            self.error(f"expected '->', found {self.describe()}")
        self.advance()
        if self.at("("):
            self.advance()
            rhs = [self.seq(allow_empty=True)]
            while self.at(","):
                self.advance()
                rhs.append(self.seq(allow_empty=True))
            self.expect(")", "',' or ')'")
        else:
            rhs = [self.seq(allow_empty=False)]
        self.expect(";")
        if len(lhs) != len(rhs):
            self.diags.append(
                Diagnostic(
                    "Syntax",
                    f"rule {label}: {len(lhs)} left-hand symbols but {len(rhs)} right-hand parts",
                    span=arrow.span,
                )
            )
            return None
        return ScatteredRule(label, tuple(lhs), tuple(rhs), span=head.span)

    def sync(self) -> list:
        self.advance()
        self.expect("{")
        out = []
        while self.at("("):
            head = self.advance()
            try:
                labels = [self.expect_int()]
                while self.at(","):
                    self.advance()
                    labels.append(self.expect_int())
                self.expect(")", "',' or ')'")
                out.append(SyncTuple(tuple(labels), span=head.span))
            except _Fail:
                while self.cur.kind != "eof" and not self.at(")") and not self.at("}"):
                    self.advance()
                if self.at(")"):
                    self.advance()
        if not out:
            self.error(f"expected '(' starting a sync tuple, found {self.describe()}")
        self.expect("}", "'(' or '}'")
        return out


def parse_system(text: str) -> GrammarSystem:
    """Parse ``.mgs`` source.

    Raises :class:`~scatterscore.errors.ParseError` carrying every syntax
    diagnostic found.  Semantic problems (unknown labels, alphabet overlap,
    ...) are left to :func:`~scatterscore.grammar.validate_system`.
    """
    p = _Parser(text)
    try:
        system = p.system()
    except RecursionError:  # pragma: no cover - the grammar is flat
        p.diags.append(Diagnostic("Syntax", "input nested too deeply", span=p.cur.span))
        system = None
    if p.diags or system is None:
        raise ParseError(p.diags)
    return system


def parse_file(path) -> GrammarSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# -- printing -----------------------------------------------------------------


def _attr(value) -> str:
    return "-" if value is None else str(value)


def format_token(t: TokenDef) -> str:
    if isinstance(t.payload, Note):
        payload = f"note {t.payload.pitch}"
    elif isinstance(t.payload, Chord):
        payload = "chord " + "+".join(t.payload.pitches)
    else:
        payload = "rest"
    a = t.attrs
    return f"{t.name} = {payload} [{_attr(a.op)}, {_attr(a.dur)}, {_attr(a.reg)}, {_attr(a.dyn)}];"


def format_rule(r: ScatteredRule) -> str:
    if r.n == 1 and r.rhs[0]:
        return f"rule {r.label}: {r.lhs[0]} -> {' '.join(r.rhs[0])};"
    lhs = r.lhs[0] if r.n == 1 else "(" + ", ".join(r.lhs) + ")"
    rhs = "(" + ", ".join(" ".join(part) for part in r.rhs) + ")"
    return f"rule {r.label}: {lhs} -> {rhs};"


def print_system(s: GrammarSystem) -> str:
    lines = [f"system {s.name} {{"]
    for c in s.components:
        lines.append(f"  component {c.name} {{")
        lines.append(f"    start {c.start}")
        lines.append(f"    nonterminals {' '.join(c.nonterminals)};")
        lines.append(f"    program {c.program};")
        lines.append(f"    octave_offset {c.octave_offset};")
        if c.tokens:
            lines.append("    tokens {")
            lines.extend(f"      {format_token(t)}" for t in c.tokens)
            lines.append("    }")
        lines.extend(f"    {format_rule(r)}" for r in c.rules)
        lines.append("  }")
    lines.append("  sync {")
    lines.extend("    (" + ", ".join(map(str, q.labels)) + ")" for q in s.sync)
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
