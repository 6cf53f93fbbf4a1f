"""Rule application and synchronized derivation over m-forms.

A sentential form is a tuple of symbol names; an m-form is a tuple of m such
forms, one per component.  An embedding is the strictly increasing tuple of
positions at which a rule's left-hand nonterminals are rewritten.

Which occurrences get rewritten is left open by the grammar itself, so every
stepping function takes an occurrence policy: :class:`Leftmost`,
:class:`RandomOccurrence` or :class:`Explicit`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InvalidEmbedding, PolicyMismatch, ScriptStepFailed, TupleInapplicable
from .grammar import GrammarSystem, ScatteredRule, SyncTuple

TERMINAL = "terminal"
STUCK = "stuck"
BUDGET_EXHAUSTED = "budget_exhausted"


def find_embeddings(form: Sequence[str], rule: ScatteredRule) -> list:
    """All strictly increasing position tuples matching ``rule.lhs``, lexicographically."""
    where = [[i for i, x in enumerate(form) if x == a] for a in rule.lhs]
    out = []

    def extend(j, prefix, lo):
        if j == len(where):
            out.append(tuple(prefix))
            return
        for pos in where[j]:
            if pos >= lo:
                prefix.append(pos)
                extend(j + 1, prefix, pos + 1)
                prefix.pop()

    extend(0, [], 0)
    return out


def has_embedding(form: Sequence[str], rule: ScatteredRule) -> bool:
    # greedy leftmost matching suffices for existence
    j = 0
    for x in form:
        if x == rule.lhs[j]:
            j += 1
            if j == len(rule.lhs):
                return True
    return False


def apply_at(form: Sequence[str], rule: ScatteredRule, embedding: Sequence[int]) -> tuple:
    embedding = tuple(embedding)
    if len(embedding) != rule.n:
        raise InvalidEmbedding(f"embedding {embedding} has {len(embedding)} positions, rule {rule.label} needs {rule.n}")
    prev = -1
    for pos, a in zip(embedding, rule.lhs):
        if not prev < pos < len(form) or form[pos] != a:
            raise InvalidEmbedding(f"embedding {embedding} does not match {rule.lhs} in form")
        prev = pos
    out = []
    last = 0
    for pos, part in zip(embedding, rule.rhs):
        out.extend(form[last:pos])
        out.extend(part)
        last = pos + 1
    out.extend(form[last:])
    return tuple(out)


def is_terminal(mform: Sequence[Sequence[str]], system: GrammarSystem) -> bool:
    if len(mform) != system.m:
        return False
    return not any(
        x in c.nonterminal_set for form, c in zip(mform, system.components) for x in form
    )


# -- occurrence policies ------------------------------------------------------


class Leftmost:
    def choose(self, component: int, embeddings: list) -> tuple:
        return embeddings[0]

    def __repr__(self):
        return "Leftmost()"


class RandomOccurrence:
    def __init__(self, seed=None, rng: Optional[random.Random] = None):
        self.rng = rng if rng is not None else random.Random(seed)

    def choose(self, component: int, embeddings: list) -> tuple:
        return self.rng.choice(embeddings)


@dataclass(frozen=True)
class Explicit:
    """Fixed embeddings for one step, one per component."""

    embeddings: tuple

    def __post_init__(self):
        object.__setattr__(self, "embeddings", tuple(tuple(e) for e in self.embeddings))


LEFTMOST = Leftmost()


def _rule_or_none(component, label):
    try:
        return component.rule(label)
    except KeyError:
        return None


def applicable_tuples(mform: Sequence[Sequence[str]], system: GrammarSystem) -> list:
    """Tuples of Q, in declaration order, whose every rule has an embedding."""
    out = []
    for q in system.sync:
        if len(q) != system.m:
            continue
        ok = True
        for form, c, label in zip(mform, system.components, q.labels):
            r = _rule_or_none(c, label)
            if r is None or not has_embedding(form, r):
                ok = False
                break
        if ok:
            out.append(q)
    return out


def sync_step(system: GrammarSystem, mform, q, policy=LEFTMOST) -> tuple:
    """Rewrite all m components at once with the rules named by ``q``.

    Returns ``(new_mform, embeddings)``.
    """
    labels = q.labels if isinstance(q, SyncTuple) else tuple(q)
    if len(labels) != system.m or len(mform) != system.m:
        raise ValueError(f"arity mismatch: tuple {labels}, m-form of {len(mform)}, system of {system.m}")
    rules = []
    candidates = []
    for i, (form, c, label) in enumerate(zip(mform, system.components, labels)):
        r = _rule_or_none(c, label)
        embs = find_embeddings(form, r) if r is not None else []
        if not embs:
            raise TupleInapplicable(labels, i)
        rules.append(r)
        candidates.append(embs)
    if isinstance(policy, Explicit):
        if len(policy.embeddings) != system.m:
            raise PolicyMismatch(f"expected {system.m} embeddings, got {len(policy.embeddings)}")
        for i, e in enumerate(policy.embeddings):
            if e not in candidates[i]:
                raise PolicyMismatch(f"component {i + 1}: {e} is not an embedding of rule {labels[i]}")
        chosen = policy.embeddings
    else:
        chosen = tuple(policy.choose(i, embs) for i, embs in enumerate(candidates))
    new = tuple(apply_at(form, r, e) for form, r, e in zip(mform, rules, chosen))
    return new, chosen


# -- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    labels: tuple
    embeddings: tuple
    result: tuple


@dataclass(frozen=True)
class DerivationTrace:
    start: tuple
    steps: tuple
    status: str

    @property
    def final(self) -> tuple:
        return self.steps[-1].result if self.steps else self.start


def derive_scripted(system: GrammarSystem, script: Iterable, policy=LEFTMOST) -> DerivationTrace:
    """Apply ``script`` from the start m-form.

    ``policy`` is either one policy used for every step or a sequence of
    :class:`Explicit` values, one per step.  A script that ends before the
    m-form is terminal yields status ``stuck``.
    """
    mform = system.start_form
    steps = []
    per_step = isinstance(policy, (list, tuple))
    for k, q in enumerate(script):
        pol = policy[k] if per_step else policy
        try:
            mform, embs = sync_step(system, mform, q, pol)
        except (TupleInapplicable, PolicyMismatch) as exc:
            raise ScriptStepFailed(k, exc) from exc
        labels = q.labels if isinstance(q, SyncTuple) else tuple(q)
        steps.append(Step(labels, embs, mform))
    status = TERMINAL if is_terminal(mform, system) else STUCK
    return DerivationTrace(system.start_form, tuple(steps), status)


def derive_random(system: GrammarSystem, seed: int, max_steps: int, policy=None) -> DerivationTrace:
    """Uniform random choice among applicable tuples, then among embeddings."""
    rng = random.Random(seed)
    if policy is None:
        policy = RandomOccurrence(rng=rng)
    mform = system.start_form
    steps = []
    while True:
        if is_terminal(mform, system):
            status = TERMINAL
            break
        if len(steps) >= max_steps:
            status = BUDGET_EXHAUSTED
            break
        options = applicable_tuples(mform, system)
        if not options:
            status = STUCK
            break
        q = rng.choice(options)
        mform, embs = sync_step(system, mform, q, policy)
        steps.append(Step(q.labels, embs, mform))
    return DerivationTrace(system.start_form, tuple(steps), status)


def replay_trace(system: GrammarSystem, trace: DerivationTrace) -> list:
    """Re-apply each recorded step at its recorded embeddings; return the m-forms."""
    mform = trace.start
    out = []
    for step in trace.steps:
        mform, _ = sync_step(system, mform, step.labels, Explicit(step.embeddings))
        out.append(mform)
    return out


# -- enumeration ---------------------------------------------------------------


def successors(system: GrammarSystem, mform) -> Iterable:
    """Every m-form reachable in one synchronized step (all tuples, all embeddings)."""
    for q in applicable_tuples(mform, system):
        rules = [c.rule(label) for c, label in zip(system.components, q.labels)]
        per_comp = [find_embeddings(form, r) for form, r in zip(mform, rules)]
        for combo in itertools.product(*per_comp):
            yield tuple(apply_at(form, r, e) for form, r, e in zip(mform, rules, combo))


def elimination_costs(component) -> dict:
    """Lower bound, in steps, for rewriting one occurrence of each nonterminal away.

    One step of an n-symbol rule is charged 1/n to each occurrence it
    rewrites, plus the cost of the nonterminals that occurrence turns into.
    Summing over a form bounds the steps its component still needs from
    below; nonterminals that can never vanish cost ``math.inf``.
    """
    nts = component.nonterminal_set
    cost = {x: math.inf for x in nts}
    # optimal elimination trees never repeat a symbol along a path
    for _ in range(len(nts) + 1):
        changed = False
        for r in component.rules:
            share = Fraction(1, r.n)
            for a, part in zip(r.lhs, r.rhs):
                if a not in cost:
                    continue
                c = share + sum((cost[y] for y in part if y in nts), Fraction(0))
                if c < cost[a]:
                    cost[a] = c
                    changed = True
        if not changed:
            break
    return cost


def _steps_needed(mform, costs) -> Fraction:
    best = Fraction(0)
    for form, cost in zip(mform, costs):
        total = sum((cost[x] for x in form if x in cost), Fraction(0))
        if total > best:
            best = total
    return best


@dataclass(frozen=True)
class Enumeration:
    strings: frozenset
    truncated: bool

    def sorted(self) -> list:
        return sorted(self.strings)


def enumerate_mstrings(
    system: GrammarSystem,
    max_steps: int,
    max_results: Optional[int] = None,
    max_length: Optional[int] = None,
) -> Enumeration:
    """Terminal m-strings reachable within ``max_steps`` synchronized steps.

    Breadth-first over deduplicated m-forms.  ``max_length`` discards any
    m-form with a component longer than the bound.  M-forms that provably
    cannot become terminal within the remaining steps are not expanded.
    """
    costs = [elimination_costs(c) for c in system.components]
    found = {}
    truncated = False
    seen = {system.start_form: None}
    frontier = [system.start_form]
    for depth in range(max_steps):
        left = max_steps - depth - 1
        nxt = {}
        for mform in frontier:
            for succ in successors(system, mform):
                if succ in seen or succ in nxt:
                    continue
                if max_length is not None and any(len(f) > max_length for f in succ):
                    continue
                if _steps_needed(succ, costs) > left:
                    continue
                if is_terminal(succ, system):
                    seen[succ] = None
                    if max_results is not None and len(found) >= max_results:
                        truncated = True
                        break
                    found[succ] = None
                else:
                    nxt[succ] = None
            if truncated:
                break
        if truncated:
            break
        seen.update(nxt)
        frontier = list(nxt)
        if not frontier:
            break
    return Enumeration(frozenset(found), truncated)


def membership(system: GrammarSystem, candidate, max_steps: int) -> bool:
    """Bounded check that ``candidate`` is derivable within ``max_steps``.

    This is a semi-decision: ``False`` only means not derivable within the
    bound.
    """
    candidate = tuple(tuple(w) for w in candidate)
    if len(candidate) != system.m:
        return False
    if not is_terminal(candidate, system):
        return False
    # without erasing rules forms never shrink, so longer forms are dead ends
    non_erasing = not any(
        len(part) == 0 for c in system.components for r in c.rules for part in r.rhs
    )
    costs = [elimination_costs(c) for c in system.components]
    seen = {system.start_form}
    frontier = [system.start_form]
    for depth in range(max_steps):
        left = max_steps - depth - 1
        nxt = []
        for mform in frontier:
            for succ in successors(system, mform):
                if succ in seen:
                    continue
                seen.add(succ)
                if succ == candidate:
                    return True
                if _steps_needed(succ, costs) > left:
                    continue
                if non_erasing and any(len(f) > len(w) for f, w in zip(succ, candidate)):
                    continue
                if not is_terminal(succ, system):
                    nxt.append(succ)
        frontier = nxt
        if not frontier:
            break
    return False
