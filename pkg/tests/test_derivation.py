import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import JAZZ_SCRIPT, TRIO_SCRIPT
from oracles import brute_force_language, random_system
from scatterscore.derivation import (
    BUDGET_EXHAUSTED,
    LEFTMOST,
    STUCK,
    TERMINAL,
    Explicit,
    RandomOccurrence,
    applicable_tuples,
    apply_at,
    derive_random,
    derive_scripted,
    elimination_costs,
    enumerate_mstrings,
    find_embeddings,
    is_terminal,
    membership,
    replay_trace,
    sync_step,
)
from scatterscore.errors import InvalidEmbedding, PolicyMismatch, ScriptStepFailed, TupleInapplicable
from scatterscore.grammar import ScatteredRule


def form(text):
    return tuple(text.split())


def rule(lhs, *rhs):
    return ScatteredRule(1, lhs.split(), [p.split() for p in rhs])


# -- single-component rewriting ---------------------------------------------


def test_no_embedding_without_lhs():
    assert find_embeddings(form("A A B A"), rule("S", "A A B A")) == []


def test_embeddings_lexicographic():
    assert find_embeddings(form("A A A"), rule("A A", "x", "y")) == [(0, 1), (0, 2), (1, 2)]


def test_unique_embedding():
    r = rule("M M M", "x", "x", "x")
    assert find_embeddings(form("M H M H B M H"), r) == [(0, 2, 5)]


def test_apply_start_rule():
    assert apply_at(form("S1"), rule("S1", "A A B A"), (0,)) == form("A A B A")


def test_apply_positional():
    assert apply_at(form("A A A"), rule("A A", "b", "c"), (0, 2)) == form("b A c")


def test_apply_expands_in_place(jazz):
    r = jazz.components[1].rule(4)
    out = apply_at(form("P L P L P L P L"), r, (0, 2, 4))
    t = r.rhs[0]
    assert len(t) == 8
    assert out == t + ("L",) + t + ("L",) + t + form("L P L")


@pytest.mark.parametrize("bad", [(1,), (0, 0), (2, 1), (0, 5), (0,)])
def test_invalid_embedding(bad):
    with pytest.raises(InvalidEmbedding):
        apply_at(form("A B A"), rule("A A", "x", "y"), bad)


def brute_embeddings(f, lhs):
    return [
        idx
        for idx in itertools.combinations(range(len(f)), len(lhs))
        if all(f[i] == a for i, a in zip(idx, lhs))
    ]


forms = st.lists(st.sampled_from("ABC"), max_size=9).map(tuple)
lhss = st.lists(st.sampled_from("ABC"), min_size=1, max_size=3)


@given(forms, lhss)
def test_embeddings_match_brute_force(f, lhs):
    r = ScatteredRule(1, lhs, [["x"]] * len(lhs))
    assert find_embeddings(f, r) == brute_embeddings(f, lhs)


@given(forms, lhss, st.data())
def test_frame_preservation(f, lhs, data):
    rhs = [[f"x{j}", "y"] for j in range(len(lhs))]
    r = ScatteredRule(1, lhs, rhs)
    embs = find_embeddings(f, r)
    if not embs:
        return
    e = data.draw(st.sampled_from(embs))
    out = apply_at(f, r, e)
    # cut the result back into the frame and the substituted parts
    expect = []
    last = 0
    for pos, part in zip(e, rhs):
        expect.extend(f[last:pos])
        expect.extend(part)
        last = pos + 1
    expect.extend(f[last:])
    assert out == tuple(expect)
    assert len(out) == len(f) + len(lhs)


@pytest.mark.parametrize("k", range(1, 9))
def test_embedding_counts(k):
    for n in range(1, k + 1):
        r = ScatteredRule(1, ["A"] * n, [["a"]] * n)
        assert len(find_embeddings(("A",) * k, r)) == math.comb(k, n)


# -- synchronized steps -------------------------------------------------------


def test_start_tuples(jazz):
    assert [q.labels for q in applicable_tuples(jazz.start_form, jazz)] == [(1, 1), (2, 2)]


def test_aaba_tuples(jazz):
    mf = (form("A A B A"), form("A A B A"))
    assert [q.labels for q in applicable_tuples(mf, jazz)] == [(3, 3), (6, 6)]


def test_terminal_has_no_tuples(jazz):
    final = derive_scripted(jazz, JAZZ_SCRIPT).final
    assert applicable_tuples(final, jazz) == []
    with pytest.raises(TupleInapplicable):
        sync_step(jazz, final, (3, 3))


def test_aaba_steps(jazz):
    mf = (form("A A B A"), form("A A B A"))
    mf, embs = sync_step(jazz, mf, (3, 3))
    assert mf == (form("M H M H B M H"), form("P L P L B P L"))
    assert embs == ((0, 1, 3), (0, 1, 3))
    mf, _ = sync_step(jazz, mf, (6, 6))
    assert mf == (form("M H M H M1 H1 M H"), form("P L P L P L P L"))


def test_explicit_policy(jazz):
    mf = (form("M H M H M1 H1 M H"), form("P L P L P L P L"))
    new, embs = sync_step(jazz, mf, (4, 4), Explicit([(0, 2, 6), (0, 4, 6)]))
    assert embs == ((0, 2, 6), (0, 4, 6))
    assert new[1][8] == "L" and new[1][9] == "P"
    with pytest.raises(PolicyMismatch):
        sync_step(jazz, mf, (4, 4), Explicit([(0, 2, 6), (0, 1, 6)]))
    with pytest.raises(PolicyMismatch):
        sync_step(jazz, mf, (4, 4), Explicit([(0, 2, 6)]))


def test_arity_mismatch_refused(jazz):
    with pytest.raises(ValueError):
        sync_step(jazz, jazz.start_form, (2, 2, 2))


def test_is_terminal(jazz):
    assert not is_terminal(jazz.start_form, jazz)
    assert is_terminal((("c_y",), ("c_v",)), jazz)
    assert not is_terminal((("c_y",), ("S2",)), jazz)


# -- controllers ---------------------------------------------------------------


def test_jazz_script(jazz):
    trace = derive_scripted(jazz, JAZZ_SCRIPT)
    assert trace.status == TERMINAL
    assert [len(w) for w in trace.final] == [30, 60]
    assert [s.labels for s in trace.steps] == JAZZ_SCRIPT


def test_empty_script(jazz):
    trace = derive_scripted(jazz, [])
    assert trace.steps == () and trace.status == STUCK


def test_bad_first_step(jazz):
    with pytest.raises(ScriptStepFailed) as info:
        derive_scripted(jazz, [(3, 3)])
    assert info.value.step == 0
    assert isinstance(info.value.cause, TupleInapplicable)


def test_trio_script(trio):
    trace = derive_scripted(trio, TRIO_SCRIPT)
    assert trace.status == TERMINAL


def test_replay(jazz, trio):
    for system, script in ((jazz, JAZZ_SCRIPT), (trio, TRIO_SCRIPT)):
        trace = derive_scripted(system, script)
        assert replay_trace(system, trace) == [s.result for s in trace.steps]


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 99, 2**63 - 1])
def test_allegro_random_terminates(allegro, seed):
    assert derive_random(allegro, seed, 64).status == TERMINAL


def test_random_is_deterministic(allegro, trio):
    for system in (allegro, trio):
        for seed in range(10):
            assert derive_random(system, seed, 64) == derive_random(system, seed, 64)


def test_zero_budget(allegro):
    trace = derive_random(allegro, 5, 0)
    assert trace.steps == () and trace.status == BUDGET_EXHAUSTED


def _outcome(system, script, seed):
    try:
        return derive_scripted(system, script, RandomOccurrence(seed))
    except ScriptStepFailed as exc:
        return exc.step


def test_random_occurrence_policy_in_script(jazz):
    # random occurrences may use up the P that (P, L) later needs
    outcomes = [_outcome(jazz, JAZZ_SCRIPT, seed) for seed in range(20)]
    assert outcomes == [_outcome(jazz, JAZZ_SCRIPT, seed) for seed in range(20)]
    assert any(not isinstance(o, int) and o.status == TERMINAL for o in outcomes)
    assert any(isinstance(o, int) for o in outcomes)


@settings(max_examples=30)
@given(st.integers(0, 2**64 - 1))
def test_random_traces_are_synchronized(seed):
    system = random_system(seed % 500)
    trace = derive_random(system, seed, 20)
    q_set = {q.labels for q in system.sync}
    mf = system.start_form
    for step in trace.steps:
        assert len(step.labels) == system.m == len(step.embeddings)
        assert step.labels in q_set
        nxt, _ = sync_step(system, mf, step.labels, Explicit(step.embeddings))
        assert nxt == step.result
        assert all(len(b) >= len(a) for a, b in zip(mf, nxt))
        mf = nxt
    if trace.status == STUCK:
        assert applicable_tuples(trace.final, system) == []


# -- enumeration ----------------------------------------------------------------


def test_jazz_enumeration(jazz):
    result = enumerate_mstrings(jazz, 6)
    assert result.strings and not result.truncated
    assert all((len(a), len(b)) == (30, 60) for a, b in result.strings)


def test_allegro_enumeration_matches_oracle(allegro):
    engine = enumerate_mstrings(allegro, 8).strings
    oracle = brute_force_language(allegro, 8)
    assert engine == oracle
    assert len(engine) == 1093


def test_truncation(allegro):
    result = enumerate_mstrings(allegro, 8, max_results=10)
    assert result.truncated and len(result.strings) == 10


def test_inapplicable_start_gives_nothing(jazz):
    from scatterscore.grammar import GrammarSystem

    dead = GrammarSystem("dead", jazz.components, [(3, 3)])
    assert enumerate_mstrings(dead, 5).strings == frozenset()


@pytest.mark.parametrize("seed", range(8))
def test_small_systems_match_oracle(seed):
    system = random_system(seed)
    assert enumerate_mstrings(system, 5, max_length=10).strings == brute_force_language(system, 5, 10)


def test_elimination_costs(jazz, allegro):
    g1 = elimination_costs(jazz.components[0])
    assert g1["S1"] == 6
    assert g1["M"] == pytest.approx(1 / 3)
    assert elimination_costs(allegro.components[0])["S1"] == 2


def test_costs_are_lower_bounds(allegro, trio):
    # every recorded terminal derivation is at least as long as the bound
    for system in (allegro, trio):
        costs = [elimination_costs(c) for c in system.components]
        for seed in range(40):
            trace = derive_random(system, seed, 64)
            if trace.status != TERMINAL:
                continue
            for k, step in enumerate(trace.steps):
                left = len(trace.steps) - k - 1
                for f, cost in zip(step.result, costs):
                    assert sum(cost.get(x, 0) for x in f) <= left


# -- membership ------------------------------------------------------------------


def test_membership(jazz):
    word = derive_scripted(jazz, JAZZ_SCRIPT).final
    assert membership(jazz, word, 6)
    assert not membership(jazz, word[:1], 6)
    assert not membership(jazz, (word[0][:29], word[1]), 6)


def test_membership_agrees_with_enumeration(allegro):
    words = enumerate_mstrings(allegro, 4).strings
    for w in sorted(words)[:10]:
        assert membership(allegro, w, 4)
    some = next(iter(words))
    assert not membership(allegro, (some[1], some[0]), 4)


def test_leftmost_is_pure(jazz):
    assert derive_scripted(jazz, JAZZ_SCRIPT, LEFTMOST) == derive_scripted(jazz, JAZZ_SCRIPT)
