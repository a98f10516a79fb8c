import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_formula
from oracles import accepts
from privsynth.automata import GenBuchi, Membership
from privsynth.ltl import eval_on_lasso, parse_ltl, to_nnf
from privsynth.signals import SignalTable, all_lassos, random_lasso
from privsynth.tableau import ltl_to_nbw, ltl_to_ngbw

P = SignalTable.make(outputs=["p"])
PQ = SignalTable.make(outputs=["p", "q"])
SCHED = SignalTable.make(inputs=["req1", "req2"], outputs=["grant1", "grant2"])


def test_true_is_one_universal_state():
    a = ltl_to_ngbw(parse_ltl("true"), P)
    assert a.n_states == 1
    assert all(row == (0,) for row in a.delta[0])
    assert a.acceptance.sets == (frozenset({0}),)


def test_always_p_exhaustive():
    f = parse_ltl("G p")
    a = ltl_to_nbw(f, P)
    for w in all_lassos([0, 1], 2, 2):
        assert Membership(a)(w) == all(x & 1 for x in w.positions())


def test_one_acceptance_set_per_until():
    a = ltl_to_ngbw(to_nnf(parse_ltl("G F p & G F q")), PQ)
    assert isinstance(a.acceptance, GenBuchi) and len(a.acceptance.sets) == 2
    for w in all_lassos(range(4), 2, 2):
        assert accepts(a, w) == eval_on_lasso(parse_ltl("G F p & G F q"), w, PQ)


def test_ngbw_needs_nnf():
    with pytest.raises(ValueError):
        ltl_to_ngbw(parse_ltl("p -> q"), PQ)


def test_scheduler_spec_random_lassos():
    f = parse_ltl("G(!grant1 | !grant2) & G(req1 -> F grant1) & G(req2 -> F grant2)", SCHED)
    a = ltl_to_nbw(f, SCHED)
    member = Membership(a)
    rng = random.Random(4)
    for _ in range(200):
        w = random_lasso(rng, 16, 3, 4)
        assert member(w) == eval_on_lasso(f, w, SCHED)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_translation_against_semantics(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["p", "q"], 7)
    a = ltl_to_nbw(f, PQ)
    for _ in range(25):
        w = random_lasso(rng, 4, 3, 3)
        assert accepts(a, w) == eval_on_lasso(f, w, PQ)
