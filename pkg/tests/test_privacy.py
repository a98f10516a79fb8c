import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_formula, random_transducer
from oracles import hides_on
from privsynth.automata import member_lasso
from privsynth.ltl import Atom, eval_on_lasso, parse_ltl
from privsynth.privacy import (
    PrivacyProblem, PrivacySolution, SecretSpec, Unrealizable, build_privacy_monitor, check_hides, check_spec,
    enumerate_hide_sets, synthesize_with_privacy, validate_solution,
)
from privsynth.signals import SignalTable, all_lassos, random_lasso
from privsynth.transducer import Transducer, constant

IOP = SignalTable.make(inputs=["i"], outputs=["o", "p"])
IO = SignalTable.make(inputs=["i"], outputs=["o"])
seeds = st.integers(0, 10 ** 9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_monitor_accepts_what_same_shape_variants_show(seed):
    """A same-shape pair of variants with both secret values puts ``w`` in the monitor."""
    rng = random.Random(seed)
    names = list(IOP.names)
    spec, secret = random_formula(rng, names, 4), random_formula(rng, names, 4)
    hidden = [x for x in names if rng.random() < 0.5]
    mask = IOP.mask(hidden)
    m = build_privacy_monitor(spec, [secret], hidden, IOP)
    for w in all_lassos(range(8), 1, 1):
        if eval_on_lasso(spec, w, IOP) and hides_on(w, secret, mask, IOP):
            assert member_lasso(m, w)
        if not eval_on_lasso(spec, w, IOP):
            assert not member_lasso(m, w)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_revealing_counterexample_is_genuine(seed):
    rng = random.Random(seed)
    names = list(IOP.names)
    t = random_transducer(rng, IOP, 3)
    secret = random_formula(rng, names, 4)
    hidden = [x for x in names if rng.random() < 0.5]
    v = check_hides(t, secret, hidden)
    if v:
        return  # only a revealing verdict carries a witness to re-check
    assert v.computation.same_word(t.run(v.counterexample))
    # no unrolling of the revealing computation shows both values
    for pre in range(3):
        for mult in (1, 2):
            w = v.computation.unroll(len(v.computation.prefix) + pre, mult)
            assert not hides_on(w, secret, IOP.mask(hidden), IOP)


def test_hiding_a_signal_that_is_the_secret():
    p = Atom("p")
    t = constant(IOP, IOP.bit("p"))
    assert check_hides(t, p, ["p"])
    v = check_hides(t, p, ["o"])
    assert not v and v.counterexample is not None


def test_conditional_secret_only_needs_hiding_when_triggered():
    o = IOP.bit("o")
    t = constant(IOP, o)  # o always on, p always off
    secret = SecretSpec(parse_ltl("p", IOP), trigger=parse_ltl("!o", IOP))
    assert check_hides(t, secret, [])  # trigger never holds in any variant
    secret = SecretSpec(parse_ltl("p", IOP), trigger=parse_ltl("o", IOP))
    assert not check_hides(t, secret, [])
    assert check_hides(t, secret, ["p"])
    assert check_hides(t, secret, ["o"])  # a variant violates the trigger


@given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.integers(0, 6))
def test_enumerate_hide_sets_maximal_and_ordered(costs, budget):
    names = [f"s{k}" for k in range(len(costs))]
    tb = SignalTable.make(outputs=names, cost=dict(zip(names, costs)))
    sets = enumerate_hide_sets(tb, budget)
    assert len(set(sets)) == len(sets)
    for h in sets:
        assert tb.cost(h) <= budget
        assert all(tb.cost(h) + tb.cost_of(x) > budget for x in names if x not in h)
    sizes = [len(h) for h in sets]
    assert sizes == sorted(sizes, reverse=True)
    for h in sets:
        for g in sets:
            assert h == g or not set(h) < set(g)


def test_synthesis_shrinks_the_hide_set():
    # pairs are tried first: (i, o) loses, (i, p) wins and shrinks to (p,)
    problem = PrivacyProblem(parse_ltl("G(o <-> i)", IOP), [parse_ltl("p", IOP)], IOP, budget=2)
    sol = synthesize_with_privacy(problem)
    assert sol.hidden == ("p",) and sol.cost == 1
    assert validate_solution(problem, sol) == []
    assert [e["hidden"] for e in sol.log][:2] == [("i", "o"), ("i", "p")]
    keep = synthesize_with_privacy(problem, minimize=False)
    assert keep.hidden == ("i", "p")


def test_unrealizable_reports_every_candidate():
    problem = PrivacyProblem(parse_ltl("G(o <-> i)", IO), [parse_ltl("i", IO)], IO, budget=1)
    sol = synthesize_with_privacy(problem)
    assert sol  # hiding i works
    problem = PrivacyProblem(parse_ltl("G(o <-> i)", IO), [parse_ltl("i", IO)], IO, budget=0)
    sol = synthesize_with_privacy(problem)
    assert isinstance(sol, Unrealizable) and not sol
    assert [e["hidden"] for e in sol.log] == [()]


def test_parallel_gives_the_same_answer():
    problem = PrivacyProblem(parse_ltl("G(o <-> i)", IOP), [parse_ltl("p", IOP)], IOP, budget=1)
    a = synthesize_with_privacy(problem)
    b = synthesize_with_privacy(problem, parallel=2)
    assert a.hidden == b.hidden and a.transducer.format() == b.transducer.format()


def test_validate_solution_flags_problems():
    problem = PrivacyProblem(parse_ltl("G(o <-> i)", IO), [parse_ltl("i", IO)], IO, budget=0)
    wrong = PrivacySolution(("i",), constant(IO), 1)
    issues = validate_solution(problem, wrong)
    assert any("budget" in x for x in issues)
    assert any("specification" in x for x in issues)


def test_problem_validation():
    with pytest.raises(ValueError):
        PrivacyProblem(Atom("o"), [], IO)
    with pytest.raises(ValueError):
        PrivacyProblem(Atom("o"), [Atom("o")], IO, budget=-1)
    with pytest.raises(ValueError):
        PrivacyProblem(Atom("zz"), [Atom("o")], IO)


def test_check_spec_counterexample():
    t = Transducer(IO, [[0, 0]], [0], 0)
    v = check_spec(t, parse_ltl("F o", IO))
    assert not v
    assert not eval_on_lasso(parse_ltl("F o", IO), t.run(v.counterexample), IO)
