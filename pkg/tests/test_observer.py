import random

from hypothesis import given, settings, strategies as st

from generators import random_formula, random_transducer
from oracles import some_path_accepted, variant_edges, knows_transducer_hidden_on
from privsynth.automata import member_lasso
from privsynth.ltl import Not, parse_ltl
from privsynth.observer import (
    build_know_spec_monitor, check_hides_know_spec, check_hides_knowing_transducer, compare_observer_strength,
    synthesize_know_spec, variant_automaton,
)
from privsynth.privacy import KNOWS_SPEC, PrivacyProblem, SecretSpec, build_privacy_monitor, check_hides
from privsynth.signals import SignalTable, all_lassos
from privsynth.tableau import ltl_to_nbw
from privsynth.transducer import Transducer

VAC = SignalTable.make(inputs=["p1", "p2"], outputs=["q"])
IOP = SignalTable.make(inputs=["i"], outputs=["o", "p"])


def copier():
    q, p1 = VAC.bit("q"), VAC.bit("p1")
    return Transducer(VAC, [[1 if i & p1 else 0 for i in VAC.input_letters()]] * 2, [0, q], 0)


def test_vacuous_spec_example():
    phi, psi = parse_ltl("(q <-> p1) | G p2", VAC), parse_ltl("p1", VAC)
    t = copier()
    rep = compare_observer_strength(t, psi, ["p1", "p2"], phi)
    assert rep.realizes_spec and rep.plain and rep.knows_spec and not rep.knows_transducer
    assert "transducer" in rep.divergence()
    v = check_hides_knowing_transducer(t, psi, ["p1", "p2"])
    assert v.revealed_value is not None and v.counterexample is not None


def test_knows_spec_synthesis_on_vacuous_spec():
    phi, psi = parse_ltl("(q <-> p1) | G p2", VAC), parse_ltl("p1", VAC)
    sol = synthesize_know_spec(PrivacyProblem(phi, [psi], VAC, 2, KNOWS_SPEC))
    assert sol and set(sol.hidden) == {"p1", "p2"}
    assert not synthesize_know_spec(PrivacyProblem(phi, [psi], VAC, 1, KNOWS_SPEC))


def test_divergent_branches_stay_hidden():
    p = IOP.bit("p")
    t = Transducer(IOP, [[1, 2], [1, 2], [1, 2]], [0, 0, p], 0)
    s = parse_ltl("X p", IOP)
    assert check_hides_knowing_transducer(t, s, ["i", "p"])
    assert not check_hides_knowing_transducer(t, s, ["i"])
    assert not check_hides_knowing_transducer(t, s, ["p"])  # i is seen and p follows it


def test_spec_knowledge_removes_variants():
    # spec G o: a plain observer cannot tell o from !o when o is hidden, one who knows G o can
    tb = SignalTable.make(inputs=["i"], outputs=["o"])
    t = Transducer(tb, [[0, 0]], [tb.bit("o")], 0)
    spec, secret = parse_ltl("G o", tb), parse_ltl("o", tb)
    assert check_hides(t, secret, ["o"])
    assert not check_hides_know_spec(t, secret, ["o"], spec)


def test_know_spec_conditional_trigger_restricted_to_spec():
    tb = SignalTable.make(inputs=["i"], outputs=["o"])
    spec = parse_ltl("G o", tb)
    secret = SecretSpec(parse_ltl("i", tb), trigger=parse_ltl("o", tb))
    m = build_know_spec_monitor(spec, [secret], ["o"], tb)
    # on runs satisfying G o the trigger always holds, so hiding i needs i hidden
    on = tb.bit("o")
    w = next(iter(all_lassos([on], 0, 1)))
    assert not member_lasso(m, w)
    # a plain observer also considers variants with o off, which break the trigger
    assert member_lasso(build_privacy_monitor(spec, [secret], ["o"], tb), w)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_variant_automaton_matches_oracle(seed):
    rng = random.Random(seed)
    names = list(IOP.names)
    t = random_transducer(rng, IOP, 3)
    s = random_formula(rng, names, 4)
    hidden = [x for x in names if rng.random() < 0.5]
    mask = IOP.mask(hidden)
    pos, neg = ltl_to_nbw(s, IOP), ltl_to_nbw(Not(s), IOP)
    a_pos = variant_automaton(t, pos, mask)
    ins = IOP.input_letters()
    for w in all_lassos([0, 1], 1, 2):
        w_in = w.map(lambda k: ins[k])
        start, edges = variant_edges(t, w_in, mask)
        assert member_lasso(a_pos, w) == some_path_accepted(start, edges, pos)
    v = check_hides_knowing_transducer(t, s, hidden)
    words = [w.map(lambda k: ins[k]) for w in all_lassos([0, 1], 1, 2)]
    if not v:
        words.append(v.counterexample)
    assert bool(v) == all(knows_transducer_hidden_on(t, w, pos, neg, mask) for w in words)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_strength_chain(seed):
    rng = random.Random(seed)
    names = list(IOP.names)
    t = random_transducer(rng, IOP, 3)
    s, spec = random_formula(rng, names, 4), random_formula(rng, names, 4)
    rep = compare_observer_strength(t, s, [x for x in names if rng.random() < 0.5], spec)
    assert rep.chain_holds
    assert rep.format().startswith("plain: ")
