import random

import pytest

from oracles import accepts
from privsynth.automata import Buchi, member_lasso
from privsynth.certified import (
    COMPLETE, SAFRALESS, build_cert_ucw, check_certifying, counting_automaton, primed_names, synthesize_certified,
)
from privsynth.ltl import eval_on_lasso, parse_ltl
from privsynth.privacy import Languages, check_hides, check_spec
from privsynth.signals import SignalTable, random_lasso
from privsynth.transducer import Transducer

IO = SignalTable.make(inputs=["i"], outputs=["o"])
IOP = SignalTable.make(inputs=["i"], outputs=["o", "p"])


def test_primed_names_and_clash():
    assert primed_names(IO, ["o"]) == {"o": "__aux_o"}
    tb = SignalTable.make(outputs=["o", "__aux_o"])
    with pytest.raises(ValueError):
        primed_names(tb, ["o"])


def test_bad_automaton_semantics():
    spec, secret = parse_ltl("G(o <-> i)", IOP), parse_ltl("p", IOP)
    cp = build_cert_ucw(spec, secret, ["p"], IOP)
    ext = cp.extended
    theta = parse_ltl("G(o <-> i) & (p <-> !__aux_p)", ext)
    rng = random.Random(0)
    for _ in range(200):
        w = random_lasso(rng, ext.alphabet_size, 2, 3)
        assert accepts(cp.bad, w) == (not eval_on_lasso(theta, w, ext))


def test_counting_is_sound_and_monotone():
    spec, secret = parse_ltl("true", IO), parse_ltl("F o", IO)
    cp = build_cert_ucw(spec, secret, ["o"], IO)
    rng = random.Random(1)
    words = [random_lasso(rng, cp.extended.alphabet_size, 2, 3) for _ in range(200)]
    prev = None
    for k in range(4):
        d, _ = counting_automaton(cp.ucw, k)
        assert d.is_deterministic()
        inside = {w for w in words if member_lasso(d, w)}
        assert all(not accepts(cp.bad, w) for w in inside)  # within the bound means the UCW accepts
        if prev is not None:
            assert prev <= inside
        prev = inside


@pytest.mark.parametrize("engine", [SAFRALESS, COMPLETE])
def test_certified_result_is_checked(engine):
    spec, secret = parse_ltl("G(o <-> i)", IOP), parse_ltl("X p", IOP)
    r = synthesize_certified(spec, secret, ["p"], IOP, engine=engine)
    assert r and r.engine == engine
    t = r.transducer
    assert t.certificate is not None
    assert check_certifying(t, spec, secret, ["p"])
    assert check_spec(t, spec) and check_hides(t.forget_certificate(), secret, ["p"])
    w = random_lasso(random.Random(2), 0, 2, 2, letters=IOP.input_letters())
    comp, alt = t.run(w), t.alternative(w, IOP.mask(["p"]))
    assert eval_on_lasso(secret, comp, IOP) != eval_on_lasso(secret, alt, IOP)


def test_certificate_checker_rejects_a_wrong_certificate():
    spec, secret = parse_ltl("true", IOP), parse_ltl("p", IOP)
    p = IOP.bit("p")
    t = Transducer(IOP, [[1, 1], [1, 1]], [0, 0], 0, [0, 0])  # p off, certificate also off
    v = check_certifying(t, spec, secret, ["p"])
    assert not v and v.counterexample is not None
    good = Transducer(IOP, [[1, 1], [1, 1]], [0, 0], 0, [0, p])
    assert check_certifying(good, spec, secret, ["p"])
    with pytest.raises(ValueError):
        check_certifying(t.forget_certificate(), spec, secret, ["p"])


def test_certificates_cannot_look_ahead():
    secret = parse_ltl("G(o <-> X i)", IO)
    for engine in (SAFRALESS, COMPLETE):
        assert not synthesize_certified(parse_ltl("true", IO), secret, ["o"], IO, engine=engine)


def test_automaton_secret_route_agrees():
    langs = Languages(IOP)
    spec, secret = parse_ltl("G(o <-> i)", IOP), parse_ltl("X p", IOP)
    by_formula = synthesize_certified(spec, secret, ["p"], IOP, engine=COMPLETE)
    by_automaton = synthesize_certified(langs.pos(spec), langs.pos(secret), ["p"], IOP, engine=COMPLETE)
    assert bool(by_formula) == bool(by_automaton)
    assert isinstance(langs.pos(secret).acceptance, Buchi)
    assert check_certifying(by_automaton.transducer, spec, secret, ["p"])


def test_unknown_engine():
    with pytest.raises(ValueError):
        synthesize_certified(parse_ltl("true", IO), parse_ltl("o", IO), ["o"], IO, engine="magic")
