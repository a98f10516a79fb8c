"""Privacy with certificates.

A certifying transducer also emits, online, an alternative assignment to the
hidden signals under which the secret takes the other value.  Synthesis goes
through ``Θ = spec ∧ (ψ ↔ ¬ψ')`` over the table extended with one primed output
per hidden signal: a universal co-Büchi automaton for ``Θ`` (the dual of a Büchi
automaton for ``¬Θ``) is solved either by bounded visit counting (a safety
game, no determinization) or by determinization and a parity game.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .automata import (
    AutomatonError, Buchi, CoBuchi, OmegaAutomaton, Parity, complement_dpw, dualize, intersect,
    is_empty, lift, simplify, union, degeneralize,
)
from .games import solve_dpw
from .ltl import And, Formula, Iff, Not, rename
from .privacy import Language, Languages, Verdict, _hidden_mask
from .safra import determinize
from .signals import OUTPUT, Signal, SignalTable
from .tableau import ltl_to_nbw
from .transducer import Transducer

log = logging.getLogger(__name__)

PRIME_PREFIX = "__aux_"
SAFRALESS, COMPLETE = "safraless", "complete"


@dataclass
class CertProblem:
    """The extended table and the automata for ``¬Θ`` (Büchi) and ``Θ`` (universal co-Büchi)."""
    table: SignalTable
    extended: SignalTable
    hidden: tuple
    primed: dict  # hidden signal -> primed output name
    bad: OmegaAutomaton  # NBW for ¬Θ over ``extended``
    ucw: OmegaAutomaton


def primed_names(table: SignalTable, hidden) -> dict:
    names = table.names_of(hidden) if isinstance(hidden, int) else tuple(hidden)
    out = {h: f"{PRIME_PREFIX}{h}" for h in names}
    clash = set(out.values()) & set(table.names)
    if clash:
        raise ValueError(f"signal names clash with the certificate track: {sorted(clash)}")
    return out


def extend_table(table: SignalTable, primed: dict) -> SignalTable:
    return table.extend([Signal(p, OUTPUT) for p in primed.values()], [0] * len(primed))


def _negated_theta_nbw(spec: Language, secret: Language, table, ext, primed) -> OmegaAutomaton:
    if isinstance(spec, Formula) and isinstance(secret, Formula):
        theta = And(spec, Iff(secret, Not(rename(secret, primed))))
        return simplify(ltl_to_nbw(Not(theta), ext))
    # automaton route: ¬Θ = ¬spec ∨ (ψ ∧ ψ') ∨ (¬ψ ∧ ¬ψ'), primes by re-keying letters
    langs = Languages(table)
    pos, neg = langs.pos(secret), langs.neg(secret)
    both_true = degeneralize(intersect([lift(pos, ext), lift(pos, ext, primed)]))
    both_false = degeneralize(intersect([lift(neg, ext), lift(neg, ext, primed)]))
    return simplify(union([lift(langs.neg(spec), ext), both_true, both_false]))


def build_cert_ucw(spec: Language, secret: Language, hidden, table: SignalTable) -> CertProblem:
    """Universal co-Büchi automaton accepting ``w ⊕ w'_H`` iff ``w ⊨ spec`` and ``w'_H`` certifies."""
    primed = primed_names(table, hidden)
    ext = extend_table(table, primed)
    bad = _negated_theta_nbw(spec, secret, table, ext, primed)
    return CertProblem(table, ext, tuple(primed), primed, bad, dualize(bad))


# --- Safraless engine: bounded visit counting -------------------------------------------


def counting_automaton(ucw: OmegaAutomaton, k: int):
    """Deterministic safety automaton for runs of ``ucw`` that visit rejecting states at most ``k`` times.

    A state maps every active UCW state to the largest visit count over the
    runs reaching it.  Transitions that push a count beyond ``k`` are missing.
    Returns the automaton and whether any transition was cut.
    """
    if not isinstance(ucw.acceptance, CoBuchi):
        raise AutomatonError("counting needs a universal co-Büchi automaton")
    rej = ucw.acceptance.rejecting
    n_letters = ucw.table.alphabet_size
    q0 = ucw.initial
    start = tuple(sorted({(q0, 1 if q0 in rej else 0)}))
    if start[0][1] > k:
        return OmegaAutomaton(ucw.table, [[()] * n_letters], 0, Parity((1,)), ["over"]), True
    index = {start: 0}
    order = [start]
    delta = []
    cut = False
    queue = deque(order)
    while queue:
        f = queue.popleft()
        row = []
        for a in range(n_letters):
            best: dict = {}
            over = False
            for q, c in f:
                for t in ucw.delta[q][a]:
                    c2 = c + (1 if t in rej else 0)
                    if c2 > k:
                        over = True
                        break
                    if best.get(t, -1) < c2:
                        best[t] = c2
                if over:
                    break
            if over:
                cut = True
                row.append(())
                continue
            g = tuple(sorted(best.items()))
            j = index.get(g)
            if j is None:
                j = index[g] = len(order)
                order.append(g)
                queue.append(g)
            row.append((j,))
        delta.append(row)
    names = ["{" + ", ".join(f"{ucw.name(q)}:{c}" for q, c in f) + "}" for f in order]
    return OmegaAutomaton(ucw.table, delta, 0, Parity(tuple(2 for _ in order)), names), cut


@dataclass
class CertifiedResult:
    transducer: Optional[Transducer]
    engine: str  # the engine that decided
    bound: Optional[int] = None  # visit bound at which the Safraless engine won
    log: list = field(default_factory=list)

    def __bool__(self):
        return self.transducer is not None


def _split(t: Transducer, cp: CertProblem) -> Transducer:
    """Certifying transducer over the original table from one over the extended table."""
    base, ext = cp.table, cp.extended
    omask = base.output_mask
    labels, certs = [], []
    for lab in t.labels:
        labels.append(lab & omask)
        c = 0
        for h, p in cp.primed.items():
            if lab & ext.bit(p):
                c |= base.bit(h)
        certs.append(c)
    return Transducer(base, [list(r) for r in t.eta], labels, t.initial, certs)


def _join(ct: Transducer, cp: CertProblem) -> Transducer:
    ext = cp.extended
    cert = ct.certificate or [0] * ct.n_states
    labels = []
    for lab, c in zip(ct.labels, cert):
        for h, p in cp.primed.items():
            if c & cp.table.bit(h):
                lab |= ext.bit(p)
        labels.append(lab)
    return Transducer(ext, [list(r) for r in ct.eta], labels, ct.initial)


def _solve_complete(cp: CertProblem) -> Optional[Transducer]:
    good = complement_dpw(determinize(cp.bad))
    t, _, _ = solve_dpw(good, cp.extended)
    return t


def _solve_safraless(cp: CertProblem, max_bound: int, trace: list):
    for k in range(max_bound + 1):
        d, cut = counting_automaton(cp.ucw, k)
        t, _, _ = solve_dpw(d, cp.extended)
        trace.append({"engine": SAFRALESS, "bound": k, "states": d.n_states, "won": t is not None})
        if t is not None:
            return t, k
        if not cut:
            # nothing was cut, so every larger bound gives the same game
            break
    return None, None


def synthesize_certified(spec: Language, secret: Language, hidden, table: SignalTable,
                         engine: str = SAFRALESS, max_bound: Optional[int] = None) -> CertifiedResult:
    """Certifying transducer realizing ``spec`` and certifying that ``secret`` is hidden.

    The Safraless engine tries visit bounds ``0..max_bound`` (default twice the
    UCW size) and hands over to the complete engine when none wins.
    """
    cp = build_cert_ucw(spec, secret, hidden, table)
    trace: list = []
    if engine == SAFRALESS:
        bound = 2 * cp.ucw.n_states if max_bound is None else max_bound
        t, k = _solve_safraless(cp, bound, trace)
        if t is not None:
            return CertifiedResult(_split(t, cp).minimize(), SAFRALESS, k, trace)
    elif engine != COMPLETE:
        raise ValueError(f"unknown engine {engine!r}")
    t = _solve_complete(cp)
    trace.append({"engine": COMPLETE, "won": t is not None})
    return CertifiedResult(_split(t, cp).minimize() if t is not None else None, COMPLETE, None, trace)


def check_certifying(ct: Transducer, spec: Language, secret: Language, hidden,
                     cp: Optional[CertProblem] = None) -> Verdict:
    """Does every input give a computation satisfying ``spec`` whose certificate flips ``secret``?"""
    if ct.certificate is None:
        raise ValueError("the transducer has no certificate labels")
    cp = cp or build_cert_ucw(spec, secret, hidden, ct.table)
    joined = _join(ct, cp)
    wit = is_empty(joined.product(cp.bad))
    if wit is None:
        return Verdict(True)
    w_in = wit.word.restrict(cp.table.input_mask)
    return Verdict(False, w_in, ct.run(w_in))
