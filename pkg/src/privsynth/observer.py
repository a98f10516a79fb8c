"""Observers that know more than the visible signals.

An observer who knows the system's specification only considers noise variants that
satisfy it.  An observer who knows the transducer only considers variants that
the transducer itself can produce, i.e. computations on inputs that differ from
the real ones on hidden inputs and give the same visible outputs.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .automata import (
    Buchi, OmegaAutomaton, complement_dpw, degeneralize, intersect, is_empty, simplify,
)
from .privacy import (
    KNOWS_SPEC, KNOWS_TRANSDUCER, PLAIN, Language, Languages, PrivacyProblem, SecretSpec, Verdict,
    _contained, _hidden_mask, check_hides, check_spec, secret_parts, synthesize_with_privacy,
)
from .safra import determinize
from .signals import LassoWord, SignalTable, noise_letters
from .transducer import Transducer

log = logging.getLogger(__name__)

MODES = (PLAIN, KNOWS_SPEC, KNOWS_TRANSDUCER)


# --- observer knows what the system must do -------------------------------------------------


def build_know_spec_monitor(spec: Language, secrets: Sequence, hidden, table: SignalTable,
                            langs: Optional[Languages] = None) -> OmegaAutomaton:
    """Büchi automaton for ``A_spec ∧ noise(A_spec ∧ A_ψ) ∧ noise(A_spec ∧ A_¬ψ)`` over all secrets.

    Same signature as the plain monitor so it can drive the synthesis loop.
    """
    langs = langs or Languages(table)
    h = _hidden_mask(table, hidden)
    context = langs.pos(spec)
    parts = [context]
    for s in secrets:
        s = s if isinstance(s, SecretSpec) else SecretSpec(s)
        parts.extend(secret_parts(s, h, langs, context))
    return simplify(degeneralize(intersect(parts)))


def build_know_spec_dpw(spec, secrets, hidden, table, langs=None) -> OmegaAutomaton:
    return determinize(build_know_spec_monitor(spec, secrets, hidden, table, langs))


def synthesize_know_spec(problem: PrivacyProblem, minimize: bool = True):
    return synthesize_with_privacy(problem, minimize=minimize, monitor=build_know_spec_monitor)


def check_hides_know_spec(t: Transducer, secret, hidden, spec: Language,
                          langs: Optional[Languages] = None) -> Verdict:
    """Hiding against an observer who knows every computation satisfies ``spec``."""
    table = t.table
    langs = langs or Languages(table)
    s = secret if isinstance(secret, SecretSpec) else SecretSpec(secret)
    h = _hidden_mask(table, hidden)
    for part in secret_parts(s, h, langs, langs.pos(spec)):
        v = _contained(t, complement_dpw(determinize(part)))
        if not v:
            return v
    return Verdict(True)


# --- observer knows the transducer ------------------------------------------------------


def input_table(table: SignalTable) -> SignalTable:
    """Inputs-only table; its letter ``k`` is ``table.input_letters()[k]``."""
    return SignalTable.make(inputs=table.inputs, cost={x: table.cost_of(x) for x in table.inputs})


def variant_automaton(t: Transducer, target: OmegaAutomaton, hidden_mask: int) -> OmegaAutomaton:
    """Büchi automaton over inputs accepting ``w_I`` iff some variant computation lies in ``L(target)``.

    A variant reads ``w'_I`` equal to ``w_I`` outside the hidden inputs, must
    show the same visible outputs as the real run, and is tracked by
    ``target``.  States are triples (real state, variant state, target state).
    """
    table = t.table
    tin = input_table(table)
    ins = table.input_letters()
    h_in = hidden_mask & table.input_mask
    vis_out = table.output_mask & ~hidden_mask
    acc = target.acceptance.accepting
    start = (t.initial, t.initial, target.initial)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque(order)
    while queue:
        s1, s2, q = queue.popleft()
        row = []
        for i in ins:
            r1 = t.move(s1, i)
            shown = t.labels[r1] & vis_out
            out = set()
            for i2 in noise_letters(i, h_in):
                r2 = t.move(s2, i2)
                if t.labels[r2] & vis_out != shown:
                    continue
                for q2 in target.delta[q][i2 | t.labels[r2]]:
                    key = (r1, r2, q2)
                    j = index.get(key)
                    if j is None:
                        j = index[key] = len(order)
                        order.append(key)
                        queue.append(key)
                    out.add(j)
            row.append(tuple(sorted(out)))
        delta.append(row)
    accepting = frozenset(j for j, (_, _, q) in enumerate(order) if q in acc)
    names = [f"(s{a}, s{b}, {target.name(q)})" for a, b, q in order]
    return OmegaAutomaton(tin, delta, 0, Buchi(accepting), names)


@dataclass
class KnowsTransducerVerdict(Verdict):
    revealed_value: Optional[bool] = None  # the secret's value the observer learns


def _universal(a: OmegaAutomaton):
    """``None`` if ``a`` accepts every word, else a rejected lasso."""
    wit = is_empty(complement_dpw(determinize(a)))
    return None if wit is None else wit.word


def check_hides_knowing_transducer(t: Transducer, secret: Language, hidden,
                                   langs: Optional[Languages] = None) -> KnowsTransducerVerdict:
    """Hiding against an observer who knows ``t``.

    The observer learns the secret on ``w_I`` when all of ``t``'s computations
    that look the same satisfy it (or all violate it).  Hidden iff neither
    happens, i.e. iff both variant automata (for ¬ψ and for ψ) are universal.
    """
    table = t.table
    langs = langs or Languages(table)
    h = _hidden_mask(table, hidden)
    ins = table.input_letters()
    for value, target in ((True, langs.neg(secret)), (False, langs.pos(secret))):
        bad = _universal(variant_automaton(t, target, h))
        if bad is not None:
            w_in = bad.map(lambda k: ins[k])
            return KnowsTransducerVerdict(False, w_in, t.run(w_in), value)
    return KnowsTransducerVerdict(True)


# --- comparison ----------------------------------------------------------------------------


@dataclass
class ObserverReport:
    realizes_spec: bool
    plain: bool
    knows_spec: bool
    knows_transducer: bool

    @property
    def chain_holds(self) -> bool:
        """knows-transducer hidden ⇒ knows-spec hidden ⇒ plain hidden."""
        if not self.realizes_spec:
            return self.knows_spec <= self.plain and self.knows_transducer <= self.plain
        return self.knows_transducer <= self.knows_spec <= self.plain

    def divergence(self) -> Optional[str]:
        if self.plain and not self.knows_spec:
            return "knowing the system spec reveals the secret"
        if self.knows_spec and not self.knows_transducer:
            return "knowing the transducer reveals the secret"
        if self.plain and not self.knows_transducer:
            return "knowing the transducer reveals the secret"
        return None

    def format(self) -> str:
        def word(b):
            return "hidden" if b else "revealed"

        lines = [f"plain: {word(self.plain)}",
                 f"knows-spec: {word(self.knows_spec)}",
                 f"knows-transducer: {word(self.knows_transducer)}"]
        if not self.realizes_spec:
            lines.append("note: the transducer violates its spec formula")
        d = self.divergence()
        if d:
            lines.append(f"divergence: {d}")
        return "\n".join(lines)


def compare_observer_strength(t: Transducer, secret: Language, hidden, spec: Language,
                              langs: Optional[Languages] = None) -> ObserverReport:
    langs = langs or Languages(t.table)
    rep = ObserverReport(
        realizes_spec=bool(check_spec(t, spec, langs)),
        plain=bool(check_hides(t, secret, hidden, langs)),
        knows_spec=bool(check_hides_know_spec(t, secret, hidden, spec, langs)),
        knows_transducer=bool(check_hides_knowing_transducer(t, secret, hidden, langs)),
    )
    if not rep.chain_holds:
        raise AssertionError(f"observer strength chain violated:\n{rep.format()}")
    return rep
