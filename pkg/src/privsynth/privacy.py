"""Hiding secrets from an observer of the visible signals.

A computation ``w`` hides secret ``ψ`` under hidden set ``H`` when its noise
set ``noise_H(w)`` holds a word satisfying ``ψ`` and one violating it.  A
conditional secret ``(θ, ψ)`` only has to be hidden when every word of the noise
set satisfies ``θ``.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, Union

from .automata import (
    AutomatonError, Buchi, CoBuchi, GenBuchi, OmegaAutomaton, Parity, apply_noise, complement_dpw,
    degeneralize, dpw_to_nbw, intersect, is_empty, simplify, to_parity, union,
)
from .games import solve_dpw
from .ltl import Formula, Not, atoms
from .safra import determinize
from .signals import LassoWord, SignalTable
from .tableau import ltl_to_nbw
from .transducer import Transducer

log = logging.getLogger(__name__)

Language = Union[Formula, OmegaAutomaton]

PLAIN, KNOWS_SPEC, KNOWS_TRANSDUCER = "plain", "knows-spec", "knows-transducer"


@dataclass(frozen=True)
class SecretSpec:
    secret: Language
    trigger: Optional[Language] = None

    @property
    def conditional(self) -> bool:
        return self.trigger is not None


@dataclass
class PrivacyProblem:
    spec: Language
    secrets: list
    table: SignalTable
    budget: int = 0
    observer: str = PLAIN

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if not self.secrets:
            raise ValueError("a privacy problem needs at least one secret")
        self.secrets = [s if isinstance(s, SecretSpec) else SecretSpec(s) for s in self.secrets]
        for lang in [self.spec] + [x for s in self.secrets for x in (s.secret, s.trigger) if x is not None]:
            _check_language(lang, self.table)


@dataclass
class PrivacySolution:
    hidden: tuple
    transducer: Transducer
    cost: int
    witnesses: dict = field(default_factory=dict)
    log: list = field(default_factory=list)


@dataclass
class Unrealizable:
    log: list = field(default_factory=list)

    def __bool__(self):
        return False


def _check_language(lang, table: SignalTable):
    if isinstance(lang, Formula):
        unknown = atoms(lang) - set(table.names)
        if unknown:
            raise ValueError(f"formula mentions signals outside the table: {sorted(unknown)}")
    elif isinstance(lang, OmegaAutomaton):
        if not lang.table.same_alphabet(table):
            raise ValueError("automaton is over a different signal table")
    else:
        raise TypeError(f"expected an LTL formula or an automaton, got {type(lang).__name__}")


# --- languages as Büchi automata ----------------------------------------------------


def nbw(lang: Language, table: SignalTable) -> OmegaAutomaton:
    """Büchi automaton for ``lang``."""
    if isinstance(lang, Formula):
        return simplify(ltl_to_nbw(lang, table))
    if isinstance(lang.acceptance, Buchi):
        return simplify(lang)
    if isinstance(lang.acceptance, GenBuchi):
        return simplify(degeneralize(lang))
    if isinstance(lang.acceptance, CoBuchi) and not lang.is_deterministic():
        raise AutomatonError("nondeterministic co-Büchi languages are not supported here")
    return simplify(dpw_to_nbw(to_parity(lang)))


def dpw(lang: Language, table: SignalTable) -> OmegaAutomaton:
    """Deterministic parity automaton for ``lang``."""
    if isinstance(lang, OmegaAutomaton) and lang.is_deterministic() and not isinstance(lang.acceptance, GenBuchi):
        return to_parity(lang)
    return determinize(nbw(lang, table))


def negated_nbw(lang: Language, table: SignalTable) -> OmegaAutomaton:
    """Büchi automaton for the complement of ``lang``."""
    if isinstance(lang, Formula):
        return simplify(ltl_to_nbw(Not(lang), table))
    return simplify(dpw_to_nbw(complement_dpw(dpw(lang, table))))


def negated_dpw(lang: Language, table: SignalTable) -> OmegaAutomaton:
    return complement_dpw(dpw(lang, table))


class Languages:
    """Memo of the Büchi automata built for one signal table."""

    def __init__(self, table: SignalTable):
        self.table = table
        self._pos: dict = {}
        self._neg: dict = {}

    @staticmethod
    def _key(lang):
        return lang if isinstance(lang, Formula) else id(lang)

    def pos(self, lang) -> OmegaAutomaton:
        k = self._key(lang)
        if k not in self._pos:
            self._pos[k] = nbw(lang, self.table)
        return self._pos[k]

    def neg(self, lang) -> OmegaAutomaton:
        k = self._key(lang)
        if k not in self._neg:
            self._neg[k] = negated_nbw(lang, self.table)
        return self._neg[k]


# --- monitors ---------------------------------------------------------------------


def _restricted(a: OmegaAutomaton, context: Optional[OmegaAutomaton]) -> OmegaAutomaton:
    if context is None:
        return a
    return simplify(degeneralize(intersect([context, a])))


def secret_condition(secret: SecretSpec, hidden, langs: Languages,
                     context: Optional[OmegaAutomaton] = None) -> OmegaAutomaton:
    """Büchi automaton for the computations that hide ``secret`` under ``hidden``.

    With ``context`` the variants are only drawn from ``L(context)`` (an observer
    who knows that every computation lies there).
    """
    both = simplify(degeneralize(intersect(secret_parts(SecretSpec(secret.secret), hidden, langs, context))))
    if not secret.conditional:
        return both
    untriggered = simplify(apply_noise(_restricted(langs.neg(secret.trigger), context), hidden))
    return simplify(union([untriggered, both]))


def secret_parts(secret: SecretSpec, hidden, langs: Languages,
                 context: Optional[OmegaAutomaton] = None) -> list:
    """Conjuncts of the hiding condition, each a Büchi automaton."""
    if secret.conditional:
        return [secret_condition(secret, hidden, langs, context)]
    return [simplify(apply_noise(_restricted(langs.pos(secret.secret), context), hidden)),
            simplify(apply_noise(_restricted(langs.neg(secret.secret), context), hidden))]


def _hidden_mask(table: SignalTable, hidden) -> int:
    return hidden if isinstance(hidden, int) else table.mask(hidden)


def build_privacy_monitor(spec: Language, secrets: Sequence, hidden, table: SignalTable,
                          langs: Optional[Languages] = None) -> OmegaAutomaton:
    """Büchi automaton for ``L_spec`` intersected with every secret's hiding condition."""
    langs = langs or Languages(table)
    h = _hidden_mask(table, hidden)
    parts = [langs.pos(spec)]
    for s in secrets:
        s = s if isinstance(s, SecretSpec) else SecretSpec(s)
        parts.extend(secret_parts(s, h, langs))
    return simplify(degeneralize(intersect(parts)))


def build_privacy_dpw(spec: Language, secrets: Sequence, hidden, table: SignalTable,
                      langs: Optional[Languages] = None) -> OmegaAutomaton:
    return determinize(build_privacy_monitor(spec, secrets, hidden, table, langs))


# --- hide sets ----------------------------------------------------------------------


def affordable(table: SignalTable, budget: int, names: Sequence[str]) -> bool:
    return table.cost(names) <= budget


def enumerate_hide_sets(table: SignalTable, budget: int) -> list:
    """Inclusion-maximal sets of signals whose cost fits the budget.

    Ordered by decreasing size, then lexicographically by declaration order.
    """
    names = table.names
    n = len(names)
    out = []
    for r in range(n, -1, -1):
        for combo in combinations(range(n), r):
            if sum(table.costs[j] for j in combo) > budget:
                continue
            chosen = set(combo)
            if any(j not in chosen and table.costs[j] + sum(table.costs[x] for x in combo) <= budget
                   for j in range(n)):
                continue
            out.append(tuple(names[j] for j in combo))
    return out


# --- synthesis ------------------------------------------------------------------------


def _attempt(spec, secrets, hidden, table, langs, build):
    """Solve the game for one hide set; the transducer (or ``None``) and a log entry with phase timings."""
    t0 = time.perf_counter()
    m = build(spec, secrets, hidden, table, langs)
    t1 = time.perf_counter()
    d = determinize(m)
    t2 = time.perf_counter()
    t, _, _ = solve_dpw(d, table)
    t3 = time.perf_counter()
    entry = {"hidden": tuple(hidden), "dpw_states": d.n_states, "realizable": t is not None,
             "timings": {"translate": t1 - t0, "determinize": t2 - t1, "solve": t3 - t2}}
    return t, entry


def _attempt_fresh(spec, secrets, hidden, table, build):
    return _attempt(spec, secrets, hidden, table, Languages(table), build)


def synthesize_with_privacy(problem: PrivacyProblem, minimize: bool = True, monitor=None,
                            parallel: int = 1):
    """Search the maximal affordable hide sets in order; the first winning one is then shrunk.

    ``monitor(spec, secrets, hidden, table, langs)`` may replace the plain
    monitor (the knowledge-aware observer plugs in here).  With ``parallel > 1``
    candidates are evaluated in worker processes, batch by batch; the first
    success in candidate order still wins, so the answer does not change.
    """
    table = problem.table
    langs = Languages(table)
    build = monitor or build_privacy_monitor
    trace = []

    def attempt(hidden):
        t, entry = _attempt(problem.spec, problem.secrets, hidden, table, langs, build)
        trace.append(entry)
        log.info("hide set %s: %d-state monitor, %s", hidden, entry["dpw_states"], "won" if t else "lost")
        return t

    def first_winner():
        cands = enumerate_hide_sets(table, problem.budget)
        if parallel <= 1:
            for cand in cands:
                t = attempt(cand)
                if t is not None:
                    return cand, t
            return None
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            for start in range(0, len(cands), parallel):
                batch = cands[start:start + parallel]
                futs = [pool.submit(_attempt_fresh, problem.spec, problem.secrets, c, table, build)
                        for c in batch]
                for cand, fut in zip(batch, futs):
                    t, entry = fut.result()
                    trace.append(entry)
                    if t is not None:
                        for other in futs:
                            other.cancel()
                        return cand, t
        return None

    found = first_winner()
    if found is None:
        return Unrealizable(trace)
    cand, t = found
    hidden = list(cand)
    if minimize:
        for name in list(cand):
            trial = [x for x in hidden if x != name]
            t2 = attempt(trial)
            if t2 is not None:
                hidden, t = trial, t2
    hidden = tuple(hidden)
    return PrivacySolution(hidden, t, table.cost(hidden), log=trace)


# --- checking ----------------------------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    counterexample: Optional[LassoWord] = None  # input lasso
    computation: Optional[LassoWord] = None

    def __bool__(self):
        return self.ok


def _contained(t: Transducer, complement: OmegaAutomaton) -> Verdict:
    """``L(t) ⊆ L`` given an automaton for the complement of ``L``."""
    wit = is_empty(t.product(complement))
    if wit is None:
        return Verdict(True)
    imask = t.table.input_mask
    return Verdict(False, wit.word.restrict(imask), wit.word)


def check_hides(t: Transducer, secret, hidden, langs: Optional[Languages] = None) -> Verdict:
    """Does ``t`` hide ``secret`` for every input when ``hidden`` is not observed?"""
    table = t.table
    langs = langs or Languages(table)
    s = secret if isinstance(secret, SecretSpec) else SecretSpec(secret)
    h = _hidden_mask(table, hidden)
    for part in secret_parts(s, h, langs):
        v = _contained(t, complement_dpw(determinize(part)))
        if not v:
            return v
    return Verdict(True)


def check_spec(t: Transducer, spec: Language, langs: Optional[Languages] = None) -> Verdict:
    """Does every computation of ``t`` satisfy ``spec``?"""
    langs = langs or Languages(t.table)
    return _contained(t, langs.neg(spec))


def validate_solution(problem: PrivacyProblem, sol: PrivacySolution) -> list:
    """Re-check a returned solution; the list of problems found (empty when valid)."""
    issues = []
    table = problem.table
    if table.cost(sol.hidden) > problem.budget:
        issues.append(f"hide set {sol.hidden} costs {table.cost(sol.hidden)} > budget {problem.budget}")
    langs = Languages(table)
    v = check_spec(sol.transducer, problem.spec, langs)
    if not v:
        issues.append(f"specification violated on input {v.counterexample}")
    for k, s in enumerate(problem.secrets):
        v = check_hides(sol.transducer, s, sol.hidden, langs)
        if not v:
            issues.append(f"secret {k} revealed on input {v.counterexample}")
    return issues
