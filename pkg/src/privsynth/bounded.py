"""Bounded synthesis with privacy: search small transducers directly.

Candidates are built one transition at a time in breadth-first numbering, so
every machine is met once up to renaming.  After each choice the closed part of
the partial machine is run against a deterministic automaton for the *bad*
computations; a bad lasso there is bad for every completion, and the branch is
cut.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automata import OmegaAutomaton, _accepting_components, complement_dpw
from .privacy import Language, Languages, SecretSpec, _hidden_mask, build_privacy_monitor
from .safra import determinize
from .signals import SignalTable
from .transducer import Transducer

log = logging.getLogger(__name__)


class _Ranks:
    """Rank lookup for product nodes ``s * n + q``."""

    def __init__(self, ranks, n):
        self.ranks, self.n = ranks, n

    def __getitem__(self, v):
        return self.ranks[v % self.n]


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    sizes_tried: list = field(default_factory=list)


class _Search:
    def __init__(self, table: SignalTable, bad: OmegaAutomaton, stats: SearchStats):
        self.table = table
        self.ins = table.input_letters()
        self.outs = table.output_letters()
        self.nq = bad.n_states
        self.step = [[row[a][0] for a in range(table.alphabet_size)] for row in bad.delta]
        self.cond = ("par", _Ranks(bad.acceptance.ranks, self.nq))
        self.q0 = bad.initial
        self.stats = stats

    def violates(self, eta, labels) -> bool:
        """Does the closed part of the partial machine produce a bad lasso?"""
        nq, step, ins = self.nq, self.step, self.ins

        def succ(v):
            s, q = divmod(v, nq)
            out = []
            row = eta[s]
            for k, i in enumerate(ins):
                t = row[k]
                if t is not None:
                    out.append(t * nq + step[q][i | labels[t]])
            return out

        return bool(_accepting_components([self.q0], succ, self.cond, first_only=True))

    def run(self, n: int) -> Optional[Transducer]:
        k = len(self.ins)
        for lab0 in self.outs:
            eta = [[None] * k]
            labels = [lab0]
            found = self._extend(eta, labels, 0, n)
            if found is not None:
                return found
        return None

    def _extend(self, eta, labels, slot, n):
        k = len(self.ins)
        s, j = divmod(slot, k)
        if s == len(eta):
            return Transducer(self.table, [list(r) for r in eta], list(labels), 0)
        options = [(t, None) for t in range(len(eta))]
        if len(eta) < n:
            options += [(len(eta), o) for o in self.outs]
        for t, lab in options:
            self.stats.nodes += 1
            if lab is not None:
                eta.append([None] * k)
                labels.append(lab)
            eta[s][j] = t
            if self.violates(eta, labels):
                self.stats.pruned += 1
            else:
                found = self._extend(eta, labels, slot + 1, n)
                if found is not None:
                    return found
            eta[s][j] = None
            if lab is not None:
                eta.pop()
                labels.pop()
        return None


def bad_computations(spec: Language, secrets: Sequence, hidden, table: SignalTable,
                     langs: Optional[Languages] = None, monitor=None) -> OmegaAutomaton:
    """Deterministic parity automaton for computations outside the privacy monitor."""
    build = monitor or build_privacy_monitor
    return complement_dpw(determinize(build(spec, secrets, hidden, table, langs or Languages(table))))


def search_bounded(table: SignalTable, bad: OmegaAutomaton, n: int,
                   stats: Optional[SearchStats] = None) -> Optional[Transducer]:
    """Transducer with at most ``n`` states none of whose computations ``bad`` accepts."""
    if n < 1:
        raise ValueError("the state bound must be at least 1")
    return _Search(table, bad, stats or SearchStats()).run(n)


def bounded_synthesis(spec: Language, secrets: Sequence, hidden, table: SignalTable, n: int,
                      minimal: bool = True, monitor=None, stats: Optional[SearchStats] = None):
    """Transducer with at most ``n`` states realizing ``spec`` while hiding every secret.

    With ``minimal`` the bound is raised from 1, so the result has the least
    possible number of states.
    """
    if n < 1:
        raise ValueError("the state bound must be at least 1")
    stats = stats or SearchStats()
    secrets = [s if isinstance(s, SecretSpec) else SecretSpec(s) for s in secrets]
    bad = bad_computations(spec, secrets, _hidden_mask(table, hidden), table, monitor=monitor)
    for k in (range(1, n + 1) if minimal else [n]):
        stats.sizes_tried.append(k)
        t = _Search(table, bad, stats).run(k)
        if t is not None:
            log.info("bounded search: %d-state machine after %d nodes", t.n_states, stats.nodes)
            return t
    return None
