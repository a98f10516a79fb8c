"""Parity games, Zielonka's algorithm, and realizability of deterministic parity specs.

Players: ``EVEN`` (the system) wins a play whose largest priority seen
infinitely often is even; ``ODD`` is the environment.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .automata import AutomatonError, OmegaAutomaton, _accepting_components, to_parity, totalize
from .signals import SignalTable
from .transducer import Transducer

EVEN, ODD = 0, 1
SYSTEM, ENVIRONMENT = EVEN, ODD


@dataclass
class ParityGame:
    owner: list
    priority: list
    succ: list
    initial: int = 0
    labels: Optional[list] = None  # per-vertex edge labels, aligned with succ
    names: Optional[list] = None
    pred: list = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n or len(self.succ) != n:
            raise ValueError("owner, priority and succ must have one entry per vertex")
        pred = [[] for _ in range(n)]
        for v, ws in enumerate(self.succ):
            if not ws:
                raise ValueError(f"vertex {v} has no successor")
            for w in dict.fromkeys(ws):
                pred[w].append(v)
        self.pred = pred

    def __len__(self):
        return len(self.owner)


@dataclass
class Solution:
    winning: tuple  # (even region, odd region) as frozensets
    strategy: dict  # vertex -> chosen successor, for the owner's winning vertices

    def winner(self, v: int) -> int:
        return EVEN if v in self.winning[EVEN] else ODD


def compress_priorities(priority):
    """Map priorities onto a gap-free range starting at 1 or 2, keeping order and parity."""
    distinct = sorted(set(priority))
    table = {}
    cur = None
    for p in distinct:
        if cur is None:
            cur = 2 if p % 2 == 0 else 1
        elif p % 2 != table[prev] % 2:
            cur += 1
        table[p] = cur
        prev = p
    return [table[p] for p in priority]


def attractor(game: ParityGame, player: int, target, arena: set):
    """Vertices of ``arena`` from which ``player`` can force a visit to ``target``.

    Returns the attractor and an attraction strategy for ``player``'s vertices
    outside ``target``: the first successor (edge order) attracted earlier.
    """
    when = {}
    for v in sorted(target):
        when[v] = len(when)
    count = {}
    queue = deque(sorted(target))
    owner, succ, pred = game.owner, game.succ, game.pred
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u in when or u not in arena:
                continue
            if owner[u] == player:
                when[u] = len(when)
                queue.append(u)
            else:
                c = count.get(u)
                if c is None:
                    c = len({w for w in succ[u] if w in arena})
                c -= 1
                count[u] = c
                if c == 0:
                    when[u] = len(when)
                    queue.append(u)
    strategy = {}
    tset = set(target)
    for u, k in when.items():
        if u in tset or owner[u] != player:
            continue
        for w in succ[u]:
            j = when.get(w)
            if j is not None and j < k:
                strategy[u] = w
                break
    return set(when), strategy


def _zielonka(game: ParityGame, arena: set):
    if not arena:
        return (set(), set()), {}
    pr = game.priority
    p = max(pr[v] for v in arena)
    player = p % 2
    opp = 1 - player
    top = {v for v in arena if pr[v] == p}
    a, sa = attractor(game, player, top, arena)
    (w_sub, s_sub) = _zielonka(game, arena - a)
    if not w_sub[opp]:
        strat = dict(s_sub)
        strat.update(sa)
        for v in sorted(top):
            if game.owner[v] == player:
                for w in game.succ[v]:
                    if w in arena:
                        strat[v] = w
                        break
        regions = [None, None]
        regions[player] = set(arena)
        regions[opp] = set()
        return tuple(regions), {v: w for v, w in strat.items() if game.owner[v] == player}
    b, sb = attractor(game, opp, w_sub[opp], arena)
    (w2, s2) = _zielonka(game, arena - b)
    regions = [None, None]
    regions[opp] = w2[opp] | b
    regions[player] = w2[player]
    strat = {}
    for v in regions[player]:
        if game.owner[v] == player and v in s2:
            strat[v] = s2[v]
    for v in regions[opp]:
        if game.owner[v] != opp:
            continue
        if v in w_sub[opp]:
            strat[v] = s_sub[v]
        elif v in b:
            strat[v] = sb[v]
        else:
            strat[v] = s2[v]
    return tuple(regions), strat


def solve_parity(game: ParityGame, check: bool = False) -> Solution:
    """Zielonka's recursive algorithm on a compressed copy of the priorities."""
    work = ParityGame(game.owner, compress_priorities(game.priority), game.succ, game.initial)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(game) + 1000))
    try:
        regions, strat = _zielonka(work, set(range(len(game))))
    finally:
        sys.setrecursionlimit(limit)
    sol = Solution((frozenset(regions[EVEN]), frozenset(regions[ODD])), strat)
    if check and not verify_solution(game, sol):
        raise AssertionError("parity solver produced an inconsistent solution")
    return sol


def _wins_with(game: ParityGame, player: int, region, strategy) -> bool:
    """Does fixing ``strategy`` on ``region`` leave the opponent without escape or winning cycle?"""
    region = set(region)
    opp = 1 - player

    def moves(v):
        if game.owner[v] == player:
            w = strategy.get(v)
            return [w] if w is not None else []
        return list(dict.fromkeys(game.succ[v]))

    for v in region:
        ms = moves(v)
        if not ms or any(w not in region for w in ms):
            return False
    # opponent wins a cycle when its top priority has the opponent's parity
    ranks = [p + 1 if opp == ODD else p for p in game.priority]
    bad = _accepting_components(sorted(region), moves, ("par", ranks), first_only=True)
    return not bad


def verify_solution(game: ParityGame, sol: Solution) -> bool:
    n = len(game)
    even, odd = sol.winning
    if even & odd or len(even) + len(odd) != n:
        return False
    return _wins_with(game, EVEN, even, sol.strategy) and _wins_with(game, ODD, odd, sol.strategy)


# --- realizability --------------------------------------------------------------


@dataclass
class RealizabilityGame:
    game: ParityGame
    dpw: OmegaAutomaton
    table: SignalTable
    inputs: list  # input letters in enumeration order
    outputs: list  # output letters in enumeration order
    sys_vertex: dict  # (d-state, input index) -> vertex


def realizability_game(d: OmegaAutomaton, table: Optional[SignalTable] = None) -> RealizabilityGame:
    """Environment picks an input letter, the system answers with an output letter.

    Vertices ``0..n-1`` are the automaton states (environment to move), then the
    (state, input) pairs (system to move, priority 1), then a losing sink.
    """
    table = table or d.table
    if not d.is_deterministic():
        raise AutomatonError("realizability game needs a deterministic automaton")
    d = to_parity(d)
    n = d.n_states
    ins = table.input_letters()
    outs = table.output_letters()
    sink = n + n * len(ins)
    owner = [ENVIRONMENT] * n + [SYSTEM] * (n * len(ins)) + [ENVIRONMENT]
    priority = list(d.acceptance.ranks) + [1] * (n * len(ins)) + [1]
    succ = []
    labels = [None] * (sink + 1)
    sys_vertex = {}
    for q in range(n):
        succ.append([n + q * len(ins) + k for k in range(len(ins))])
    for q in range(n):
        row = d.delta[q]
        for k, i in enumerate(ins):
            v = n + q * len(ins) + k
            sys_vertex[(q, k)] = v
            succ.append([(row[i | o][0] if row[i | o] else sink) for o in outs])
            labels[v] = list(outs)
    succ.append([sink])
    names = [f"q{q}" for q in range(n)] + [f"q{q}/{table.format_letter(i)}" for q in range(n) for i in ins] + ["sink"]
    game = ParityGame(owner, priority, succ, d.initial, labels, names)
    return RealizabilityGame(game, d, table, ins, outs, sys_vertex)


def extract_transducer(rg: RealizabilityGame, sol: Solution) -> Transducer:
    """Machine whose states are (automaton state, last output) pairs, then Moore-minimized."""
    g, d = rg.game, rg.dpw
    if d.initial not in sol.winning[SYSTEM]:
        raise ValueError("the system does not win from the initial vertex")
    ins, outs = rg.inputs, rg.outputs
    start = (d.initial, 0)
    index = {start: 0}
    order = [start]
    eta = []
    queue = deque(order)
    while queue:
        q, _ = queue.popleft()
        row = []
        for k, i in enumerate(ins):
            v = rg.sys_vertex[(q, k)]
            w = sol.strategy[v]
            j = g.succ[v].index(w)
            o = outs[j]
            key = (w, o)
            if key not in index:
                index[key] = len(order)
                order.append(key)
                queue.append(key)
            row.append(index[key])
        eta.append(row)
    labels = [o for _, o in order]
    t = Transducer(rg.table, eta, labels, 0)
    return t.minimize()


def solve_dpw(d: OmegaAutomaton, table: Optional[SignalTable] = None, check: bool = False):
    """Return ``(transducer or None, game, solution)`` for the deterministic parity spec ``d``."""
    d = totalize(to_parity(d))
    rg = realizability_game(d, table)
    sol = solve_parity(rg.game, check=check)
    if d.initial not in sol.winning[SYSTEM]:
        return None, rg, sol
    return extract_transducer(rg, sol), rg, sol
