"""LTL to nondeterministic generalized Büchi automata.

States are pairs ``(obligations, postponed)``: the set of NNF formulas the
rest of the word must satisfy, and the set of until-formulas whose fulfilment
was postponed on the step that entered the state.  One acceptance set per
until-subformula collects the states that did not postpone it.
"""
from __future__ import annotations

from collections import deque

from .automata import GenBuchi, OmegaAutomaton
from .ltl import (
    And, Always, Atom, Const, Eventually, Formula, Next, Not, Or, Release, Until,
    WeakUntil, is_nnf, pretty, to_nnf,
)
from .signals import SignalTable

_TRUE, _FALSE, _LIT, _AND, _OR, _NEXT, _UNTIL, _RELEASE = range(8)


def desugar(f: Formula) -> Formula:
    """Rewrite F, G and W into U and R (input and output in NNF)."""
    t = type(f)
    if t in (Const, Atom, Not):
        return f
    if t is Eventually:
        return Until(Const(True), desugar(f.arg))
    if t is Always:
        return Release(Const(False), desugar(f.arg))
    if t is WeakUntil:
        a, b = desugar(f.left), desugar(f.right)
        return Release(b, Or(a, b))
    if t is Next:
        return Next(desugar(f.arg))
    return t(desugar(f.left), desugar(f.right))


class _Closure:
    """Interned subformulas of a desugared NNF formula, numbered bottom-up."""

    def __init__(self, root: Formula, table: SignalTable):
        self.ids: dict[Formula, int] = {}
        self.op: list[int] = []
        self.args: list[tuple] = []
        self.table = table
        self.root = self._intern(root)
        self.untils = [i for i, o in enumerate(self.op) if o == _UNTIL]

    def _intern(self, f):
        if f in self.ids:
            return self.ids[f]
        t = type(f)
        if t is Const:
            op, args = (_TRUE if f.value else _FALSE), ()
        elif t is Atom:
            op, args = _LIT, (self.table.bit(f.name), True)
        elif t is Not:
            op, args = _LIT, (self.table.bit(f.arg.name), False)
        elif t is Next:
            op, args = _NEXT, (self._intern(f.arg),)
        else:
            a, b = self._intern(f.left), self._intern(f.right)
            op = {And: _AND, Or: _OR, Until: _UNTIL, Release: _RELEASE}[t]
            args = (a, b)
        i = len(self.op)
        self.op.append(op)
        self.args.append(args)
        self.ids[f] = i
        return i

    def expand(self, obligations: tuple[int, ...]):
        """Disjunctive expansion into terms ``(pos, neg, nexts, postponed)``."""
        op, args = self.op, self.args
        terms = []
        stack = [(list(obligations), frozenset(), 0, 0, frozenset(), frozenset())]
        while stack:
            todo, done, pos, neg, nexts, post = stack.pop()
            dead = False
            while todo and not dead:
                g = todo.pop()
                if g in done:
                    continue
                done = done | {g}
                o = op[g]
                if o == _TRUE:
                    continue
                if o == _FALSE:
                    dead = True
                elif o == _LIT:
                    bit, positive = args[g]
                    if positive:
                        pos |= bit
                    else:
                        neg |= bit
                    dead = bool(pos & neg)
                elif o == _AND:
                    todo.extend(args[g])
                elif o == _NEXT:
                    nexts = nexts | {args[g][0]}
                elif o == _OR:
                    a, b = args[g]
                    stack.append((todo + [b], done, pos, neg, nexts, post))
                    todo.append(a)
                elif o == _UNTIL:
                    a, b = args[g]
                    # a U b = b ∨ (a ∧ X(a U b)); the second branch postpones
                    stack.append((todo + [a], done, pos, neg, nexts | {g}, post | {g}))
                    todo.append(b)
                else:
                    a, b = args[g]
                    # a R b = (a ∧ b) ∨ (b ∧ X(a R b))
                    stack.append((todo + [b], done, pos, neg, nexts | {g}, post))
                    todo.extend((b, a))
            if not dead and not any(op[i] == _FALSE for i in nexts):
                nx = tuple(sorted(i for i in nexts if op[i] != _TRUE))
                terms.append((pos, neg, nx, tuple(sorted(post))))
        return _prune_subsumed(terms)


def _prune_subsumed(terms):
    terms = sorted(set(terms), key=lambda t: (len(t[2]), len(t[3]), bin(t[0] | t[1]).count("1"), t))
    kept = []
    for t in terms:
        pos, neg, nx, post = t
        snx, spost = set(nx), set(post)
        if any(k[0] & ~pos == 0 and k[1] & ~neg == 0 and snx.issuperset(k[2]) and spost.issuperset(k[3])
               for k in kept):
            continue
        kept.append(t)
    return kept


def ltl_to_ngbw(f: Formula, table: SignalTable) -> OmegaAutomaton:
    """Generalized Büchi automaton with ``L = L_f``; ``f`` should be in NNF."""
    if not is_nnf(f):
        raise ValueError("ltl_to_ngbw expects a formula in negation normal form")
    cl = _Closure(desugar(f), table)
    root = () if cl.op[cl.root] == _TRUE else (cl.root,)
    start = (root, ())
    index = {start: 0}
    order = [start]
    delta = []
    cache = {}
    letters = range(table.alphabet_size)
    queue = deque([start])
    while queue:
        obl, _ = queue.popleft()
        if obl not in cache:
            cache[obl] = cl.expand(obl)
        row = []
        for a in letters:
            succ = set()
            for pos, neg, nx, post in cache[obl]:
                if a & pos == pos and not a & neg:
                    key = (nx, post)
                    if key not in index:
                        index[key] = len(order)
                        order.append(key)
                        queue.append(key)
                    succ.add(index[key])
            row.append(tuple(sorted(succ)))
        delta.append(row)
    n = len(order)
    if cl.untils:
        sets = tuple(frozenset(i for i, (_, post) in enumerate(order) if u not in post) for u in cl.untils)
    else:
        sets = (frozenset(range(n)),)
    names = [_state_name(cl, obl, post) for obl, post in order]
    return OmegaAutomaton(table, delta, 0, GenBuchi(sets), names)


def _state_name(cl, obl, post):
    inv = {i: f for f, i in cl.ids.items()}
    body = " & ".join(pretty(inv[i]) for i in obl) or "true"
    if post:
        body += " / postponed " + ", ".join(pretty(inv[i]) for i in post)
    return body


def ltl_to_nbw(f: Formula, table: SignalTable) -> OmegaAutomaton:
    """Büchi automaton for an arbitrary formula (NNF taken internally)."""
    from .automata import degeneralize

    return degeneralize(ltl_to_ngbw(to_nnf(f), table))
