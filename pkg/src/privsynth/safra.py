"""Büchi to deterministic parity automata via compact Safra trees.

A tree is a nested tuple ``(name, label, children)`` with ``label`` a bitmask of
Büchi states and children ordered oldest first.  Names are kept contiguous
(``1..k``) and ordered by age, so a tree over ``n`` Büchi states has at most
``n`` nodes.  Each step reports the smallest name that was removed (odd,
``2e - 1``) or flashed green (even, ``2g``); lower is more important.  These
min-parity priorities are mapped to max-even ranks ``2n + 2 - p``, and a step
without events gets rank 1.
"""
from __future__ import annotations

from collections import deque

from .automata import AutomatonError, Buchi, GenBuchi, OmegaAutomaton, Parity, degeneralize, trim


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Stepper:
    def __init__(self, a: OmegaAutomaton):
        self.a = a
        self.n = a.n_states
        self.fmask = 0
        for q in a.acceptance.accepting:
            self.fmask |= 1 << q
        # succ_mask[letter][q]
        k = a.table.alphabet_size
        self.succ_mask = []
        for letter in range(k):
            col = []
            for q in range(self.n):
                m = 0
                for t in a.delta[q][letter]:
                    m |= 1 << t
                col.append(m)
            self.succ_mask.append(col)
        self._image: dict = {}

    def image(self, label: int, letter: int) -> int:
        key = (label, letter)
        r = self._image.get(key)
        if r is None:
            col = self.succ_mask[letter]
            r = 0
            for q in _bits(label):
                r |= col[q]
            self._image[key] = r
        return r

    def step(self, tree, letter):
        """Return ``(new tree or None, min-parity priority or None)``."""
        fmask = self.fmask

        # update labels and spawn a youngest child holding the accepting states
        def update(node):
            name, label, kids = node
            lab = self.image(label, letter)
            new_kids = [update(k) for k in kids]
            acc = lab & fmask
            if acc:
                new_kids.append([0, acc, []])
            return [name, lab, new_kids]

        root = update(tree)

        # horizontal merge: a state belongs to the oldest branch holding it
        def hmerge(node, taken):
            node[1] &= ~taken
            t = taken
            for k in node[2]:
                hmerge(k, t)
                t |= k[1]

        hmerge(root, 0)

        removed = []

        def drop(node):
            if node[0]:
                removed.append(node[0])
            for k in node[2]:
                drop(k)

        def prune(node):
            keep = []
            for k in node[2]:
                if k[1]:
                    prune(k)
                    keep.append(k)
                else:
                    drop(k)
            node[2] = keep

        if not root[1]:
            return None, None
        prune(root)

        green = []

        def vmerge(node):
            kids = node[2]
            if not kids:
                return
            union = 0
            for k in kids:
                union |= k[1]
            if union == node[1]:
                green.append(node[0])
                for k in kids:
                    drop(k)
                node[2] = []
            else:
                for k in kids:
                    vmerge(k)

        vmerge(root)

        # name the new nodes, then compact names preserving age order
        names = []

        def collect(node):
            names.append(node[0])
            for k in node[2]:
                collect(k)

        collect(root)
        top = max(names)
        fresh = [top]

        def assign(node):
            if node[0] == 0:
                fresh[0] += 1
                node[0] = fresh[0]
            for k in node[2]:
                assign(k)

        assign(root)
        survivors = []

        def collect2(node):
            survivors.append(node[0])
            for k in node[2]:
                collect2(k)

        collect2(root)
        ren = {old: i + 1 for i, old in enumerate(sorted(survivors))}

        def freeze(node):
            return (ren[node[0]], node[1], tuple(freeze(k) for k in node[2]))

        events = [2 * e - 1 for e in removed] + [2 * g for g in green if g]
        return freeze(root), (min(events) if events else None)


def describe(tree, n_states=None) -> str:
    name, label, kids = tree
    body = f"{name}{{{','.join(str(q) for q in _bits(label))}}}"
    if kids:
        body += "(" + " ".join(describe(k) for k in kids) + ")"
    return body


def determinize(a: OmegaAutomaton, prune: bool = True) -> OmegaAutomaton:
    """Deterministic parity automaton with the same language as the Büchi automaton ``a``."""
    if isinstance(a.acceptance, GenBuchi):
        a = degeneralize(a)
    if not isinstance(a.acceptance, Buchi):
        raise AutomatonError("determinize needs a Büchi automaton")
    if prune:
        a = trim(a)
    table = a.table
    k = table.alphabet_size
    if not a.acceptance.accepting:
        return OmegaAutomaton(table, [[()] * k], 0, Parity((1,)), ["empty"])
    st = _Stepper(a)
    top = 2 * st.n + 2

    def rank(p):
        return 1 if p is None else top - p

    start = ((1, 1 << a.initial, ()), 1)
    index = {start: 0}
    order = [start]
    delta = []
    moves: dict = {}
    queue = deque(order)
    while queue:
        tree, _ = queue.popleft()
        out = moves.get(tree)
        if out is None:
            out = []
            for letter in range(k):
                t2, p = st.step(tree, letter)
                out.append(None if t2 is None else (t2, rank(p)))
            moves[tree] = out
        row = []
        for key in out:
            if key is None:
                row.append(())
                continue
            i = index.get(key)
            if i is None:
                i = index[key] = len(order)
                order.append(key)
                queue.append(key)
            row.append((i,))
        delta.append(row)
    ranks = tuple(r for _, r in order)
    names = [f"{describe(t)} /{r}" for t, r in order]
    return OmegaAutomaton(table, delta, 0, Parity(ranks), names)
