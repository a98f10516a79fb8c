"""Explicit-alphabet ω-automata and the transformations used by the synthesis pipeline.

``delta[q][a]`` is the sorted tuple of ``a``-successors of ``q``; the empty
tuple stands for ``⊥`` (partial automata are allowed everywhere).  Parity
acceptance is max-even: a run accepts iff the largest rank seen infinitely
often is even.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .signals import LassoWord, SignalTable, noise_letters


@dataclass(frozen=True)
class Buchi:
    accepting: frozenset


@dataclass(frozen=True)
class CoBuchi:
    rejecting: frozenset


@dataclass(frozen=True)
class GenBuchi:
    sets: tuple


@dataclass(frozen=True)
class Parity:
    ranks: tuple

    @property
    def index(self) -> int:
        return max(self.ranks, default=1)


Acceptance = Union[Buchi, CoBuchi, GenBuchi, Parity]


class AutomatonError(ValueError):
    pass


@dataclass(eq=False)
class OmegaAutomaton:
    table: SignalTable
    delta: list
    initial: int
    acceptance: Acceptance
    names: Optional[list] = field(default=None)

    def __post_init__(self):
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        k = self.table.alphabet_size
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise AutomatonError(f"state {q} has {len(row)} letters, expected {k}")
            for succ in row:
                for t in succ:
                    if not 0 <= t < n:
                        raise AutomatonError(f"transition target {t} out of range")
        acc = self.acceptance
        if isinstance(acc, Parity):
            if len(acc.ranks) != n or any(r < 1 for r in acc.ranks):
                raise AutomatonError("parity ranks must be total and at least 1")
        elif isinstance(acc, GenBuchi):
            if not acc.sets:
                raise AutomatonError("generalized Büchi condition needs at least one set")
        elif not isinstance(acc, (Buchi, CoBuchi)):
            raise AutomatonError(f"unknown acceptance {acc!r}")
        if self.names is not None and len(self.names) != n:
            raise AutomatonError("one name per state expected")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def kind(self) -> str:
        return type(self.acceptance).__name__

    def is_deterministic(self) -> bool:
        return all(len(s) <= 1 for row in self.delta for s in row)

    def is_total(self) -> bool:
        return all(s for row in self.delta for s in row)

    def step(self, q: int, a: int) -> Optional[int]:
        s = self.delta[q][a]
        return s[0] if s else None

    def name(self, q: int) -> str:
        if self.names is not None and self.names[q] is not None:
            return str(self.names[q])
        return str(q)

    def transitions(self):
        """Number of (state, letter, successor) triples."""
        return sum(len(s) for row in self.delta for s in row)

    def __repr__(self):
        return f"<{self.kind} automaton: {self.n_states} states over {list(self.table.names)}>"


@dataclass(frozen=True)
class LassoWitness:
    word: LassoWord
    run: Optional[tuple] = None  # (prefix states, loop states)


# --- small constructors -------------------------------------------------------


def universal(table: SignalTable) -> OmegaAutomaton:
    return OmegaAutomaton(table, [[(0,)] * table.alphabet_size], 0, Buchi(frozenset({0})), ["true"])


def empty(table: SignalTable) -> OmegaAutomaton:
    return OmegaAutomaton(table, [[()] * table.alphabet_size], 0, Buchi(frozenset()), ["false"])


def from_function(table: SignalTable, n: int, step, initial: int, acceptance: Acceptance, names=None):
    """Deterministic automaton from ``step(q, letter) -> state or None``."""
    delta = []
    for q in range(n):
        row = []
        for a in range(table.alphabet_size):
            t = step(q, a)
            row.append(() if t is None else (t,))
        delta.append(row)
    return OmegaAutomaton(table, delta, initial, acceptance, names)


# --- acceptance helpers -------------------------------------------------------


def _masks(a: OmegaAutomaton):
    """Generalized-Büchi view: (per-state membership bitmask, full mask)."""
    acc = a.acceptance
    if isinstance(acc, Buchi):
        return [1 if q in acc.accepting else 0 for q in range(a.n_states)], 1
    if isinstance(acc, GenBuchi):
        masks = [0] * a.n_states
        for j, s in enumerate(acc.sets):
            for q in s:
                masks[q] |= 1 << j
        return masks, (1 << len(acc.sets)) - 1
    raise AutomatonError(f"not a Büchi-type condition: {acc!r}")


def _ranks(a: OmegaAutomaton):
    acc = a.acceptance
    if isinstance(acc, Parity):
        return list(acc.ranks)
    if isinstance(acc, CoBuchi):
        return [3 if q in acc.rejecting else 2 for q in range(a.n_states)]
    if isinstance(acc, Buchi):
        return [2 if q in acc.accepting else 1 for q in range(a.n_states)]
    raise AutomatonError(f"no parity view of {acc!r}")


def _cycle_condition(a: OmegaAutomaton):
    if isinstance(a.acceptance, (Buchi, GenBuchi)):
        m, full = _masks(a)
        return ("gen", m, full)
    return ("par", _ranks(a))


# --- graph core ---------------------------------------------------------------


def _tarjan(roots: Iterable, succ, allowed=None):
    """Strongly connected components reachable from ``roots`` (inside ``allowed``)."""
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack: list = []
    out = []
    counter = 0
    for root in roots:
        if root in index or (allowed is not None and root not in allowed):
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ(root)))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if allowed is not None and w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    pushed = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _is_cycle(comp, succ, allowed=None):
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in succ(v) and (allowed is None or v in allowed)


def _accepting_components(roots, succ, cond, first_only=False):
    """Components ``(nodes, groups)`` on which an accepting cycle lives.

    ``groups`` lists, per obligation, the nodes that discharge it; a cycle
    through one node of every group inside ``nodes`` is accepting.
    """
    found = []
    if cond[0] == "gen":
        _, masks, full = cond
        for comp in _tarjan(roots, succ):
            if not _is_cycle(comp, succ):
                continue
            m = 0
            for v in comp:
                m |= masks[v]
            if m == full:
                groups = [[v for v in comp if masks[v] >> j & 1] for j in range(full.bit_length())] or [comp]
                found.append((comp, groups))
                if first_only:
                    return found
        return found
    ranks = cond[1]
    reach = [v for comp in _tarjan(roots, succ) for v in comp]
    evens = sorted({ranks[v] for v in reach if ranks[v] % 2 == 0}, reverse=True)
    for r in evens:
        allowed = {v for v in reach if ranks[v] <= r}
        for comp in _tarjan(reach, succ, allowed):
            tops = [v for v in comp if ranks[v] == r]
            if tops and _is_cycle(comp, lambda v: [w for w in succ(v) if w in allowed]):
                found.append((comp, [tops]))
                if first_only:
                    return found
    return found


def _path(succ_edges, src, targets, allowed=None):
    """Shortest non-empty path ``src → targets``: list of ``(letter, node)`` steps."""
    parent = {}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for a, w in succ_edges(v):
            if allowed is not None and w not in allowed:
                continue
            if w in parent:
                continue
            parent[w] = (v, a)
            if w in targets:
                steps = []
                x = w
                while True:
                    p, b = parent[x]
                    steps.append((b, x))
                    if p == src:
                        break
                    x = p
                steps.reverse()
                return steps
            queue.append(w)
    return None


# --- structural operations ----------------------------------------------------


def _rebuild(a: OmegaAutomaton, keep: Sequence[int], initial: int, extra_names=None) -> OmegaAutomaton:
    """Restrict ``a`` to ``keep`` (in that order); transitions leaving ``keep`` vanish."""
    new = {q: i for i, q in enumerate(keep)}
    delta = [[tuple(sorted(new[t] for t in s if t in new)) for s in a.delta[q]] for q in keep]
    acc = a.acceptance
    if isinstance(acc, Buchi):
        acc2 = Buchi(frozenset(new[q] for q in acc.accepting if q in new))
    elif isinstance(acc, CoBuchi):
        acc2 = CoBuchi(frozenset(new[q] for q in acc.rejecting if q in new))
    elif isinstance(acc, GenBuchi):
        acc2 = GenBuchi(tuple(frozenset(new[q] for q in s if q in new) for s in acc.sets))
    else:
        acc2 = Parity(tuple(acc.ranks[q] for q in keep))
    names = [a.names[q] for q in keep] if a.names is not None else None
    return OmegaAutomaton(a.table, delta, new[initial], acc2, names)


def reachable(a: OmegaAutomaton) -> OmegaAutomaton:
    """Drop unreachable states; states are renumbered in breadth-first order."""
    seen = {a.initial}
    order = [a.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for s in a.delta[q]:
            for t in s:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
    if len(order) == a.n_states and order == list(range(a.n_states)):
        return a
    return _rebuild(a, order, a.initial)


def productive_states(a: OmegaAutomaton) -> set:
    """Reachable states from which some accepting run continues."""
    succ = _succ_fn(a)
    good = set()
    for comp, _ in _accepting_components([a.initial], succ, _cycle_condition(a)):
        good.update(comp)
    return _backward_closure(a, good)


def _succ_fn(a: OmegaAutomaton):
    cache = {}
    delta = a.delta

    def succ(q):
        s = cache.get(q)
        if s is None:
            s = cache[q] = sorted({t for row in (delta[q],) for ts in row for t in ts})
        return s

    return succ


def _backward_closure(a: OmegaAutomaton, good: set) -> set:
    pred: dict = {}
    for q, row in enumerate(a.delta):
        for s in row:
            for t in s:
                pred.setdefault(t, set()).add(q)
    out = set(good)
    queue = deque(good)
    while queue:
        t = queue.popleft()
        for q in pred.get(t, ()):
            if q not in out:
                out.add(q)
                queue.append(q)
    return out


def trim(a: OmegaAutomaton) -> OmegaAutomaton:
    """Keep only reachable states that can still reach an accepting cycle."""
    a = reachable(a)
    good = productive_states(a)
    if a.initial not in good:
        return OmegaAutomaton(a.table, [[()] * a.table.alphabet_size], 0, _empty_like(a.acceptance), None)
    keep = [q for q in range(a.n_states) if q in good]
    return reachable(_rebuild(a, keep, a.initial))


def _empty_like(acc):
    if isinstance(acc, Buchi):
        return Buchi(frozenset())
    if isinstance(acc, CoBuchi):
        return CoBuchi(frozenset({0}))
    if isinstance(acc, GenBuchi):
        return GenBuchi(tuple(frozenset() for _ in acc.sets))
    return Parity((1,))


def totalize(a: OmegaAutomaton) -> OmegaAutomaton:
    """Redirect every ``⊥`` to a fresh rejecting sink (no-op on total automata)."""
    if a.is_total():
        return a
    n = a.n_states
    sink = (n,)
    delta = [[s if s else sink for s in row] for row in a.delta]
    delta.append([sink] * a.table.alphabet_size)
    acc = a.acceptance
    if isinstance(acc, Parity):
        acc = Parity(acc.ranks + (1,))
    elif isinstance(acc, CoBuchi):
        acc = CoBuchi(acc.rejecting | {n})
    names = list(a.names) + ["sink"] if a.names is not None else None
    return OmegaAutomaton(a.table, delta, a.initial, acc, names)


def _as_mask(table: SignalTable, hidden) -> int:
    if isinstance(hidden, int):
        return hidden
    return table.mask(hidden)


def apply_noise(a: OmegaAutomaton, hidden) -> OmegaAutomaton:
    """Automaton for ``noise_H(L(a))``: guess the hidden part of every letter."""
    h = _as_mask(a.table, hidden)
    if h == 0:
        return a
    k = a.table.alphabet_size
    delta = []
    for row in a.delta:
        new_row = [None] * k
        for letter in range(k):
            if new_row[letter] is not None:
                continue
            variants = noise_letters(letter, h)
            succ = set()
            for b in variants:
                succ.update(row[b])
            s = tuple(sorted(succ))
            for b in variants:
                new_row[b] = s
        delta.append(new_row)
    return OmegaAutomaton(a.table, delta, a.initial, a.acceptance, a.names)


def lift(a: OmegaAutomaton, table: SignalTable, rename: Optional[dict] = None) -> OmegaAutomaton:
    """Re-key ``a`` onto ``table``: signal ``x`` of ``a`` is read from ``rename.get(x, x)``.

    Signals of ``table`` that ``a`` does not read are unconstrained.
    """
    rename = rename or {}
    pairs = [(a.table.bit(x), table.bit(rename.get(x, x))) for x in a.table.names]
    proj = []
    for letter in range(table.alphabet_size):
        old = 0
        for ob, nb in pairs:
            if letter & nb:
                old |= ob
        proj.append(old)
    delta = [[row[proj[letter]] for letter in range(table.alphabet_size)] for row in a.delta]
    return OmegaAutomaton(table, delta, a.initial, a.acceptance, a.names)


def degeneralize(a: OmegaAutomaton) -> OmegaAutomaton:
    """Generalized Büchi to Büchi by counting through the acceptance sets."""
    acc = a.acceptance
    if isinstance(acc, Buchi):
        return a
    if not isinstance(acc, GenBuchi) or not acc.sets:
        raise AutomatonError("degeneralize needs a non-empty generalized Büchi condition")
    sets = acc.sets
    k = len(sets)
    start = (a.initial, 0)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque(order)
    while queue:
        q, j = queue.popleft()
        j2 = (j + 1) % k if q in sets[j] else j
        row = []
        for s in a.delta[q]:
            out = []
            for t in s:
                key = (t, j2)
                if key not in index:
                    index[key] = len(order)
                    order.append(key)
                    queue.append(key)
                out.append(index[key])
            row.append(tuple(sorted(out)))
        delta.append(row)
    accepting = frozenset(i for i, (q, j) in enumerate(order) if j == 0 and q in sets[0])
    names = [(a.name(q) if k == 1 else f"{a.name(q)} #{j}") for q, j in order]
    return OmegaAutomaton(a.table, delta, 0, Buchi(accepting), names)


def _product(autos: Sequence[OmegaAutomaton], table: SignalTable):
    start = tuple(x.initial for x in autos)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque(order)
    letters = range(table.alphabet_size)
    while queue:
        qs = queue.popleft()
        rows = [x.delta[q] for x, q in zip(autos, qs)]
        row = []
        for a in letters:
            combos = [()]
            for r in rows:
                s = r[a]
                if not s:
                    combos = []
                    break
                combos = [c + (t,) for c in combos for t in s]
            out = []
            for key in combos:
                i = index.get(key)
                if i is None:
                    i = index[key] = len(order)
                    order.append(key)
                    queue.append(key)
                out.append(i)
            row.append(tuple(sorted(out)))
        delta.append(row)
    return order, delta


def _check_tables(autos):
    t = autos[0].table
    for x in autos[1:]:
        if not x.table.same_alphabet(t):
            raise AutomatonError("automata are over different signal tables")
    return t


def intersect(autos: Sequence[OmegaAutomaton]) -> OmegaAutomaton:
    """Product of Büchi or generalized Büchi automata; one acceptance set per operand set."""
    autos = list(autos)
    if not autos:
        raise AutomatonError("intersect needs at least one automaton")
    table = _check_tables(autos)
    for x in autos:
        if not isinstance(x.acceptance, (Buchi, GenBuchi)):
            raise AutomatonError("intersect takes Büchi or generalized Büchi operands")
    order, delta = _product(autos, table)
    sets = []
    for j, x in enumerate(autos):
        own = [x.acceptance.accepting] if isinstance(x.acceptance, Buchi) else list(x.acceptance.sets)
        for s in own:
            sets.append(frozenset(i for i, qs in enumerate(order) if qs[j] in s))
    names = ["(" + ", ".join(x.name(q) for x, q in zip(autos, qs)) + ")" for qs in order]
    return OmegaAutomaton(table, delta, 0, GenBuchi(tuple(sets)), names)


def union(autos: Sequence[OmegaAutomaton]) -> OmegaAutomaton:
    """Büchi automaton for the union: a fresh initial state joins the operands' initial moves."""
    autos = [degeneralize(x) if isinstance(x.acceptance, GenBuchi) else x for x in autos]
    if not autos:
        raise AutomatonError("union needs at least one automaton")
    table = _check_tables(autos)
    for x in autos:
        if not isinstance(x.acceptance, Buchi):
            raise AutomatonError("union takes Büchi or generalized Büchi operands")
    k = table.alphabet_size
    offsets = []
    n = 1
    for x in autos:
        offsets.append(n)
        n += x.n_states
    delta = [[()] * k]
    accepting = set()
    names = ["init"]
    for j, (x, off) in enumerate(zip(autos, offsets)):
        for row in x.delta:
            delta.append([tuple(t + off for t in s) for s in row])
        accepting.update(q + off for q in x.acceptance.accepting)
        names.extend(f"{j}:{x.name(q)}" for q in range(x.n_states))
    init_row = []
    for a in range(k):
        succ = set()
        for x, off in zip(autos, offsets):
            succ.update(t + off for t in x.delta[x.initial][a])
        init_row.append(tuple(sorted(succ)))
    delta[0] = init_row
    return reachable(OmegaAutomaton(table, delta, 0, Buchi(frozenset(accepting)), names))


def to_parity(a: OmegaAutomaton) -> OmegaAutomaton:
    """Same structure with a parity condition (generalized Büchi is degeneralized first)."""
    if isinstance(a.acceptance, Parity):
        return a
    if isinstance(a.acceptance, GenBuchi):
        a = degeneralize(a)
    return OmegaAutomaton(a.table, a.delta, a.initial, Parity(tuple(_ranks(a))), a.names)


def complement_dpw(d: OmegaAutomaton) -> OmegaAutomaton:
    """Complement of a deterministic parity automaton: totalize, then shift every rank by one."""
    if not d.is_deterministic():
        raise AutomatonError("complement_dpw needs a deterministic automaton")
    d = totalize(to_parity(d))
    return OmegaAutomaton(d.table, d.delta, d.initial, Parity(tuple(r + 1 for r in d.acceptance.ranks)), d.names)


def dpw_to_nbw(d: OmegaAutomaton) -> OmegaAutomaton:
    """Büchi automaton for a parity automaton: guess the top even rank seen infinitely often."""
    d = to_parity(d)
    ranks = d.acceptance.ranks
    evens = sorted({r for r in ranks if r % 2 == 0})
    start = (d.initial, 0)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque(order)

    def target(key):
        i = index.get(key)
        if i is None:
            i = index[key] = len(order)
            order.append(key)
            queue.append(key)
        return i

    while queue:
        q, r = queue.popleft()
        row = []
        for s in d.delta[q]:
            out = set()
            for t in s:
                if r == 0:
                    out.add(target((t, 0)))
                    for e in evens:
                        if ranks[t] <= e:
                            out.add(target((t, e)))
                elif ranks[t] <= r:
                    out.add(target((t, r)))
            row.append(tuple(sorted(out)))
        delta.append(row)
    accepting = frozenset(i for i, (q, r) in enumerate(order) if r and ranks[q] == r)
    names = [d.name(q) if r == 0 else f"{d.name(q)} @{r}" for q, r in order]
    return OmegaAutomaton(d.table, delta, 0, Buchi(accepting), names)


def dualize(a: OmegaAutomaton) -> OmegaAutomaton:
    """Flip Büchi and co-Büchi on the same structure (NBW for ¬L ⇄ UCW for L)."""
    acc = a.acceptance
    if isinstance(acc, Buchi):
        new = CoBuchi(acc.accepting)
    elif isinstance(acc, CoBuchi):
        new = Buchi(acc.rejecting)
    else:
        raise AutomatonError("dualize needs a Büchi or co-Büchi automaton")
    return OmegaAutomaton(a.table, a.delta, a.initial, new, a.names)


# --- emptiness and membership -------------------------------------------------


def is_empty(a: OmegaAutomaton) -> Optional[LassoWitness]:
    """``None`` when ``L(a)`` is empty, otherwise an accepted lasso with its run.

    Büchi-type and parity conditions are read existentially (nondeterministic
    automata); co-Büchi is also read existentially here.
    """
    delta = a.delta
    edge_cache: dict = {}

    def edges(q):
        e = edge_cache.get(q)
        if e is None:
            e = edge_cache[q] = [(letter, t) for letter, s in enumerate(delta[q]) for t in s]
        return e

    succ = _succ_fn(a)
    found = _accepting_components([a.initial], succ, _cycle_condition(a), first_only=True)
    if not found:
        return None
    comp, groups = found[0]
    comp_set = set(comp)
    anchor = min(groups[0])
    prefix_steps = [] if anchor == a.initial else _path(edges, a.initial, {anchor})
    loop_steps = []
    cur = anchor
    for grp in groups[1:]:
        steps = _path(edges, cur, set(grp), comp_set)
        loop_steps += steps
        cur = steps[-1][1]
    loop_steps += _path(edges, cur, {anchor}, comp_set)
    pre_states = [a.initial] + [q for _, q in prefix_steps][:-1] if prefix_steps else []
    loop_states = [anchor] + [q for _, q in loop_steps][:-1]
    word = LassoWord(tuple(x for x, _ in prefix_steps), tuple(x for x, _ in loop_steps))
    return LassoWitness(word, (tuple(pre_states), tuple(loop_states)))


class Membership:
    """Lasso membership for one automaton, memoized per loop.

    For a loop ``u`` the set of states from which some run on ``u^ω`` accepts
    is computed once; a lasso ``v·u^ω`` is then accepted iff a state reached
    after ``v`` lies in that set.
    """

    def __init__(self, a: OmegaAutomaton):
        self.a = a
        self.cond = _cycle_condition(a)
        self.deterministic = a.is_deterministic()
        self._loops: dict = {}

    def good_states(self, loop: tuple) -> frozenset:
        g = self._loops.get(loop)
        if g is None:
            g = self._loops[loop] = self._compute(loop)
        return g

    def _compute(self, loop):
        a = self.a
        n = a.n_states
        m = len(loop)
        delta = a.delta
        # product node p*n + q: at loop position p in state q
        def succ(v):
            p, q = divmod(v, n)
            p2 = p + 1 if p + 1 < m else 0
            return [p2 * n + t for t in delta[q][loop[p]]]

        roots = range(n)  # position 0, every state
        if self.cond[0] == "gen":
            _, masks, full = self.cond
            cond = ("gen", [masks[v % n] for v in range(n * m)], full)
        else:
            ranks = self.cond[1]
            cond = ("par", [ranks[v % n] for v in range(n * m)])
        good = set()
        for comp, _ in _accepting_components(roots, succ, cond):
            good.update(comp)
        if not good:
            return frozenset()
        pred: dict = {}
        seen_nodes = set()
        stack = list(roots)
        seen_nodes.update(stack)
        while stack:
            v = stack.pop()
            for w in succ(v):
                pred.setdefault(w, []).append(v)
                if w not in seen_nodes:
                    seen_nodes.add(w)
                    stack.append(w)
        closure = set(good)
        queue = deque(good)
        while queue:
            w = queue.popleft()
            for v in pred.get(w, ()):
                if v not in closure:
                    closure.add(v)
                    queue.append(v)
        return frozenset(v for v in closure if v < n)

    def after(self, prefix: Sequence[int]) -> set:
        cur = {self.a.initial}
        delta = self.a.delta
        for letter in prefix:
            nxt = set()
            for q in cur:
                nxt.update(delta[q][letter])
            cur = nxt
            if not cur:
                break
        return cur

    def _deterministic(self, w: LassoWord) -> bool:
        a = self.a
        q = run_deterministic(a, w.prefix)
        if q is None:
            return False
        seen = {}
        trail = []
        while q not in seen:
            seen[q] = len(trail)
            for letter in w.loop:
                trail.append(q)
                q = a.step(q, letter)
                if q is None:
                    return False
        cycle = trail[seen[q]:]
        if self.cond[0] == "gen":
            _, masks, full = self.cond
            m = 0
            for x in cycle:
                m |= masks[x]
            return m == full
        ranks = self.cond[1]
        return max(ranks[x] for x in cycle) % 2 == 0

    def __call__(self, w: LassoWord) -> bool:
        if self.deterministic:
            return self._deterministic(w)
        cur = self.after(w.prefix)
        return bool(cur) and not self.good_states(w.loop).isdisjoint(cur)


def member_lasso(a: OmegaAutomaton, w: LassoWord) -> bool:
    """Does some run of ``a`` on ``prefix · loop^ω`` accept?"""
    if not isinstance(a.acceptance, (Buchi, GenBuchi, Parity, CoBuchi)):
        raise AutomatonError(f"unsupported acceptance {a.acceptance!r}")
    return Membership(a)(w)


def check_run(a: OmegaAutomaton, w: LassoWord, run) -> bool:
    """Is ``run`` = (prefix states, loop states) an accepting run of ``a`` on ``w``?"""
    pre, loop = run
    if len(pre) != len(w.prefix) or len(loop) != len(w.loop) or not loop:
        return False
    states = list(pre) + list(loop)
    if states[0] != a.initial:
        return False
    letters = list(w.prefix) + list(w.loop)
    for i, q in enumerate(states):
        nxt = states[i + 1] if i + 1 < len(states) else loop[0]
        if nxt not in a.delta[q][letters[i]]:
            return False
    if isinstance(a.acceptance, (Buchi, GenBuchi)):
        masks, full = _masks(a)
        m = 0
        for q in loop:
            m |= masks[q]
        return m == full
    ranks = _ranks(a)
    return max(ranks[q] for q in loop) % 2 == 0


def run_deterministic(a: OmegaAutomaton, prefix: Sequence[int]) -> Optional[int]:
    q = a.initial
    for letter in prefix:
        q = a.step(q, letter)
        if q is None:
            return None
    return q


def quotient(a: OmegaAutomaton) -> OmegaAutomaton:
    """Merge bisimilar states (same acceptance label, same successor blocks per letter).

    Bisimilar states have the same runs up to renaming, so the language is kept.
    """
    a = reachable(a)
    n = a.n_states
    acc = a.acceptance
    if isinstance(acc, Parity):
        label = list(acc.ranks)
    elif isinstance(acc, (Buchi, GenBuchi)):
        label = _masks(a)[0]
    else:
        label = [q in acc.rejecting for q in range(n)]
    blocks = {}
    cls = [blocks.setdefault(label[q], len(blocks)) for q in range(n)]
    while True:
        sig = {}
        new = [sig.setdefault((cls[q],) + tuple(frozenset(cls[t] for t in s) for s in a.delta[q]), len(sig))
               for q in range(n)]
        if len(sig) == len(blocks):
            break
        blocks = sig
        cls = new
    if len(blocks) == n:
        return a
    reps = {}
    for q in range(n):
        reps.setdefault(cls[q], q)
    k = len(reps)
    delta = [[tuple(sorted({cls[t] for t in s})) for s in a.delta[reps[b]]] for b in range(k)]

    def lift_set(s):
        return frozenset(cls[q] for q in s)

    if isinstance(acc, Buchi):
        acc2 = Buchi(lift_set(acc.accepting))
    elif isinstance(acc, CoBuchi):
        acc2 = CoBuchi(lift_set(acc.rejecting))
    elif isinstance(acc, GenBuchi):
        acc2 = GenBuchi(tuple(lift_set(s) for s in acc.sets))
    else:
        acc2 = Parity(tuple(acc.ranks[reps[b]] for b in range(k)))
    names = [a.names[reps[b]] for b in range(k)] if a.names is not None else None
    return reachable(OmegaAutomaton(a.table, delta, cls[a.initial], acc2, names))


def simplify(a: OmegaAutomaton) -> OmegaAutomaton:
    """Trim then merge bisimilar states."""
    return quotient(trim(a))
