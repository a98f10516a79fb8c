"""Closed systems (no inputs) and the reductions used as fixtures.

Without inputs a transducer has a single computation, so realizability with
privacy is non-emptiness of ``A_spec ∩ noise(A_ψ) ∩ noise(A_¬ψ)``: polynomial
for deterministic inputs.  Searching for the hide set is what makes it hard,
which the vertex-cover fixtures exhibit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .automata import (
    AutomatonError, Buchi, LassoWitness, OmegaAutomaton, apply_noise, complement_dpw, dpw_to_nbw,
    from_function, intersect, is_empty, to_parity, universal,
)
from .privacy import enumerate_hide_sets
from .signals import INPUT, LassoWord, Signal, SignalTable
from .transducer import Transducer


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple  # ((u, v), ...), order matters for the fixtures

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) has an endpoint out of range")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")

    def is_cover(self, vertices) -> bool:
        s = set(vertices)
        return all(u in s or v in s for u, v in self.edges)

    def format(self) -> str:
        return "\n".join([f"{self.vertex_count} {len(self.edges)}"] + [f"{u} {v}" for u, v in self.edges]) + "\n"


def parse_graph(text: str) -> Graph:
    """``n m`` on the first line, then ``m`` lines ``u v`` (0-indexed)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphFormatError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(u), int(v)) for u, v in rows[1:]]
    except ValueError:
        raise GraphFormatError("expected integer pairs, one per line") from None
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph(n, tuple(edges))
    except ValueError as e:
        raise GraphFormatError(str(e)) from None


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((j, (j + 1) % n) for j in range(n)))


def chain_graph(m: int, n: int = 3) -> Graph:
    """``m`` edges walking round an ``n``-cycle; gives long secret chains over few signals."""
    return Graph(n, tuple((j % n, (j + 1) % n) for j in range(m)))


def _vertex_names(g: Graph):
    return [f"v{j}" for j in range(g.vertex_count)]


# --- closed realizability --------------------------------------------------------------


def _require_closed(table: SignalTable):
    if table.inputs:
        raise ValueError(f"closed systems have no inputs, table has {list(table.inputs)}")


def _require_deterministic(a: OmegaAutomaton, what: str):
    if not a.is_deterministic():
        raise AutomatonError(f"{what} must be deterministic")


def closed_monitor(spec: OmegaAutomaton, secret: OmegaAutomaton, hidden) -> OmegaAutomaton:
    """``A_spec ∩ noise(A_ψ) ∩ noise(A_¬ψ)`` with every automaton of polynomial size."""
    _require_deterministic(spec, "specification")
    _require_deterministic(secret, "secret")
    pos = dpw_to_nbw(to_parity(secret))
    neg = dpw_to_nbw(complement_dpw(secret))
    return intersect([dpw_to_nbw(to_parity(spec)), apply_noise(pos, hidden), apply_noise(neg, hidden)])


def closed_realizable(spec: OmegaAutomaton, secret: OmegaAutomaton, hidden) -> Optional[LassoWitness]:
    """A computation satisfying ``spec`` that hides ``secret``, or ``None``."""
    _require_closed(spec.table)
    return is_empty(closed_monitor(spec, secret, hidden))


def closed_search(spec: OmegaAutomaton, secret: OmegaAutomaton, table: SignalTable, budget: int):
    """First affordable maximal hide set that works, with its computation; ``None`` if none."""
    _require_closed(table)
    for hidden in enumerate_hide_sets(table, budget):
        wit = closed_realizable(spec, secret, hidden)
        if wit is not None:
            return hidden, wit
    return None


def lasso_to_transducer(word: LassoWord, table: SignalTable) -> Transducer:
    """Input-free transducer producing ``word``.

    One state per position; a non-empty prefix needs an extra start state
    because the start label is never emitted.
    """
    _require_closed(table)
    p, n = len(word.prefix), len(word.loop)
    labels = list(word.prefix) + list(word.loop)
    eta = [[j + 1] for j in range(p + n - 1)] + [[p]]
    if p == 0:
        return Transducer(table, eta, labels, n - 1)
    return Transducer(table, [[1]] + [[t + 1] for (t,) in eta], [0] + labels, 0)


# --- fixtures ------------------------------------------------------------------------------


class Fixture(NamedTuple):
    spec: OmegaAutomaton
    secret: OmegaAutomaton
    table: SignalTable
    hidden: Optional[tuple] = None


def _only_empty_word(table: SignalTable) -> OmegaAutomaton:
    """2-state DBW accepting exactly ``∅^ω``."""
    return from_function(table, 2, lambda q, a: 0 if q == 0 and a == 0 else 1, 0,
                         Buchi(frozenset({0})), ["zero", "sink"])


def _edge_masks(g: Graph, table: SignalTable):
    names = _vertex_names(g)
    return [table.bit(names[u]) | table.bit(names[v]) for u, v in g.edges]


def _cover_chain(g: Graph, table: SignalTable) -> OmegaAutomaton:
    """Letter ``j`` meets edge ``j`` for every edge; then anything (accepting sink)."""
    masks = _edge_masks(g, table)
    m = len(masks)

    def step(q, a):
        if q == m:
            return m
        return q + 1 if a & masks[q] else None

    return from_function(table, m + 1, step, 0, Buchi(frozenset({m})), [f"q{j + 1}" for j in range(m + 1)])


def _check_edges(g: Graph):
    if not g.edges:
        raise ValueError("the graph needs at least one edge")


def vertex_cover_fixture(g: Graph) -> Fixture:
    """Hiding ``H`` works iff ``H`` is a vertex cover."""
    _check_edges(g)
    table = SignalTable.make(outputs=_vertex_names(g))
    return Fixture(_only_empty_word(table), _cover_chain(g, table), table)


def vertex_cover_knowledge_fixture(g: Graph) -> Fixture:
    """Spec ``{∅^ω} ∪ L_cover``, secret ``L_cover``: for observers who know the system spec."""
    _check_edges(g)
    table = SignalTable.make(outputs=_vertex_names(g))
    masks = _edge_masks(g, table)
    m = len(masks)
    # state: (still all-empty, chain position or None); the pair is deterministic
    pairs = []
    index = {}

    def key(z, c):
        k = (z, c)
        if k not in index:
            index[k] = len(pairs)
            pairs.append(k)
        return index[k]

    key(True, 0)
    delta_f = {}
    j = 0
    while j < len(pairs):
        z, c = pairs[j]
        for a in range(table.alphabet_size):
            z2 = z and a == 0
            if c is None:
                c2 = None
            elif c == m:
                c2 = m
            else:
                c2 = c + 1 if a & masks[c] else None
            delta_f[(j, a)] = None if (not z2 and c2 is None) else key(z2, c2)
        j += 1
    accepting = frozenset(i for i, (z, c) in enumerate(pairs) if z or c == m)
    names = [("zero" if z else "any") + ("" if c is None else f"/q{c + 1}") for z, c in pairs]
    spec = from_function(table, len(pairs), lambda q, a: delta_f[(q, a)], 0, Buchi(accepting), names)
    return Fixture(spec, _cover_chain(g, table), table)


def hiding_hardness_fixture(a: OmegaAutomaton, prefix: str = "__aux_s") -> Fixture:
    """Secret DBW whose hidden input track spells a run of ``a``.

    ``a`` gets a rejecting sink reachable from its initial state on every
    letter, so every word has a rejecting run.  The hidden signals are new
    inputs encoding a state in binary (cost 0, so budget 0 hides exactly them);
    the secret follows the encoded state when it is a successor and blocks
    otherwise.  Some transducer hides the secret iff ``L(a)`` is realizable.
    """
    if not isinstance(a.acceptance, Buchi):
        raise AutomatonError("hiding-hardness fixture needs a Büchi automaton")
    base = a.table
    if any(x.startswith(prefix) for x in base.names):
        raise ValueError(f"signal names must not start with the reserved prefix {prefix!r}")
    n = a.n_states + 1
    sink = n - 1
    k = base.alphabet_size
    delta = [[tuple(s) for s in row] for row in a.delta] + [[(sink,)] * k]
    delta[a.initial] = [tuple(sorted(set(s) | {sink})) for s in delta[a.initial]]
    bits = max(1, (n - 1).bit_length())
    extra = tuple(Signal(f"{prefix}{j}", INPUT) for j in range(bits))
    table = base.extend(extra, [0] * bits)
    width = len(base)

    def step(q, letter):
        sigma = letter & (k - 1)
        s = letter >> width
        return s if s < n and s in delta[q][sigma] else None

    names = list(a.names) + ["sink"] if a.names is not None else None
    secret = from_function(table, n, step, a.initial, Buchi(a.acceptance.accepting), names)
    return Fixture(universal(table), secret, table, tuple(x.name for x in extra))
