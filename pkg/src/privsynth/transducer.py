"""Moore-style (I/O)-transducers and their interaction with automata.

Timing: on input ``i_j`` the machine moves to ``s_{j+1} = η(s_j, i_j)`` and the
``j``-th letter of the computation is ``i_j ∪ τ(s_{j+1})``; the label of the
initial state is never emitted.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .automata import Buchi, OmegaAutomaton
from .signals import LassoWord, SignalTable


class TransducerFormatError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass(eq=False)
class Transducer:
    table: SignalTable
    eta: list  # eta[s][k]: successor on the k-th input letter
    labels: list  # output letter (bitmask over the table) per state
    initial: int = 0
    certificate: Optional[list] = None  # hidden-signal letter per state, for certifying machines

    def __post_init__(self):
        self._ins = self.table.input_letters()
        self._pos = {i: k for k, i in enumerate(self._ins)}
        n = len(self.eta)
        if len(self.labels) != n:
            raise ValueError("one label per state expected")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        om = self.table.output_mask
        for s, row in enumerate(self.eta):
            if len(row) != len(self._ins):
                raise ValueError(f"state {s}: transition function is not total")
            if any(not 0 <= t < n for t in row):
                raise ValueError(f"state {s}: successor out of range")
            if self.labels[s] & ~om:
                raise ValueError(f"state {s}: label sets non-output signals")
        if self.certificate is not None and len(self.certificate) != n:
            raise ValueError("one certificate label per state expected")

    @property
    def n_states(self) -> int:
        return len(self.eta)

    @property
    def input_letters(self) -> list:
        return list(self._ins)

    def move(self, s: int, letter: int) -> int:
        return self.eta[s][self._pos[letter & self.table.input_mask]]

    def run(self, w_in: LassoWord, with_states: bool = False):
        """The computation on the input lasso ``w_in`` (letters are masked to the inputs)."""
        imask = self.table.input_mask
        s = self.initial
        out: list = []
        states: list = []
        for i in w_in.prefix:
            i &= imask
            s = self.move(s, i)
            out.append(i | self.labels[s])
            states.append(s)
        seen: dict = {}
        while True:
            if s in seen:
                cut = seen[s]
                word = LassoWord(tuple(out[:cut]), tuple(out[cut:]))
                return (word, (tuple(states[:cut]), tuple(states[cut:]))) if with_states else word
            seen[s] = len(out)
            for i in w_in.loop:
                i &= imask
                s = self.move(s, i)
                out.append(i | self.labels[s])
                states.append(s)

    def alternative(self, w_in: LassoWord, hidden_mask: int) -> LassoWord:
        """Computation with the hidden signals replaced by the certificate track."""
        word, (pre, loop) = self.run(w_in, with_states=True)
        cert = self.certificate or [0] * self.n_states

        def swap(letter, s):
            return (letter & ~hidden_mask) | (cert[s] & hidden_mask)

        return LassoWord(tuple(swap(a, s) for a, s in zip(word.prefix, pre)),
                         tuple(swap(a, s) for a, s in zip(word.loop, loop)))

    def reachable(self) -> "Transducer":
        """Drop unreachable states and renumber breadth-first (input-letter order)."""
        order = [self.initial]
        index = {self.initial: 0}
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.eta[s]:
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                    queue.append(t)
        eta = [[index[t] for t in self.eta[s]] for s in order]
        labels = [self.labels[s] for s in order]
        cert = [self.certificate[s] for s in order] if self.certificate is not None else None
        return Transducer(self.table, eta, labels, 0, cert)

    def minimize(self) -> "Transducer":
        """Moore minimization by partition refinement, canonically renumbered."""
        t = self.reachable()
        cert = t.certificate or [0] * t.n_states
        block = {}
        cls = [block.setdefault((t.labels[s], cert[s]), len(block)) for s in range(t.n_states)]
        while True:
            sig = {}
            new = [sig.setdefault((cls[s], tuple(cls[x] for x in t.eta[s])), len(sig)) for s in range(t.n_states)]
            if len(sig) == len(set(cls)):
                break
            cls = new
        reps = {}
        for s in range(t.n_states):
            reps.setdefault(cls[s], s)
        k = len(reps)
        eta = [[cls[x] for x in t.eta[reps[b]]] for b in range(k)]
        labels = [t.labels[reps[b]] for b in range(k)]
        certs = [cert[reps[b]] for b in range(k)] if t.certificate is not None else None
        return Transducer(t.table, eta, labels, cls[t.initial], certs).reachable()

    def forget_certificate(self) -> "Transducer":
        return Transducer(self.table, self.eta, self.labels, self.initial, None)

    def to_automaton(self) -> OmegaAutomaton:
        """Büchi automaton (all states accepting) for the set of computations."""
        n = self.n_states
        k = self.table.alphabet_size
        delta = [[()] * k for _ in range(n)]
        for s in range(n):
            row = delta[s]
            for i in self._ins:
                t = self.move(s, i)
                row[i | self.labels[t]] = (t,)
        return OmegaAutomaton(self.table, delta, self.initial, Buchi(frozenset(range(n))),
                              [f"s{s}" for s in range(n)])

    def product(self, a: OmegaAutomaton) -> OmegaAutomaton:
        """Automaton for ``L(self) ∩ L(a)``; acceptance is taken from ``a``."""
        from .automata import CoBuchi, GenBuchi, Parity

        if not a.table.same_alphabet(self.table):
            raise ValueError("transducer and automaton use different signal tables")
        k = self.table.alphabet_size
        start = (self.initial, a.initial)
        index = {start: 0}
        order = [start]
        delta = []
        queue = deque(order)
        while queue:
            s, q = queue.popleft()
            row = [()] * k
            for i in self._ins:
                t = self.move(s, i)
                letter = i | self.labels[t]
                out = []
                for q2 in a.delta[q][letter]:
                    key = (t, q2)
                    j = index.get(key)
                    if j is None:
                        j = index[key] = len(order)
                        order.append(key)
                        queue.append(key)
                    out.append(j)
                row[letter] = tuple(sorted(out))
            delta.append(row)
        acc = a.acceptance
        if isinstance(acc, Buchi):
            acc2 = Buchi(frozenset(j for j, (_, q) in enumerate(order) if q in acc.accepting))
        elif isinstance(acc, CoBuchi):
            acc2 = CoBuchi(frozenset(j for j, (_, q) in enumerate(order) if q in acc.rejecting))
        elif isinstance(acc, GenBuchi):
            acc2 = GenBuchi(tuple(frozenset(j for j, (_, q) in enumerate(order) if q in st) for st in acc.sets))
        else:
            acc2 = Parity(tuple(acc.ranks[q] for _, q in order))
        names = [f"(s{s}, {a.name(q)})" for s, q in order]
        return OmegaAutomaton(self.table, delta, 0, acc2, names)

    # --- text formats ---

    def _fmt(self, letter: int) -> str:
        names = self.table.names_of(letter)
        return ",".join(names) if names else "-"

    def format(self) -> str:
        tb = self.table
        lines = ["transducer",
                 "inputs: " + ", ".join(tb.inputs),
                 "outputs: " + ", ".join(tb.outputs),
                 f"states: {self.n_states}",
                 f"initial: {self.initial}"]
        for s in range(self.n_states):
            lines.append(f"state {s} output {self._fmt(self.labels[s])}")
            if self.certificate is not None:
                lines.append(f"certificate {self._fmt(self.certificate[s])}")
            for k, i in enumerate(self._ins):
                lines.append(f"  on {self._fmt(i)} -> {self.eta[s][k]}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph transducer {", "  rankdir=LR;", '  init [shape=point];', f"  init -> s{self.initial};"]
        for s in range(self.n_states):
            lab = self._fmt(self.labels[s])
            if self.certificate is not None:
                lab += " / " + self._fmt(self.certificate[s])
            lines.append(f'  s{s} [shape=box, label="s{s}\\n{lab}"];')
        for s in range(self.n_states):
            edges: dict = {}
            for k, i in enumerate(self._ins):
                edges.setdefault(self.eta[s][k], []).append(self._fmt(i))
            for t, ls in edges.items():
                lines.append(f'  s{s} -> s{t} [label="{" | ".join(ls)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _split_names(text: str) -> list:
    return [x.strip() for x in text.split(",") if x.strip()]


def parse_transducer(text: str, table: Optional[SignalTable] = None) -> Transducer:
    """Read the line-oriented transducer format.

    Without ``table`` one is built from the header (unit costs); with it, the
    header must list the same inputs and outputs in the same order.
    """
    lines = [(n + 1, ln.rstrip()) for n, ln in enumerate(text.splitlines())]
    lines = [(n, ln) for n, ln in lines if ln.strip() and not ln.strip().startswith("#")]
    if not lines or lines[0][1].strip() != "transducer":
        raise TransducerFormatError("expected header 'transducer'", lines[0][0] if lines else 1)
    header = {}
    pos = 1
    for key in ("inputs", "outputs", "states", "initial"):
        if pos >= len(lines):
            raise TransducerFormatError(f"missing '{key}:' line")
        n, ln = lines[pos]
        k, sep, v = ln.partition(":")
        if not sep or k.strip() != key:
            raise TransducerFormatError(f"expected '{key}:'", n)
        header[key] = v.strip()
        pos += 1
    ins, outs = _split_names(header["inputs"]), _split_names(header["outputs"])
    if table is None:
        table = SignalTable.make(ins, outs)
    elif list(table.inputs) != ins or list(table.outputs) != outs:
        raise TransducerFormatError("transducer signals do not match the problem's signal table")
    try:
        n_states = int(header["states"])
        initial = int(header["initial"])
    except ValueError:
        raise TransducerFormatError("states and initial must be integers") from None

    def letter(text, allowed, n):
        text = text.strip()
        if text == "-":
            return 0
        m = 0
        for name in _split_names(text):
            if name not in table or table.bit(name) & ~allowed:
                raise TransducerFormatError(f"unexpected signal {name!r}", n)
            m |= table.bit(name)
        return m

    ins_letters = table.input_letters()
    pos_of = {i: k for k, i in enumerate(ins_letters)}
    labels = [None] * n_states
    certs = [None] * n_states
    eta = [[None] * len(ins_letters) for _ in range(n_states)]
    cur = None
    has_cert = False
    for n, ln in lines[pos:]:
        body = ln.strip()
        if body.startswith("state "):
            parts = body.split(None, 3)
            if len(parts) < 3 or parts[2] != "output":
                raise TransducerFormatError("expected 'state <id> output <letters>'", n)
            try:
                cur = int(parts[1])
            except ValueError:
                raise TransducerFormatError("state id must be an integer", n) from None
            if not 0 <= cur < n_states:
                raise TransducerFormatError(f"state id {cur} out of range", n)
            labels[cur] = letter(parts[3] if len(parts) > 3 else "-", table.output_mask, n)
        elif body.startswith("certificate"):
            if cur is None:
                raise TransducerFormatError("certificate line before any state", n)
            has_cert = True
            certs[cur] = letter(body[len("certificate"):], (1 << len(table)) - 1, n)
        elif body.startswith("on "):
            if cur is None:
                raise TransducerFormatError("transition before any state", n)
            lhs, arrow, rhs = body[3:].partition("->")
            if not arrow:
                raise TransducerFormatError("expected 'on <letters> -> <state>'", n)
            i = letter(lhs, table.input_mask, n)
            try:
                tgt = int(rhs)
            except ValueError:
                raise TransducerFormatError("transition target must be an integer", n) from None
            eta[cur][pos_of[i]] = tgt
        else:
            raise TransducerFormatError(f"unrecognized line {body!r}", n)
    for s in range(n_states):
        if labels[s] is None:
            raise TransducerFormatError(f"state {s} is not described")
        if any(t is None for t in eta[s]):
            raise TransducerFormatError(f"state {s}: transition function is not total")
    if has_cert:
        certs = [c or 0 for c in certs]
    try:
        return Transducer(table, eta, labels, initial, certs if has_cert else None)
    except ValueError as e:
        raise TransducerFormatError(str(e)) from None


def constant(table: SignalTable, output: int = 0) -> Transducer:
    k = len(table.input_letters())
    return Transducer(table, [[0] * k], [output], 0)


def all_transducers(table: SignalTable, n: int):
    """Every transducer with exactly ``n`` states in canonical (breadth-first) numbering."""
    from itertools import product

    ins = table.input_letters()
    outs = table.output_letters()
    k = len(ins)
    for eta_flat in product(range(n), repeat=n * k):
        eta = [list(eta_flat[s * k:(s + 1) * k]) for s in range(n)]
        if not _is_canonical(eta, n):
            continue
        for labels in product(outs, repeat=n):
            yield Transducer(table, eta, list(labels), 0)


def _is_canonical(eta: Sequence[Sequence[int]], n: int) -> bool:
    """Breadth-first discovery order from state 0 is the identity and every state is reached."""
    seen = [0]
    index = {0: 0}
    i = 0
    while i < len(seen):
        for t in eta[seen[i]]:
            if t not in index:
                index[t] = len(seen)
                seen.append(t)
        i += 1
    return len(seen) == n and seen == list(range(n))
