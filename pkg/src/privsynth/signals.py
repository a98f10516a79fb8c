"""Signals, signal tables and ultimately periodic words.

A letter is an ``int`` bit vector: bit ``j`` is set iff the ``j``-th signal of
the table (in declaration order) is true.  Every construction in the package
enumerates letters as ``range(2 ** len(table))`` so that results do not depend
on hashing or set iteration order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

INPUT = "input"
OUTPUT = "output"


@dataclass(frozen=True)
class Signal:
    name: str
    kind: str = OUTPUT

    def __post_init__(self):
        if self.kind not in (INPUT, OUTPUT):
            raise ValueError(f"signal kind must be input or output, got {self.kind!r}")


@dataclass(frozen=True)
class SignalTable:
    """Ordered universe ``I ∪ O`` with a hiding cost per signal."""

    signals: tuple[Signal, ...]
    costs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        names = [s.name for s in self.signals]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate signal names in {names}")
        if not self.costs:
            object.__setattr__(self, "costs", tuple(1 for _ in self.signals))
        if len(self.costs) != len(self.signals):
            raise ValueError("every signal needs exactly one cost entry")
        if any(c < 0 for c in self.costs):
            raise ValueError("costs must be non-negative")

    @classmethod
    def make(cls, inputs: Iterable[str] = (), outputs: Iterable[str] = (), cost=None):
        sigs = [Signal(n, INPUT) for n in inputs] + [Signal(n, OUTPUT) for n in outputs]
        cost = cost or {}
        unknown = set(cost) - {s.name for s in sigs}
        if unknown:
            raise ValueError(f"cost given for unknown signals {sorted(unknown)}")
        return cls(tuple(sigs), tuple(cost.get(s.name, 1) for s in sigs))

    def __len__(self):
        return len(self.signals)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.signals)

    @property
    def inputs(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.signals if s.kind == INPUT)

    @property
    def outputs(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.signals if s.kind == OUTPUT)

    @property
    def alphabet_size(self) -> int:
        return 1 << len(self.signals)

    def index(self, name: str) -> int:
        for j, s in enumerate(self.signals):
            if s.name == name:
                return j
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(s.name == name for s in self.signals)

    def bit(self, name: str) -> int:
        return 1 << self.index(name)

    def cost_of(self, name: str) -> int:
        return self.costs[self.index(name)]

    def cost(self, names: Iterable[str]) -> int:
        return sum(self.cost_of(n) for n in names)

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for n in names:
            m |= self.bit(n)
        return m

    @property
    def input_mask(self) -> int:
        return self.mask(self.inputs)

    @property
    def output_mask(self) -> int:
        return self.mask(self.outputs)

    def names_of(self, letter: int) -> tuple[str, ...]:
        return tuple(s.name for j, s in enumerate(self.signals) if letter >> j & 1)

    def sub_letters(self, names: Sequence[str]) -> list[int]:
        """All letters supported on ``names``; entry ``k`` sets ``names[j]`` iff bit j of k."""
        bits = [self.bit(n) for n in names]
        out = []
        for k in range(1 << len(bits)):
            m = 0
            for j, b in enumerate(bits):
                if k >> j & 1:
                    m |= b
            out.append(m)
        return out

    def input_letters(self) -> list[int]:
        return self.sub_letters(self.inputs)

    def output_letters(self) -> list[int]:
        return self.sub_letters(self.outputs)

    def extend(self, signals: Iterable[Signal], costs: Iterable[int] | None = None) -> "SignalTable":
        signals = tuple(signals)
        costs = tuple(costs) if costs is not None else tuple(1 for _ in signals)
        return SignalTable(self.signals + signals, self.costs + costs)

    def with_costs(self, cost: dict) -> "SignalTable":
        return SignalTable(self.signals, tuple(cost.get(s.name, c) for s, c in zip(self.signals, self.costs)))

    def format_letter(self, letter: int) -> str:
        return "{" + ",".join(self.names_of(letter)) + "}"

    def same_alphabet(self, other: "SignalTable") -> bool:
        return self.names == other.names


def noise_letters(letter: int, hidden_mask: int) -> list[int]:
    """``noise_H(σ)``: every letter agreeing with ``letter`` outside ``hidden_mask``."""
    base = letter & ~hidden_mask
    out = []
    sub = hidden_mask
    while True:
        out.append(base | sub)
        if sub == 0:
            break
        sub = (sub - 1) & hidden_mask
    out.reverse()
    return out


def subsets(names: Sequence[str]):
    for r in range(len(names) + 1):
        yield from combinations(names, r)


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix · loop^ω``."""

    prefix: tuple[int, ...]
    loop: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def __len__(self):
        return len(self.prefix) + len(self.loop)

    def letter(self, i: int) -> int:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.loop[(i - p) % len(self.loop)]

    def positions(self) -> tuple[int, ...]:
        return self.prefix + self.loop

    def successor(self, i: int) -> int:
        n = len(self)
        return i + 1 if i + 1 < n else len(self.prefix)

    def unroll(self, prefix_len: int, loop_mult: int = 1) -> "LassoWord":
        """Same infinite word, reshaped to a longer prefix and a repeated loop."""
        if prefix_len < len(self.prefix) or loop_mult < 1:
            raise ValueError("can only grow the prefix and repeat the loop")
        pre = tuple(self.letter(i) for i in range(prefix_len))
        lp = tuple(self.letter(prefix_len + i) for i in range(len(self.loop) * loop_mult))
        return LassoWord(pre, lp)

    def normalize(self) -> "LassoWord":
        loop = self.loop
        n = len(loop)
        for d in range(1, n + 1):
            if n % d == 0 and loop == loop[:d] * (n // d):
                loop = loop[:d]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == loop[-1]:
            prefix.pop()
            loop = (loop[-1],) + loop[:-1]
        return LassoWord(tuple(prefix), loop)

    def same_word(self, other: "LassoWord") -> bool:
        return self.normalize() == other.normalize()

    def map(self, fn) -> "LassoWord":
        return LassoWord(tuple(fn(a) for a in self.prefix), tuple(fn(a) for a in self.loop))

    def restrict(self, mask: int) -> "LassoWord":
        return self.map(lambda a: a & mask)

    def format(self, table: SignalTable) -> str:
        pre = " ".join(table.format_letter(a) for a in self.prefix)
        lp = " ".join(table.format_letter(a) for a in self.loop)
        return f"{pre} ({lp})^w".strip()


def align(u: LassoWord, v: LassoWord) -> tuple[LassoWord, LassoWord]:
    """Reshape two lassos to a common prefix length and loop length."""
    from math import lcm

    p = max(len(u.prefix), len(v.prefix))
    m = lcm(len(u.loop), len(v.loop))
    return u.unroll(p, m // len(u.loop)), v.unroll(p, m // len(v.loop))


def all_lassos(letters: Sequence[int], max_prefix: int, max_loop: int, min_prefix: int = 0):
    """Enumerate every lasso over ``letters`` with the given shape bounds."""
    from itertools import product

    for p in range(min_prefix, max_prefix + 1):
        for pre in product(letters, repeat=p):
            for l in range(1, max_loop + 1):
                for lp in product(letters, repeat=l):
                    yield LassoWord(pre, lp)


def random_lasso(rng, n_letters: int, max_prefix: int, max_loop: int, letters=None) -> LassoWord:
    pick = (lambda: rng.choice(letters)) if letters is not None else (lambda: rng.randrange(n_letters))
    p = rng.randint(0, max_prefix)
    l = rng.randint(1, max_loop)
    return LassoWord(tuple(pick() for _ in range(p)), tuple(pick() for _ in range(l)))
