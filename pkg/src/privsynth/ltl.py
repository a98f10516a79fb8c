"""LTL syntax trees, a parser/printer pair, negation normal form and lasso semantics.

Grammar (prefix operators bind tighter than Boolean connectives; ``U``, ``W`` and
``R`` take a primary on the left and are right-associative)::

    formula  := iff
    iff      := implies ("<->" implies)*
    implies  := or ("->" or)*            (right-assoc)
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "!" unary | "X" unary | "F" unary | "G" unary | binop
    binop    := primary (("U" | "W" | "R") unary)?
    primary  := "true" | "false" | identifier | "(" formula ")"
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .signals import LassoWord, SignalTable


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class Always(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class WeakUntil(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Release(Formula):
    left: Formula
    right: Formula


TRUE = Const(True)
FALSE = Const(False)

UNARY = {Not: "!", Next: "X", Eventually: "F", Always: "G"}
BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->", Until: "U", WeakUntil: "W", Release: "R"}

for _cls in (Const, Atom, *UNARY, *BINARY):
    _cls.__repr__ = lambda self: f"Ltl({pretty(self)!r})"


def conj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f != TRUE]
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f != FALSE]
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Const, Atom)):
        return ()
    if type(f) in UNARY:
        return (f.arg,)
    return (f.left, f.right)


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    out = set()
    for c in children(f):
        out |= atoms(c)
    return out


def rename(f: Formula, mapping: dict) -> Formula:
    if isinstance(f, Atom):
        return Atom(mapping.get(f.name, f.name))
    if isinstance(f, Const):
        return f
    if type(f) in UNARY:
        return type(f)(rename(f.arg, mapping))
    return type(f)(rename(f.left, mapping), rename(f.right, mapping))


# --- printing ---------------------------------------------------------------


@lru_cache(maxsize=None)
def pretty(f: Formula) -> str:
    """Fully parenthesised rendering; ``parse_ltl(pretty(f)) == f``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + pretty(f.arg)
    if type(f) in UNARY:
        return f"{UNARY[type(f)]} {pretty(f.arg)}"
    left = pretty(f.left)
    # the left operand of U/W/R is a primary
    if type(f) in (Until, WeakUntil, Release) and type(f.left) in UNARY:
        left = f"({left})"
    return f"({left} {BINARY[type(f)]} {pretty(f.right)})"


# --- parsing ----------------------------------------------------------------


class LtlSyntaxError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownSignalError(ValueError):
    def __init__(self, name):
        super().__init__(f"unknown signal {name!r}")
        self.name = name


_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()])|([a-zA-Z_][a-zA-Z0-9_]*))")
_KEYWORDS = {"X", "F", "G", "U", "W", "R", "true", "false"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LtlSyntaxError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        start = m.start(1) if m.group(1) else m.start(2)
        val = m.group(1) or m.group(2)
        kind = "op" if m.group(1) or val in _KEYWORDS else "id"
        tokens.append((kind, val, start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text, table):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.take()
        if t[1] != val or t[0] == "id":
            self.fail(f"expected {val!r}", t)
        return t

    def fail(self, msg, tok):
        found = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise LtlSyntaxError(f"{msg}, found {found}", *_linecol(self.text, tok[2]))

    def at(self, val):
        t = self.peek()
        return t[0] == "op" and t[1] == val

    def parse(self):
        f = self.iff()
        if self.peek()[0] != "eof":
            self.fail("unexpected token", self.peek())
        return f

    def iff(self):
        f = self.implies()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.implies())
        return f

    def implies(self):
        f = self.or_()
        if self.at("->"):
            self.take()
            return Implies(f, self.implies())
        return f

    def or_(self):
        f = self.and_()
        while self.at("|"):
            self.take()
            f = Or(f, self.and_())
        return f

    def and_(self):
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        for sym, cls in (("!", Not), ("X", Next), ("F", Eventually), ("G", Always)):
            if self.at(sym):
                self.take()
                return cls(self.unary())
        left = self.primary()
        for sym, cls in (("U", Until), ("W", WeakUntil), ("R", Release)):
            if self.at(sym):
                self.take()
                return cls(left, self.unary())
        return left

    def primary(self):
        t = self.take()
        if t[0] == "op" and t[1] == "true":
            return TRUE
        if t[0] == "op" and t[1] == "false":
            return FALSE
        if t[0] == "id":
            if self.table is not None and t[1] not in self.table:
                raise UnknownSignalError(t[1])
            return Atom(t[1])
        if t[0] == "op" and t[1] == "(":
            f = self.iff()
            self.expect(")")
            return f
        self.fail("expected a formula", t)


def parse_ltl(text: str, table: SignalTable | None = None) -> Formula:
    """Parse ``text``; atoms are checked against ``table`` when one is given."""
    return _Parser(text, table).parse()


# --- normal form ------------------------------------------------------------


def to_nnf(f: Formula) -> Formula:
    """Push negations to atoms and eliminate ``->``/``<->``.

    The result uses Const, Atom, Not(Atom), And, Or, Next, Until, Release,
    WeakUntil, Eventually and Always.
    """
    return _nnf(f, False)


@lru_cache(maxsize=None)
def _nnf(f: Formula, neg: bool) -> Formula:
    t = type(f)
    if t is Const:
        return Const(f.value != neg)
    if t is Atom:
        return Not(f) if neg else f
    if t is Not:
        return _nnf(f.arg, not neg)
    if t is Next:
        return Next(_nnf(f.arg, neg))
    if t is Eventually:
        return Always(_nnf(f.arg, True)) if neg else Eventually(_nnf(f.arg, False))
    if t is Always:
        return Eventually(_nnf(f.arg, True)) if neg else Always(_nnf(f.arg, False))
    if t is And:
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return Or(l, r) if neg else And(l, r)
    if t is Or:
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return And(l, r) if neg else Or(l, r)
    if t is Implies:
        return _nnf(Or(Not(f.left), f.right), neg)
    if t is Iff:
        a, b = f.left, f.right
        if neg:
            return Or(And(_nnf(a, False), _nnf(b, True)), And(_nnf(a, True), _nnf(b, False)))
        return Or(And(_nnf(a, False), _nnf(b, False)), And(_nnf(a, True), _nnf(b, True)))
    if t is Until:
        if neg:
            return Release(_nnf(f.left, True), _nnf(f.right, True))
        return Until(_nnf(f.left, False), _nnf(f.right, False))
    if t is Release:
        if neg:
            return Until(_nnf(f.left, True), _nnf(f.right, True))
        return Release(_nnf(f.left, False), _nnf(f.right, False))
    if t is WeakUntil:
        if neg:
            # ¬(a W b) = ¬b U (¬a ∧ ¬b)
            nb = _nnf(f.right, True)
            return Until(nb, And(_nnf(f.left, True), nb))
        return WeakUntil(_nnf(f.left, False), _nnf(f.right, False))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, (Implies, Iff)):
        return False
    if isinstance(f, Not):
        return isinstance(f.arg, Atom)
    return all(is_nnf(c) for c in children(f))


# --- semantics on lassos ----------------------------------------------------


def eval_on_lasso(f: Formula, w: LassoWord, table: SignalTable) -> bool:
    """Does ``prefix · loop^ω`` satisfy ``f``?  Fixpoints over the lasso positions."""
    return _eval_positions(f, w, table, {})[0]


def _eval_positions(f, w, table, memo):
    if f in memo:
        return memo[f]
    n = len(w)
    letters = w.positions()
    succ = [w.successor(i) for i in range(n)]
    t = type(f)
    if t is Const:
        v = [f.value] * n
    elif t is Atom:
        b = table.bit(f.name)
        v = [bool(a & b) for a in letters]
    elif t is Not:
        a = _eval_positions(f.arg, w, table, memo)
        v = [not x for x in a]
    elif t in (And, Or, Implies, Iff):
        a = _eval_positions(f.left, w, table, memo)
        b = _eval_positions(f.right, w, table, memo)
        op = {
            And: lambda x, y: x and y,
            Or: lambda x, y: x or y,
            Implies: lambda x, y: (not x) or y,
            Iff: lambda x, y: x == y,
        }[t]
        v = [op(x, y) for x, y in zip(a, b)]
    elif t is Next:
        a = _eval_positions(f.arg, w, table, memo)
        v = [a[succ[i]] for i in range(n)]
    else:
        if t is Eventually:
            left, right, least = [True] * n, _eval_positions(f.arg, w, table, memo), True
        elif t is Always:
            left, right, least = _eval_positions(f.arg, w, table, memo), [False] * n, False
        elif t is Until:
            left, right, least = (_eval_positions(f.left, w, table, memo),
                                  _eval_positions(f.right, w, table, memo), True)
        elif t is WeakUntil:
            left, right, least = (_eval_positions(f.left, w, table, memo),
                                  _eval_positions(f.right, w, table, memo), False)
        elif t is Release:
            # a R b = b W (a ∧ b)
            a = _eval_positions(f.left, w, table, memo)
            b = _eval_positions(f.right, w, table, memo)
            left, right, least = b, [x and y for x, y in zip(a, b)], False
        else:
            raise TypeError(f"not a formula: {f!r}")
        # v = right ∨ (left ∧ X v); least fixpoint for U/F, greatest for W/G/R
        v = [least is False] * n
        changed = True
        while changed:
            changed = False
            for i in reversed(range(n)):
                nv = right[i] or (left[i] and v[succ[i]])
                if nv != v[i]:
                    v[i] = nv
                    changed = True
    memo[f] = v
    return v
