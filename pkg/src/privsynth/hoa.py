"""HOA v1 import/export and DOT rendering for automata.

Export writes state-based acceptance with one explicit cube per letter.  Parity
ranks are written unchanged as colors under ``parity max even``; imports in the
other parity conventions are converted to max-even ranks on the way in.
"""
from __future__ import annotations

import re
import shlex
from typing import Optional

from .automata import AutomatonError, Buchi, CoBuchi, GenBuchi, OmegaAutomaton, Parity
from .signals import SignalTable


class HoaError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


# --- export ------------------------------------------------------------------------------


def _acceptance_header(a: OmegaAutomaton):
    acc = a.acceptance
    if isinstance(acc, Buchi):
        return "Buchi", "1 Inf(0)", lambda q: [0] if q in acc.accepting else []
    if isinstance(acc, CoBuchi):
        return "co-Buchi", "1 Fin(0)", lambda q: [0] if q in acc.rejecting else []
    if isinstance(acc, GenBuchi):
        k = len(acc.sets)
        cond = "&".join(f"Inf({j})" for j in range(k)) or "t"
        return f"generalized-Buchi {k}", f"{k} {cond}", lambda q: [j for j, s in enumerate(acc.sets) if q in s]
    if isinstance(acc, Parity):
        m = max(acc.ranks, default=0) + 1
        return f"parity max even {m}", f"{m} {_parity_formula(m, 'max', 'even')}", lambda q: [acc.ranks[q]]
    raise AutomatonError(f"cannot export {acc!r}")


def _parity_formula(m: int, order: str, par: str) -> str:
    good = 0 if par == "even" else 1
    colors = list(range(m)) if order == "max" else list(range(m - 1, -1, -1))
    f = None
    for c in colors:
        if c % 2 == good:
            f = f"Inf({c})" if f is None else f"Inf({c}) | ({f})"
        else:
            f = f"Fin({c})" if f is None else f"Fin({c}) & ({f})"
    return f or "f"


def _cube(letter: int, n: int) -> str:
    if n == 0:
        return "t"
    return "&".join(str(j) if letter >> j & 1 else f"!{j}" for j in range(n))


def to_hoa(a: OmegaAutomaton, name: Optional[str] = None) -> str:
    tb = a.table
    acc_name, acc, marks = _acceptance_header(a)
    props = ["trans-labels", "explicit-labels", "state-acc"]
    if a.is_deterministic():
        props.append("deterministic")
    lines = ["HOA: v1"]
    if name:
        lines.append(f'name: "{name}"')
    lines += [f"States: {a.n_states}", f"Start: {a.initial}",
              "AP: " + " ".join([str(len(tb))] + [f'"{x}"' for x in tb.names]),
              f"acc-name: {acc_name}", f"Acceptance: {acc}",
              "properties: " + " ".join(props), "--BODY--"]
    n = len(tb)
    for q in range(a.n_states):
        m = marks(q)
        head = f"State: {q}"
        if a.names is not None:
            head += ' "' + a.name(q).replace('"', "'") + '"'
        if m:
            head += " {" + " ".join(map(str, m)) + "}"
        lines.append(head)
        for letter, succ in enumerate(a.delta[q]):
            for t in succ:
                lines.append(f"[{_cube(letter, n)}] {t}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def to_dot(a: OmegaAutomaton) -> str:
    acc = a.acceptance
    lines = ["digraph automaton {", "  rankdir=LR;", '  init [shape=point];', f"  init -> q{a.initial};"]
    for q in range(a.n_states):
        shape = "circle"
        label = a.name(q).replace('"', "'")
        if isinstance(acc, Buchi) and q in acc.accepting:
            shape = "doublecircle"
        elif isinstance(acc, CoBuchi) and q in acc.rejecting:
            shape = "doubleoctagon"
        elif isinstance(acc, GenBuchi):
            sets = [str(j) for j, s in enumerate(acc.sets) if q in s]
            if sets:
                label += " {" + ",".join(sets) + "}"
        elif isinstance(acc, Parity):
            label += f" [{acc.ranks[q]}]"
        lines.append(f'  q{q} [shape={shape}, label="{label}"];')
    for q in range(a.n_states):
        grouped: dict = {}
        for letter, succ in enumerate(a.delta[q]):
            for t in succ:
                grouped.setdefault(t, []).append(a.table.format_letter(letter))
        for t, letters in grouped.items():
            lab = " ".join(letters) if len(letters) < a.table.alphabet_size else "*"
            lines.append(f'  q{q} -> q{t} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- import ------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(!)|(&)|(\|)|(\()|(\))|(t)|(f))")


def _parse_label(text: str, line: int):
    """Boolean label over AP indices as a function ``letter bits -> bool`` (letter in AP order)."""
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise HoaError(f"bad label {text!r}", line)
        toks.append(m.group(0).strip())
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def disj():
        f = conj()
        while peek() == "|":
            take()
            g = conj()
            f = (lambda a, b: lambda v: a(v) or b(v))(f, g)
        return f

    def conj():
        f = unary()
        while peek() == "&":
            take()
            g = unary()
            f = (lambda a, b: lambda v: a(v) and b(v))(f, g)
        return f

    def unary():
        tok = take()
        if tok == "!":
            g = unary()
            return lambda v: not g(v)
        if tok == "(":
            g = disj()
            if take() != ")":
                raise HoaError(f"unbalanced parentheses in {text!r}", line)
            return g
        if tok == "t":
            return lambda v: True
        if tok == "f":
            return lambda v: False
        if tok is not None and tok.isdigit():
            j = int(tok)
            return lambda v: bool(v >> j & 1)
        raise HoaError(f"unexpected {tok!r} in label {text!r}", line)

    f = disj()
    if peek() is not None:
        raise HoaError(f"trailing input in label {text!r}", line)
    return f


def _parse_acceptance(acc_name: Optional[str], acceptance: Optional[str], line: int):
    """Return ``(kind, extra)`` for the supported conditions."""
    if acceptance is None:
        raise HoaError("missing Acceptance header", line)
    body = acceptance.split(None, 1)
    count = int(body[0])
    cond = re.sub(r"\s+", "", body[1] if len(body) > 1 else "")
    if acc_name:
        parts = acc_name.split()
        if parts[0] == "parity":
            return "parity", (parts[1], parts[2], int(parts[3]))
        if parts[0] == "generalized-Buchi" and cond == ("&".join(f"Inf({j})" for j in range(count)) or "t"):
            return "gen", count
    if count == 1 and cond == "Inf(0)":
        return "buchi", None
    if count == 1 and cond == "Fin(0)":
        return "cobuchi", None
    if cond == "t" and count == 0:
        return "gen", 0
    if re.fullmatch(r"Inf\(\d+\)(&Inf\(\d+\))*", cond):
        idx = [int(x) for x in re.findall(r"\d+", cond)]
        if sorted(idx) == list(range(count)):
            return "gen", count
    for order in ("max", "min"):
        for par in ("even", "odd"):
            if cond == re.sub(r"\s+", "", _parity_formula(count, order, par)):
                return "parity", (order, par, count)
    raise HoaError(f"unsupported acceptance condition {acceptance!r}", line)


def _to_rank(color: int, order: str, par: str, m: int) -> int:
    """Max-even rank with the same verdict as ``color`` under the given convention."""
    if order == "max":
        return color + 2 if par == "even" else color + 1
    top = m + (m % 2)  # even and larger than every color
    return top - color if par == "even" else top - color + 1


def from_hoa(text: str, table: Optional[SignalTable] = None) -> OmegaAutomaton:
    """Parse a state-based HOA automaton with explicit labels.

    Atomic propositions are matched to ``table`` by name (missing table: all
    propositions become outputs in the listed order).
    """
    header: dict = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].strip() != "--BODY--":
        ln = lines[i].strip()
        i += 1
        if not ln:
            continue
        if ":" not in ln:
            raise HoaError(f"bad header line {ln!r}", i)
        key, val = ln.split(":", 1)
        header.setdefault(key.strip(), []).append((val.strip(), i))
    if i == len(lines):
        raise HoaError("missing --BODY--")
    if header.get("HOA", [("", 0)])[0][0] != "v1":
        raise HoaError("only HOA v1 is supported", 1)
    try:
        n = int(header["States"][0][0])
        start = [int(x) for x in header["Start"][0][0].replace("&", " ").split()]
        ap_words = shlex.split(header["AP"][0][0])
    except (KeyError, ValueError):
        raise HoaError("States, Start and AP headers are required") from None
    if len(start) != 1:
        raise HoaError("exactly one initial state is supported")
    aps = ap_words[1:]
    if int(ap_words[0]) != len(aps):
        raise HoaError("AP count does not match the listed propositions")
    if table is None:
        table = SignalTable.make(outputs=aps)
    missing = [x for x in aps if x not in table]
    if missing:
        raise HoaError(f"propositions not in the signal table: {missing}")
    ap_bits = [table.bit(x) for x in aps]
    acc_name = header.get("acc-name", [(None, 0)])[0][0]
    acc_line = header.get("Acceptance", [(None, 0)])[0]
    kind, extra = _parse_acceptance(acc_name, acc_line[0], acc_line[1])

    k = table.alphabet_size
    # project table letters onto AP valuations once
    proj = []
    for letter in range(k):
        v = 0
        for j, b in enumerate(ap_bits):
            if letter & b:
                v |= 1 << j
        proj.append(v)
    delta = [[set() for _ in range(k)] for _ in range(n)]
    marks = [[] for _ in range(n)]
    names = [None] * n
    cur = None
    i += 1
    while i < len(lines):
        ln = lines[i].strip()
        i += 1
        if not ln:
            continue
        if ln == "--END--":
            break
        if ln.startswith("State:"):
            m = re.match(r'State:\s*(\d+)\s*(?:"([^"]*)")?\s*(?:\{([\d\s]*)\})?\s*$', ln)
            if not m:
                raise HoaError(f"bad state line {ln!r}", i)
            cur = int(m.group(1))
            if not 0 <= cur < n:
                raise HoaError(f"state {cur} out of range", i)
            names[cur] = m.group(2)
            marks[cur] = [int(x) for x in (m.group(3) or "").split()]
            continue
        if cur is None:
            raise HoaError("edge before any State line", i)
        m = re.match(r"\[(.*)\]\s*(\d+)\s*(\{.*\})?\s*$", ln)
        if not m:
            raise HoaError(f"only explicit labels and single targets are supported: {ln!r}", i)
        if m.group(3):
            raise HoaError("transition-based acceptance is not supported", i)
        label = _parse_label(m.group(1), i)
        t = int(m.group(2))
        if not 0 <= t < n:
            raise HoaError(f"target {t} out of range", i)
        for letter in range(k):
            if label(proj[letter]):
                delta[cur][letter].add(t)
    frozen = [[tuple(sorted(s)) for s in row] for row in delta]
    if kind == "buchi":
        acc = Buchi(frozenset(q for q in range(n) if 0 in marks[q]))
    elif kind == "cobuchi":
        acc = CoBuchi(frozenset(q for q in range(n) if 0 in marks[q]))
    elif kind == "gen":
        acc = GenBuchi(tuple(frozenset(q for q in range(n) if j in marks[q]) for j in range(extra)))
    else:
        order, par, m = extra
        ranks = []
        for q in range(n):
            if len(marks[q]) != 1:
                raise HoaError(f"state {q} needs exactly one color")
            ranks.append(_to_rank(marks[q][0], order, par, m))
        acc = Parity(tuple(ranks))
    plain_names = None if all(x is None for x in names) else [x if x is not None else str(q) for q, x in enumerate(names)]
    return OmegaAutomaton(table, frozen, start[0], acc, plain_names)
