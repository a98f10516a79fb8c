"""The line-oriented problem file format.

    inputs: req1, req2
    outputs: grant1, grant2
    cost: req1=1, grant1=2        # unlisted signals cost 1
    budget: 1
    spec: G (req1 -> F grant1)
    secret: G F req1
    secret if F req2 : G F grant2  # trigger before the colon
    observer: plain                # or knows-spec
    spec hoa: spec.hoa             # automaton-valued, path relative to this file
    secret hoa: secret.hoa

Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Optional

from .automata import OmegaAutomaton
from .hoa import HoaError, from_hoa
from .ltl import TRUE, Formula, LtlSyntaxError, UnknownSignalError, parse_ltl, pretty
from .privacy import KNOWS_SPEC, PLAIN, PrivacyProblem, SecretSpec
from .signals import SignalTable


class ProblemError(ValueError):
    def __init__(self, msg, line=None, column=None, path=None):
        where = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line, self.column, self.path = line, column, path


OBSERVERS = (PLAIN, KNOWS_SPEC)
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class ProblemFile:
    problem: PrivacyProblem
    # source text of each language, for reports: formula text or "hoa:<path>"
    sources: dict = field(default_factory=dict)


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _names(text: str, lineno: int, col: int, path) -> list:
    out = []
    for part in text.split(","):
        name = part.strip()
        if not name:
            continue
        if not _NAME.match(name):
            raise ProblemError(f"bad signal name {name!r}", lineno, col, path)
        out.append(name)
    return out


def parse_problem(text: str, base_dir: str = ".", path: Optional[str] = None) -> ProblemFile:
    """Parse a problem file; every error carries the file line (and column where known)."""
    inputs = outputs = None
    costs: dict = {}
    cost_line = None
    budget = 0
    observer = PLAIN
    spec_src = None  # (kind, payload, line, column)
    secret_src = []
    seen = set()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        m = re.match(r"secret\s+if\b", body)
        if m:
            rest = body[m.end():]
            trig, colon, sec = rest.partition(":")
            if not colon:
                raise ProblemError("expected 'secret if <trigger> : <secret>'", lineno, None, path)
            c_trig = indent + m.end() + 1 + (len(trig) - len(trig.lstrip()))
            c_sec = indent + m.end() + len(trig) + 2 + (len(sec) - len(sec.lstrip()))
            secret_src.append((("ltl", trig.strip(), lineno, c_trig), ("ltl", sec.strip(), lineno, c_sec)))
            continue
        key, colon, val = body.partition(":")
        if not colon:
            raise ProblemError(f"expected '<key>: <value>', got {body!r}", lineno, None, path)
        key = " ".join(key.split())
        col = indent + len(key) + 2 + (len(val) - len(val.lstrip()))
        val = val.strip()
        if key in ("inputs", "outputs", "cost", "budget", "observer", "spec", "spec hoa"):
            if key.split()[0] in seen:
                raise ProblemError(f"duplicate '{key.split()[0]}' line", lineno, None, path)
            seen.add(key.split()[0])
        if key == "inputs":
            inputs = _names(val, lineno, col, path)
        elif key == "outputs":
            outputs = _names(val, lineno, col, path)
        elif key == "cost":
            cost_line = lineno
            for item in val.split(","):
                if not item.strip():
                    continue
                name, eq, num = item.partition("=")
                try:
                    c = int(num)
                except ValueError:
                    c = -1
                if not eq or c < 0:
                    raise ProblemError(f"expected '<signal>=<non-negative integer>', got {item.strip()!r}",
                                       lineno, col, path)
                if name.strip() in costs:
                    raise ProblemError(f"cost of {name.strip()!r} given twice", lineno, col, path)
                costs[name.strip()] = c
        elif key == "budget":
            try:
                budget = int(val)
            except ValueError:
                raise ProblemError(f"budget must be an integer, got {val!r}", lineno, col, path) from None
            if budget < 0:
                raise ProblemError("budget must be non-negative", lineno, col, path)
        elif key == "observer":
            if val not in OBSERVERS:
                raise ProblemError(f"observer must be one of {', '.join(OBSERVERS)}, got {val!r}",
                                   lineno, col, path)
            observer = val
        elif key == "spec":
            spec_src = ("ltl", val, lineno, col)
        elif key == "spec hoa":
            spec_src = ("hoa", val, lineno, col)
        elif key == "secret":
            secret_src.append((None, ("ltl", val, lineno, col)))
        elif key == "secret hoa":
            secret_src.append((None, ("hoa", val, lineno, col)))
        else:
            raise ProblemError(f"unknown key {key!r}", lineno, None, path)

    if inputs is None:
        inputs = []
    if outputs is None:
        outputs = []
    dup = sorted({x for x in inputs + outputs if (inputs + outputs).count(x) > 1})
    if dup:
        raise ProblemError(f"signals declared twice: {dup}", None, None, path)
    unknown = sorted(set(costs) - set(inputs) - set(outputs))
    if unknown:
        raise ProblemError(f"cost given for undeclared signals {unknown}", cost_line, None, path)
    table = SignalTable.make(inputs, outputs, costs)
    if not secret_src:
        raise ProblemError("at least one secret is required", None, None, path)

    sources = {}

    def language(src):
        kind, payload, ln, col = src
        if kind == "hoa":
            p = payload if os.path.isabs(payload) else os.path.join(base_dir, payload)
            try:
                with open(p, encoding="utf-8") as fh:
                    a = from_hoa(fh.read(), table)
            except OSError as e:
                raise ProblemError(f"cannot read {payload}: {e.strerror}", ln, col, path) from None
            except HoaError as e:
                raise ProblemError(f"in {payload}: {e}", ln, col, path) from None
            return a, f"hoa:{payload}"
        if not payload:
            raise ProblemError("empty formula", ln, col, path)
        try:
            f = parse_ltl(payload, table)
        except LtlSyntaxError as e:
            raise ProblemError(str(e).rsplit(" at line", 1)[0], ln, col + e.column - 1, path) from None
        except UnknownSignalError as e:
            raise ProblemError(str(e), ln, col, path) from None
        return f, payload

    if spec_src is None:
        spec, sources["spec"] = TRUE, "true"
    else:
        spec, sources["spec"] = language(spec_src)
    secrets = []
    for k, (trig, sec) in enumerate(secret_src):
        s, sources[f"secret{k}"] = language(sec)
        t = None
        if trig is not None:
            t, sources[f"trigger{k}"] = language(trig)
        secrets.append(SecretSpec(s, t))
    try:
        problem = PrivacyProblem(spec, secrets, table, budget, observer)
    except ValueError as e:
        raise ProblemError(str(e), None, None, path) from None
    return ProblemFile(problem, sources)


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ProblemError(f"cannot read problem file: {e.strerror}", None, None, path) from None
    except UnicodeDecodeError:
        raise ProblemError("problem file is not UTF-8", None, None, path) from None
    return parse_problem(text, os.path.dirname(path) or ".", path)


def format_problem(problem: PrivacyProblem, hoa_paths: Optional[dict] = None) -> str:
    """Problem file text.  Automaton-valued languages need an entry in ``hoa_paths``.

    Keys of ``hoa_paths`` are ``"spec"``, ``"secret<k>"`` and ``"trigger<k>"``.
    """
    hoa_paths = hoa_paths or {}
    tb = problem.table
    lines = [("inputs: " + ", ".join(tb.inputs)).rstrip(), ("outputs: " + ", ".join(tb.outputs)).rstrip()]
    odd = [f"{x}={tb.cost_of(x)}" for x in tb.names if tb.cost_of(x) != 1]
    if odd:
        lines.append("cost: " + ", ".join(odd))
    lines.append(f"budget: {problem.budget}")
    if problem.observer != PLAIN:
        lines.append(f"observer: {problem.observer}")

    def text(lang, key, prefix):
        if isinstance(lang, Formula):
            return f"{prefix}: {pretty(lang)}"
        if key not in hoa_paths:
            raise ValueError(f"{key} is an automaton and needs a HOA path")
        return f"{prefix} hoa: {hoa_paths[key]}"

    lines.append(text(problem.spec, "spec", "spec"))
    for k, s in enumerate(problem.secrets):
        if s.trigger is None:
            lines.append(text(s.secret, f"secret{k}", "secret"))
            continue
        if not (isinstance(s.trigger, Formula) and isinstance(s.secret, Formula)):
            raise ValueError("conditional secrets are written as formulas only")
        lines.append(f"secret if {pretty(s.trigger)} : {pretty(s.secret)}")
    return "\n".join(lines) + "\n"


def is_automaton(lang) -> bool:
    return isinstance(lang, OmegaAutomaton)
