"""Command-line front end.

    privsynth synth PROBLEM [--hide a,b] [--bound n] [--certified] ...
    privsynth check PROBLEM --transducer FILE --hide a,b [--observer MODE]
    privsynth translate FORMULA [--kind ngbw|nbw|dpw] [--noise h] [--monitor --secret F]
    privsynth fixture vertex-cover|vertex-cover-knowledge|hiding-hardness INPUT --out DIR

Exit codes: 0 realizable / hidden, 1 unrealizable / revealed, 2 usage or input
error (nothing is written then).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .automata import AutomatonError, apply_noise, simplify
from .bounded import SearchStats, bounded_synthesis
from .certified import COMPLETE, SAFRALESS, check_certifying, synthesize_certified
from .closed import (
    GraphFormatError, hiding_hardness_fixture, parse_graph, vertex_cover_fixture,
    vertex_cover_knowledge_fixture,
)
from .hoa import HoaError, from_hoa, to_dot, to_hoa
from .ltl import LtlSyntaxError, UnknownSignalError, atoms, parse_ltl
from .observer import (
    build_know_spec_monitor, check_hides_know_spec, check_hides_knowing_transducer,
)
from .privacy import (
    KNOWS_SPEC, KNOWS_TRANSDUCER, PLAIN, Languages, PrivacyProblem, SecretSpec, Unrealizable, _attempt,
    build_privacy_dpw, build_privacy_monitor, check_hides, check_spec, enumerate_hide_sets,
    synthesize_with_privacy,
)
from .problem import ProblemError, format_problem, load_problem
from .safra import determinize
from .signals import SignalTable
from .tableau import ltl_to_nbw, ltl_to_ngbw
from .transducer import TransducerFormatError, parse_transducer

log = logging.getLogger(__name__)

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2
VERDICTS = ("realizable", "unrealizable", "hidden", "revealed", "unknown")
PHASES = ("translate", "determinize", "solve")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    verdict: str = "unknown"
    hide_set: Optional[tuple] = None
    artifacts: list = field(default_factory=list)
    timings: dict = field(default_factory=lambda: {p: 0.0 for p in PHASES})
    candidates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def add_time(self, phase: str, seconds: float):
        self.timings[phase] = self.timings.get(phase, 0.0) + max(0.0, seconds)

    def to_json(self, with_timings: bool = False) -> str:
        d = {"verdict": self.verdict,
             "hideSet": list(self.hide_set) if self.hide_set is not None else None,
             "artifacts": sorted(self.artifacts),
             "candidates": self.candidates}
        d.update(self.details)
        if with_timings:
            d["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return json.dumps(d, indent=2, sort_keys=True) + "\n"


def _split_list(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    return [x.strip() for x in text.split(",") if x.strip()]


def _check_names(table: SignalTable, names, what: str):
    unknown = [x for x in names if x not in table]
    if unknown:
        raise UsageError(f"{what}: unknown signals {unknown}")


class _Output:
    """Collects artifacts and writes them only once the run has succeeded."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.files: dict = {}

    def add(self, name: str, text: str):
        self.files[name] = text

    def flush(self, report: Optional[RunReport] = None, with_timings=False):
        os.makedirs(self.out_dir, exist_ok=True)
        names = sorted(self.files)
        if report is not None:
            report.artifacts = [os.path.join(self.out_dir, n) for n in names + ["report.json"]]
            self.files["report.json"] = report.to_json(with_timings)
        for name, text in sorted(self.files.items()):
            with open(os.path.join(self.out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


def _emit_kinds(text: Optional[str]) -> set:
    kinds = set(_split_list(text) or [])
    bad = kinds - {"dot", "hoa"}
    if bad:
        raise UsageError(f"--emit accepts dot and hoa, got {sorted(bad)}")
    return kinds


def _candidate_entry(e: dict) -> dict:
    out = {"hidden": list(e["hidden"]), "realizable": e["realizable"]}
    if "dpw_states" in e:
        out["dpwStates"] = e["dpw_states"]
    return out


# --- synth ------------------------------------------------------------------------------


def _monitor_for(observer: str):
    return build_know_spec_monitor if observer == KNOWS_SPEC else build_privacy_monitor


def _synth_bounded(problem: PrivacyProblem, hide, bound: int, report: RunReport):
    """Bounded search over the fixed hide set, or over the candidates then shrunk greedily."""
    monitor = _monitor_for(problem.observer)
    stats = SearchStats()

    def attempt(h):
        t0 = time.perf_counter()
        t = bounded_synthesis(problem.spec, problem.secrets, h, problem.table, bound, monitor=monitor,
                              stats=stats)
        report.add_time("solve", time.perf_counter() - t0)
        report.candidates.append({"hidden": list(h), "realizable": t is not None})
        return t

    if hide is not None:
        t = attempt(hide)
        report.details["searchNodes"] = stats.nodes
        return (tuple(hide), t) if t is not None else None
    for cand in enumerate_hide_sets(problem.table, problem.budget):
        t = attempt(cand)
        if t is None:
            continue
        hidden = list(cand)
        for name in list(cand):
            trial = [x for x in hidden if x != name]
            t2 = attempt(trial)
            if t2 is not None:
                hidden, t = trial, t2
        report.details["searchNodes"] = stats.nodes
        return tuple(hidden), t
    report.details["searchNodes"] = stats.nodes
    return None


def _synth_certified(problem: PrivacyProblem, hide, engine: str, report: RunReport):
    if hide is None:
        raise UsageError("--certified needs an explicit --hide set (certified privacy is defined for a fixed hide set)")
    if problem.observer != PLAIN:
        raise UsageError("--certified supports the plain observer only")
    if len(problem.secrets) != 1 or problem.secrets[0].conditional:
        raise UsageError("--certified supports exactly one unconditional secret")
    t0 = time.perf_counter()
    res = synthesize_certified(problem.spec, problem.secrets[0].secret, tuple(hide), problem.table, engine=engine)
    report.add_time("solve", time.perf_counter() - t0)
    report.candidates.append({"hidden": list(hide), "realizable": bool(res)})
    report.details["engine"] = res.engine
    if res.bound is not None:
        report.details["visitBound"] = res.bound
    return (tuple(hide), res.transducer) if res else None


def _synth_plain(problem: PrivacyProblem, hide, parallel: int, minimize: bool, report: RunReport):
    monitor = _monitor_for(problem.observer)
    if hide is not None:
        # a single candidate: solve it directly, no shrinking
        t, entry = _attempt(problem.spec, problem.secrets, tuple(hide), problem.table,
                            Languages(problem.table), monitor)
        entries = [entry]
        result = (tuple(hide), t) if t is not None else None
    else:
        sol = synthesize_with_privacy(problem, minimize=minimize, monitor=monitor, parallel=parallel)
        entries = sol.log
        result = None if isinstance(sol, Unrealizable) else (sol.hidden, sol.transducer)
    for e in entries:
        for p in PHASES:
            report.add_time(p, e["timings"][p])
        report.candidates.append(_candidate_entry(e))
    return result


def cmd_synth(args) -> int:
    pf = load_problem(args.problem)
    problem = pf.problem
    if args.observer is not None:
        if args.observer not in (PLAIN, KNOWS_SPEC):
            raise UsageError("synthesis supports the plain and knows-spec observers")
        problem.observer = args.observer
    hide = _split_list(args.hide)
    if hide is not None:
        _check_names(problem.table, hide, "--hide")
        if problem.table.cost(hide) > problem.budget:
            raise UsageError(f"--hide costs {problem.table.cost(hide)}, over the budget {problem.budget}")
    emit = _emit_kinds(args.emit)
    if args.engine is not None and not args.certified:
        raise UsageError("--engine applies to --certified synthesis")
    if args.bound is not None and args.bound < 1:
        raise UsageError("--bound must be at least 1")
    if args.bound is not None and args.certified:
        raise UsageError("--bound and --certified are separate engines; pick one")
    if args.parallel < 1:
        raise UsageError("--parallel must be at least 1")

    report = RunReport()
    report.details["observer"] = problem.observer
    if args.seed is not None:
        report.details["seed"] = args.seed
    if args.certified:
        result = _synth_certified(problem, hide, args.engine or COMPLETE, report)
    elif args.bound is not None:
        report.details["bound"] = args.bound
        result = _synth_bounded(problem, hide, args.bound, report)
    else:
        result = _synth_plain(problem, hide, args.parallel, not args.no_minimize, report)

    out = _Output(args.out)
    if result is None:
        report.verdict = "unrealizable"
        code = EXIT_NO
    else:
        hidden, t = result
        report.verdict = "realizable"
        report.hide_set = tuple(hidden)
        report.details["states"] = t.n_states
        report.details["cost"] = problem.table.cost(hidden)
        out.add("transducer.txt", t.format())
        out.add("hide-set.txt", ", ".join(hidden) + "\n")
        if "dot" in emit:
            out.add("transducer.dot", t.to_dot())
        if "hoa" in emit:
            t0 = time.perf_counter()
            d = build_privacy_dpw(problem.spec, problem.secrets, hidden, problem.table) \
                if problem.observer == PLAIN else determinize(
                    build_know_spec_monitor(problem.spec, problem.secrets, hidden, problem.table))
            report.add_time("determinize", time.perf_counter() - t0)
            out.add("monitor.hoa", to_hoa(d, "privacy monitor"))
        code = EXIT_OK
    out.flush(report, args.timings)
    print(f"{report.verdict}" + (f" hiding {{{', '.join(report.hide_set)}}}" if report.hide_set is not None else ""))
    for a in report.artifacts:
        print(f"  wrote {a}")
    return code


# --- check ------------------------------------------------------------------------------


def cmd_check(args) -> int:
    pf = load_problem(args.problem)
    problem = pf.problem
    observer = args.observer or problem.observer
    hide = _split_list(args.hide)
    if hide is None:
        raise UsageError("check needs --hide (use --hide '' for the empty set)")
    _check_names(problem.table, hide, "--hide")
    if not args.transducer:
        raise UsageError("check needs --transducer")
    try:
        with open(args.transducer, encoding="utf-8") as fh:
            t = parse_transducer(fh.read(), problem.table)
    except OSError as e:
        raise UsageError(f"cannot read transducer: {e.strerror}") from None
    except TransducerFormatError as e:
        raise UsageError(f"{args.transducer}: {e}") from None
    if observer == KNOWS_TRANSDUCER and any(s.conditional for s in problem.secrets):
        raise UsageError("the knows-transducer observer supports unconditional secrets only")

    report = RunReport(hide_set=tuple(hide))
    report.details["observer"] = observer
    langs = Languages(problem.table)
    t0 = time.perf_counter()
    spec_ok = check_spec(t, problem.spec, langs)
    report.details["realizesSpec"] = bool(spec_ok)
    lines = []
    revealed = False
    per_secret = []
    for k, s in enumerate(problem.secrets):
        if observer == PLAIN:
            v = check_hides(t, s, hide, langs)
        elif observer == KNOWS_SPEC:
            v = check_hides_know_spec(t, s, hide, problem.spec, langs)
        else:
            v = check_hides_knowing_transducer(t, s.secret, hide, langs)
        entry = {"secret": k, "hidden": bool(v)}
        if not v:
            revealed = True
            entry["input"] = v.counterexample.normalize().format(problem.table)
            entry["computation"] = v.computation.normalize().format(problem.table)
            lines.append(f"secret {k} revealed on input {entry['input']}")
            lines.append(f"  computation {entry['computation']}")
        per_secret.append(entry)
    report.details["secrets"] = per_secret
    if t.certificate is not None:
        if len(problem.secrets) == 1 and not problem.secrets[0].conditional:
            cv = check_certifying(t, problem.spec, problem.secrets[0].secret, tuple(hide))
            report.details["certificateValid"] = bool(cv)
            lines.append(f"certificate {'valid' if cv else 'invalid'}")
    report.add_time("solve", time.perf_counter() - t0)
    report.verdict = "revealed" if revealed else "hidden"
    if not spec_ok:
        lines.append(f"note: specification violated on input {spec_ok.counterexample.format(problem.table)}")
    if args.out:
        _Output(args.out).flush(report, args.timings)
    print(report.verdict)
    for ln in lines:
        print(ln)
    return EXIT_NO if revealed else EXIT_OK


# --- translate --------------------------------------------------------------------------


def _table_for(names_in, names_out, formulas):
    ins = names_in or []
    outs = list(names_out or [])
    seen = set(ins) | set(outs)
    for f in formulas:
        for a in sorted(atoms(f)):
            if a not in seen:
                outs.append(a)
                seen.add(a)
    return SignalTable.make(ins, outs)


def cmd_translate(args) -> int:
    kind = args.kind
    ins, outs = _split_list(args.inputs), _split_list(args.outputs)
    if args.hoa:
        try:
            with open(args.source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.source}: {e.strerror}") from None
        table = SignalTable.make(ins, outs) if (ins or outs) else None
        a = from_hoa(text, table)
        table = a.table
        formulas = []
    else:
        formulas = [parse_ltl(args.source)] + [parse_ltl(s) for s in args.secret or []]
        table = _table_for(ins, outs, formulas)
    noise = _split_list(args.noise) or []
    _check_names(table, noise, "--noise")
    emit = _emit_kinds(args.emit) or {"hoa"}

    if args.monitor:
        if args.hoa:
            raise UsageError("--monitor takes an LTL specification")
        if not args.secret:
            raise UsageError("--monitor needs at least one --secret")
        spec = formulas[0]
        secrets = [SecretSpec(f) for f in formulas[1:]]
        a = build_privacy_dpw(spec, secrets, noise, table)
        name = "privacy monitor"
    else:
        if args.secret:
            raise UsageError("--secret needs --monitor")
        if not args.hoa:
            a = ltl_to_ngbw(formulas[0], table) if kind == "ngbw" else ltl_to_nbw(formulas[0], table)
        if noise:
            if kind == "ngbw" and not args.hoa:
                a = ltl_to_nbw(formulas[0], table)
            a = simplify(apply_noise(a, noise))
        if kind == "dpw":
            a = determinize(a)
        name = args.source if not args.hoa else None
    out = {}
    if "hoa" in emit:
        out["automaton.hoa"] = to_hoa(a, name)
    if "dot" in emit:
        out["automaton.dot"] = to_dot(a)
    if args.out:
        o = _Output(args.out)
        for k, v in out.items():
            o.add(k, v)
        o.flush()
        for k in sorted(out):
            print(f"wrote {os.path.join(args.out, k)}")
    else:
        sys.stdout.write("".join(out[k] for k in sorted(out, reverse=True)))
    return EXIT_OK


# --- fixture ----------------------------------------------------------------------------


def cmd_fixture(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
    if args.kind in ("vertex-cover", "vertex-cover-knowledge"):
        g = parse_graph(text)
        try:
            fx = (vertex_cover_fixture if args.kind == "vertex-cover" else vertex_cover_knowledge_fixture)(g)
        except ValueError as e:
            raise UsageError(str(e)) from None
        budget = g.vertex_count if args.budget is None else args.budget
        observer = KNOWS_SPEC if args.kind == "vertex-cover-knowledge" else PLAIN
    else:
        ins = _split_list(args.inputs) or []
        a = from_hoa(text)
        aps = list(a.table.names)
        _check_names(a.table, ins, "--inputs")
        a = from_hoa(text, SignalTable.make(ins, [x for x in aps if x not in ins]))
        fx = hiding_hardness_fixture(a)
        budget = 0 if args.budget is None else args.budget
        observer = PLAIN
    if budget < 0:
        raise UsageError("--budget must be non-negative")
    problem = PrivacyProblem(fx.spec, [fx.secret], fx.table, budget, observer)
    out = _Output(args.out)
    out.add("spec.hoa", to_hoa(fx.spec, "specification"))
    out.add("secret.hoa", to_hoa(fx.secret, "secret"))
    out.add("problem.txt", format_problem(problem, {"spec": "spec.hoa", "secret0": "secret.hoa"}))
    out.flush()
    for k in sorted(out.files):
        print(f"wrote {os.path.join(args.out, k)}")
    return EXIT_OK


# --- entry --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="privsynth", description="Reactive synthesis with privacy.")
    p.add_argument("-v", "--verbose", action="store_true", help="log engine progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a transducer that hides the secrets")
    s.add_argument("problem")
    s.add_argument("--out", default="privsynth-out", help="artifact directory (default: %(default)s)")
    s.add_argument("--hide", help="fixed hide set, comma separated (skips the budget search)")
    s.add_argument("--bound", type=int, help="bounded synthesis with at most N states")
    s.add_argument("--certified", action="store_true", help="synthesize a certifying transducer")
    s.add_argument("--observer", choices=(PLAIN, KNOWS_SPEC), help="overrides the problem file")
    s.add_argument("--engine", choices=(SAFRALESS, COMPLETE), help="certified engine (default: complete)")
    s.add_argument("--parallel", type=int, default=1, metavar="K", help="evaluate K hide sets at a time")
    s.add_argument("--emit", help="extra artifacts: dot, hoa")
    s.add_argument("--seed", type=int, help="recorded in the report; engines are deterministic")
    s.add_argument("--no-minimize", action="store_true", help="keep the first winning maximal hide set")
    s.add_argument("--timings", action="store_true", help="include phase timings in report.json")
    s.set_defaults(run=cmd_synth)

    c = sub.add_parser("check", help="check that a transducer hides the secrets")
    c.add_argument("problem")
    c.add_argument("--transducer", help="transducer file")
    c.add_argument("--hide", help="hide set, comma separated")
    c.add_argument("--observer", choices=(PLAIN, KNOWS_SPEC, KNOWS_TRANSDUCER))
    c.add_argument("--out", help="write report.json here")
    c.add_argument("--timings", action="store_true")
    c.set_defaults(run=cmd_check)

    t = sub.add_parser("translate", help="translate a formula (or HOA file) to an automaton")
    t.add_argument("source", help="LTL formula, or a HOA path with --hoa")
    t.add_argument("--hoa", action="store_true", help="source is a HOA file")
    t.add_argument("--kind", choices=("ngbw", "nbw", "dpw"), default="nbw")
    t.add_argument("--inputs", help="signals to declare as inputs")
    t.add_argument("--outputs", help="signals to declare as outputs (others found in formulas are added)")
    t.add_argument("--noise", help="apply the noise operator for these hidden signals")
    t.add_argument("--monitor", action="store_true", help="emit the deterministic privacy monitor")
    t.add_argument("--secret", action="append", help="secret formula for --monitor (repeatable)")
    t.add_argument("--emit", help="dot, hoa (default hoa)")
    t.add_argument("--out", help="write files here instead of standard output")
    t.set_defaults(run=cmd_translate)

    f = sub.add_parser("fixture", help="emit a reduction fixture as HOA files plus a problem file")
    f.add_argument("kind", choices=("vertex-cover", "vertex-cover-knowledge", "hiding-hardness"))
    f.add_argument("input", help="graph file, or a HOA Buchi automaton for hiding-hardness")
    f.add_argument("--out", required=True)
    f.add_argument("--budget", type=int, help="problem budget (default: vertex count, or 0)")
    f.add_argument("--inputs", help="hiding-hardness: propositions that are inputs")
    f.set_defaults(run=cmd_fixture)
    return p


_INPUT_ERRORS = (UsageError, ProblemError, HoaError, GraphFormatError, LtlSyntaxError, UnknownSignalError,
                 TransducerFormatError, AutomatonError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.run(args)
    except _INPUT_ERRORS as e:
        print(f"privsynth: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
