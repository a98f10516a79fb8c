"""Reactive synthesis with privacy.

Synthesize transducers that realize an LTL specification while an observer of
the visible signals cannot tell whether a secret holds.
"""
from .automata import (
    AutomatonError, Buchi, CoBuchi, GenBuchi, LassoWitness, OmegaAutomaton, Parity, apply_noise,
    complement_dpw, dpw_to_nbw, dualize, intersect, is_empty, member_lasso, union,
)
from .bounded import bounded_synthesis
from .certified import CertifiedResult, check_certifying, synthesize_certified
from .closed import (
    Graph, closed_realizable, closed_search, hiding_hardness_fixture, parse_graph,
    vertex_cover_fixture, vertex_cover_knowledge_fixture,
)
from .games import ParityGame, solve_dpw, solve_parity
from .hoa import from_hoa, to_hoa
from .ltl import eval_on_lasso, parse_ltl
from .observer import (
    ObserverReport, build_know_spec_dpw, check_hides_know_spec, check_hides_knowing_transducer,
    compare_observer_strength, synthesize_know_spec,
)
from .privacy import (
    KNOWS_SPEC, KNOWS_TRANSDUCER, PLAIN, PrivacyProblem, PrivacySolution, SecretSpec, Unrealizable,
    Verdict, build_privacy_dpw, build_privacy_monitor, check_hides, check_spec, enumerate_hide_sets,
    synthesize_with_privacy, validate_solution,
)
from .problem import ProblemError, load_problem, parse_problem
from .safra import determinize
from .signals import INPUT, OUTPUT, LassoWord, Signal, SignalTable
from .tableau import ltl_to_nbw, ltl_to_ngbw
from .transducer import Transducer, parse_transducer

__version__ = "0.1.0"
