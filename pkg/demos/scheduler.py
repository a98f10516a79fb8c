"""Two-client arbiter that keeps the first client's request pattern private.

Run: python demos/scheduler.py
"""
from privsynth.ltl import parse_ltl
from privsynth.privacy import PrivacyProblem, check_hides, check_spec, synthesize_with_privacy
from privsynth.signals import SignalTable
from privsynth.transducer import Transducer

table = SignalTable.make(inputs=["req1", "req2"], outputs=["grant1", "grant2"])
spec = parse_ltl("G(!grant1 | !grant2) & G(req1 -> F grant1) & G(req2 -> F grant2)", table)
# grant1 only ever answers a pending req1
only_on_request = parse_ltl("((!grant1) W req1) & G(grant1 -> X((!grant1) W req1))", table)
# every request is granted within one step
prompt = parse_ltl("G((req1 -> grant1 | X grant1) & (req2 -> grant2 | X grant2))", table)

sol = synthesize_with_privacy(PrivacyProblem(spec, [only_on_request], table, budget=1))
print("hide set tried, in order:")
for e in sol.log:
    print(f"  {{{', '.join(e['hidden'])}}}: {'realizable' if e['realizable'] else 'unrealizable'}")
print(f"chosen: {{{', '.join(sol.hidden)}}} at cost {sol.cost}, {sol.transducer.n_states} states")

# granting in turn satisfies the arbiter spec but cannot keep promptness secret
g1, g2 = table.bit("grant1"), table.bit("grant2")
alternator = Transducer(table, [[1] * 4, [0] * 4], [g1, g2], 1)
print("alternator realizes spec:", bool(check_spec(alternator, spec)))
v = check_hides(alternator, prompt, ["req1", "req2"])
print("alternator hides promptness with both requests hidden:", bool(v))
if not v:
    print("  revealing input:", v.counterexample.format(table))
