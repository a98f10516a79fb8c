"""How much the observer knows changes what stays hidden.

Run: python demos/observers.py
"""
from privsynth.ltl import parse_ltl
from privsynth.observer import compare_observer_strength
from privsynth.signals import SignalTable
from privsynth.transducer import Transducer

table = SignalTable.make(inputs=["p1", "p2"], outputs=["q"])
spec = parse_ltl("(q <-> p1) | G p2", table)
secret = parse_ltl("p1", table)
p1, q = table.bit("p1"), table.bit("q")
# repeats the first p1 on q from the second step on
copier = Transducer(table, [[1 if i & p1 else 0 for i in table.input_letters()]] * 2, [0, q], 0)

rep = compare_observer_strength(copier, secret, ["p1", "p2"], spec)
print(rep.format())
