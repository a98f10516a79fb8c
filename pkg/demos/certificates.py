"""A secret every machine hides, yet no machine can certify.

The secret relates each output to the next input.  Hiding the output keeps it
private, but a certificate would have to commit to the flipped value before the
input arrives.

Run: python demos/certificates.py
"""
from privsynth.certified import COMPLETE, SAFRALESS, check_certifying, synthesize_certified
from privsynth.ltl import parse_ltl
from privsynth.privacy import Languages, check_hides
from privsynth.signals import SignalTable
from privsynth.transducer import all_transducers

io = SignalTable.make(inputs=["i"], outputs=["o"])
secret = parse_ltl("G(o <-> X i)", io)
langs = Languages(io)
machines = [t for n in (1, 2) for t in all_transducers(io, n)]
hidden = sum(bool(check_hides(t, secret, ["o"], langs)) for t in machines)
print(f"machines with at most 2 states hiding the secret: {hidden}/{len(machines)}")
for engine in (SAFRALESS, COMPLETE):
    res = synthesize_certified(parse_ltl("true", io), secret, ["o"], io, engine=engine)
    print(f"{engine}: certifying machine {'found' if res else 'absent'}")

# a secret about the present has a certificate
iop = SignalTable.make(inputs=["i"], outputs=["o", "p"])
spec, now = parse_ltl("G(o <-> i)", iop), parse_ltl("X p", iop)
res = synthesize_certified(spec, now, ["p"], iop)
print(f"X p with p hidden: {res.engine} engine, visit bound {res.bound}, {res.transducer.n_states} states")
print("certificate checks out:", bool(check_certifying(res.transducer, spec, now, ["p"])))
