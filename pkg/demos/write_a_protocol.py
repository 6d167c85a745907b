"""
Writing a protocol by hand
==========================

A qubit is read in the diagonal basis by a detector, then a second observer
reads the detector.  The protocol language takes registers, bases, steps and
perspectives; everything stays exact.
"""

from friendsim import Event, StepError, decompose, probability, run
from friendsim.protocol import parse_protocol, render_protocol
from friendsim.scalar import sqrt_int

TEXT = """
register q   { z0 z1 }
register det { r plus minus } ready r
register obs { r plus minus } ready r

init q = 3/5|z0> + 4/5|z1>

basis x on q {
  plus  = 1/sqrt(2)|z0> + 1/sqrt(2)|z1>;
  minus = 1/sqrt(2)|z0> - 1/sqrt(2)|z1>
}

step read  measure x recorder det outcomes { plus -> plus; minus -> minus }
step check measure det recorder obs outcomes { plus -> plus; minus -> minus }

perspective outside { }
perspective detector-saw-plus { read collapse plus }

query check probability obs=plus
query check probability obs=plus given det=plus
"""

spec = parse_protocol(TEXT)
trace = run(spec, "outside")
for r in trace.queries:
    print(r.query.label(), "=", r.value, f"({float(r.value):.6f})")

###############################################################################
# The diagonal amplitudes carry sqrt(2) but the probabilities are rational.

plus = probability(trace.final, Event.of(obs="plus"))
print(plus, plus == ((3 + 4) * sqrt_int(2) / 10) ** 2)

###############################################################################
# Rewrite the initial state in the diagonal basis.

view = decompose(trace.initial, spec.basis("x"))
for name, branch in view.branches:
    print(name, [str(c) for c in branch.terms.values()])

###############################################################################
# The detector's collapsed view, and the protocol rendered back to text.

print(run(spec, "detector-saw-plus").entry("read").probability)
print(render_protocol(spec))

###############################################################################
# With 1/sqrt(3) and sqrt(2/3) instead, P(det=plus) is 1/2 + sqrt(2)/3.
# That has no exact square root, so conditioning on it is refused rather
# than rounded.

irrational = parse_protocol(TEXT.replace("3/5|z0> + 4/5|z1>", "1/sqrt(3)|z0> + sqrt(2)/sqrt(3)|z1>"))
try:
    run(irrational, "outside")
except StepError as exc:
    print(exc)
