"""
Wigner and one friend
=====================

A spin, a light that flashes when the spin is up, and a friend who looks at
the light.  Wigner keeps the friend in superposition; the friend sees one
outcome.  How far apart are the two descriptions?
"""

from friendsim import inner_product, load_scenario, run
from friendsim.protocol import render_trace, trace_schema, trace_to_json

spec = load_scenario("wigner")

outside = run(spec, "ensemble")
print(render_trace(outside, float_echo=True))

###############################################################################
# Each of the friend's descriptions overlaps Wigner's by 1/sqrt(2).

for name in ("friend-up", "friend-down"):
    inside = run(spec, name)
    print(name, "overlap", inner_product(inside.final, outside.final))

###############################################################################
# Traces serialise to plain JSON with exact strings next to floats.

doc = trace_to_json(outside)
print(doc["steps"][-1]["state"][0])
print(sorted(trace_schema()["$defs"]))
