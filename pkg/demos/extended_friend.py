"""
Two friends, two supervisors, one disagreement
==============================================

Run the built-in four-agent scenario twice, once with every measurement
treated as an entangling record and once with Fbar's coin reading treated
as a collapse, then ask both runs the same question.
"""

from friendsim import Event, contradiction_report, load_scenario, probability, run
from friendsim.protocol import render_trace

spec = load_scenario("ewf")
print(spec.step_ids)

###############################################################################
# No collapse anywhere: the whole lab stays in superposition
# -----------------------------------------------------------

ensemble = run(spec, "ensemble")
for r in ensemble.queries:
    print(f"[{r.query.at}] {r.query.label()} = {r.value}")

###############################################################################
# The final state has sixteen terms once the lab vectors are expanded.

print(len(ensemble.final), "terms")
print(render_trace(ensemble).split("step 30b")[1].split("queries")[0])

###############################################################################
# Fbar's view: the coin came up tails
# -----------------------------------

collapsed = run(spec, "fbar-collapse")
print("P(coin=t) at 00a:", collapsed.entry("00a").probability)
print("P(W_L=ok) afterwards:", probability(collapsed.final, Event.of(W_L="ok")))

###############################################################################
# Condition both on Wbar reading ok and compare what each predicts for W.

report = contradiction_report(spec, ["ensemble", "fbar-collapse"],
                              [Event.of(W_L="ok"), Event.of(W_L="f")],
                              Event.of(Wbar="ok"))
for c in report.contradictions:
    print(f"{c.event}: {c.first} says {c.first_probability}, {c.second} says {c.second_probability}")

###############################################################################
# Letting Wbar collapse instead of Fbar changes nothing on the halting run:
# 1/6 for okbar, then 1/2 for ok, the same 1/12 as before.

wbar = run(spec, "wbar-collapse")
p1 = wbar.entry("20a").probability
p2 = probability(wbar.final, Event.of(W_L="ok"))
print(p1, "*", p2, "=", p1 * p2)
