import pytest

import golden
from friendsim.errors import ProtocolSyntaxError, SemanticError, StepError, ZeroProbabilityOutcome
from friendsim.protocol import (
    Perspective,
    certain_claims,
    contradiction_report,
    diff_traces,
    parse_event,
    parse_protocol,
    render_protocol,
    render_trace,
    run,
)
from friendsim.scalar import as_scalar, invert_monomial, sqrt_int
from friendsim.scenarios import scenario_text
from friendsim.state import Event, decompose, probability


def inv_sqrt(n):
    return invert_monomial(sqrt_int(n))


MINI = """
register q { a b }
register m { r a b } ready r
init q = 1/sqrt(2)|a> + 1/sqrt(2)|b>
step 1 measure q recorder m outcomes { a -> a; b -> b }
"""


# -- parsing ------------------------------------------------------------------

def test_parse_ewf_shape(ewf):
    assert len(ewf.system.registers) == 8
    assert ewf.step_ids == ("00a", "00b", "10", "20a", "20b", "30a", "30b")
    assert [b.name for b in ewf.bases] == ["labbar", "lab"]
    assert [p.name for p in ewf.perspectives] == ["ensemble", "fbar-collapse", "wbar-collapse"]
    assert ewf.check is not None and ewf.check.postselect == Event.of(Wbar="ok")


def test_parse_mini():
    spec = parse_protocol(MINI)
    assert spec.system.names == ("q", "m")
    assert spec.default_perspective().name == "default"
    trace = run(spec)
    assert len(trace.final) == 2


@pytest.mark.parametrize("text", ["", "   \n# only a comment\n"])
def test_empty_input_is_syntax_error(text):
    with pytest.raises(ProtocolSyntaxError):
        parse_protocol(text)


def test_syntax_error_position():
    with pytest.raises(ProtocolSyntaxError) as info:
        parse_protocol("register q { a b }\nregister m { r a b ) ready r\n")
    assert (info.value.line, info.value.col) == (2, 20)


@pytest.mark.parametrize("fragment", [
    "register q { a a }",
    "basis x on q { u = 1/sqrt(2)|a> + 1/sqrt(2)|b>; v = 1/sqrt(2)|a> + 1/sqrt(2)|b> }",
    "basis x on q { u = |a> + |b> }",
    "step 2 measure nope recorder m outcomes { a -> a }",
    "step 2 measure q recorder nobody outcomes { a -> a }",
    "step 1 measure q recorder m outcomes { a -> a; b -> b }",
    "query 9 probability q=a",
    "query 1 probability q=zzz",
    "perspective p { 7 collapse a }",
])
def test_semantic_errors(fragment):
    with pytest.raises((SemanticError, ProtocolSyntaxError)):
        parse_protocol(MINI + fragment + "\n")


def test_non_orthogonal_basis_is_semantic_error():
    with pytest.raises(SemanticError):
        parse_protocol(MINI + "basis x on q { u = 1/sqrt(2)|a> + 1/sqrt(2)|b>; "
                              "v = 1/sqrt(2)|a> + 1/sqrt(2)|b> }\n")


def test_undeclared_register_in_init():
    with pytest.raises(SemanticError):
        parse_protocol("register q { a b }\ninit z = |a>\n")


def test_parse_event(ewf):
    ev = parse_event("W_L=ok & Wbar=ok", ewf)
    assert ev == Event.of(W_L="ok", Wbar="ok")
    assert parse_event("labbar:okbar", ewf).registers == ("coin", "Fbar")
    with pytest.raises((SemanticError, ProtocolSyntaxError)):
        parse_event("W_L=maybe", ewf)


def test_render_protocol_round_trip(ewf):
    again = parse_protocol(render_protocol(ewf))
    assert again == ewf
    assert render_protocol(again) == render_protocol(ewf)


def test_scenario_text_is_packaged():
    assert "register coin" in scenario_text("ewf")
    with pytest.raises(KeyError):
        scenario_text("nope")


# -- golden traces ------------------------------------------------------------

def test_ensemble_trace_matches_golden(ewf, golden_states):
    trace = run(ewf, "ensemble")
    assert trace.initial == golden_states["ensemble"]["init"]
    for step_id, psi in golden_states["ensemble"].items():
        if step_id != "init":
            assert trace.state_at(step_id) == psi, step_id
    assert all(e.probability is None for e in trace.entries)


def test_collapse_trace_matches_golden(ewf, golden_states):
    trace = run(ewf, "fbar-collapse")
    for step_id, psi in golden_states["collapse"].items():
        assert trace.state_at(step_id) == psi, step_id
    assert trace.entry("00a").probability == as_scalar("2/3")
    assert trace.entry("00a").mode == "collapse:t"


def test_psi7_prime_is_psi7(system, golden_states):
    assert golden.psi7_prime().to_state(system) == golden_states["ensemble"]["30b"]


def test_collapse_primed_views(ewf, system, golden_states):
    assert golden.psic3_prime().to_state(system) == golden_states["collapse"]["10"]
    assert golden.psic5_prime().to_state(system) == golden_states["collapse"]["20b"]
    assert golden.psic7_prime().to_state(system) == golden_states["collapse"]["30b"]
    # the primed psi_c5 has no W_L=ok component in the lab basis
    dec = decompose(golden_states["collapse"]["20b"], ewf.basis("lab"))
    assert not dec.branch("ok")


def test_ensemble_queries(ewf):
    values = {(r.query.at, r.query.label()): r.value for r in run(ewf).queries}
    assert values[("30b", "P(W_L=ok & Wbar=ok)")] == as_scalar("1/12")
    assert values[("30b", "P(W_L=ok)")] == as_scalar("1/6")
    assert values[("30b", "P(W_L=f)")] == as_scalar("5/6")
    assert values[("10", "P(coin=t | F=u)")] == 1
    assert values[("20a", "P(F=u | Wbar=ok)")] == 1


def test_fbar_collapse_queries(ewf):
    values = {r.query.label(): r.value for r in run(ewf, "fbar-collapse").queries if r.query.at == "30b"}
    assert values["P(W_L=f)"] == 1
    assert values["P(W_L=ok)"] == 0
    assert values["P(W_L=ok & Wbar=ok)"] == 0


def test_wbar_collapse(ewf):
    trace = run(ewf, "wbar-collapse")
    assert trace.entry("20a").probability == as_scalar("1/6")
    assert probability(trace.final, Event.of(W_L="ok")) == as_scalar("1/2")
    assert probability(trace.final, Event.of(Wbar="ok")) == 1


def test_override_to_entangle_restores_ensemble(ewf):
    persp = ewf.perspective("fbar-collapse").with_override("00a", None, "undo")
    assert run(ewf, persp).final == run(ewf, "ensemble").final


def test_bad_override_rejected(ewf):
    with pytest.raises(SemanticError):
        run(ewf, Perspective("x", (("00b", "h"),)))
    with pytest.raises(SemanticError):
        run(ewf, Perspective("x", (("00a", "edge"),)))


def test_step_error_carries_step_id(ewf):
    # collapsing onto ok at 30a is impossible once the coin came up tails
    persp = ewf.perspective("fbar-collapse").with_override("30a", "ok")
    with pytest.raises(StepError) as info:
        run(ewf, persp)
    assert info.value.step_id == "30a"
    assert isinstance(info.value.cause, ZeroProbabilityOutcome)


def test_run_is_deterministic(ewf):
    a = render_trace(run(ewf, "ensemble"), float_echo=True)
    b = render_trace(run(ewf, "ensemble"), float_echo=True)
    assert a == b


# -- wigner -----------------------------------------------------------------

def test_wigner_views(wigner):
    states = {k: v.to_state(wigner.system) for k, v in golden.wigner_states().items()}
    assert run(wigner, "ensemble").final == states["superposition"]
    assert run(wigner, "friend-up").final == states["up"]
    assert run(wigner, "friend-down").final == states["down"]
    assert run(wigner, "friend-up").entry("10b").probability == as_scalar("1/2")


def test_wigner_check_disagrees(wigner):
    report = contradiction_report(wigner, ["friend-up", "friend-down"],
                                  list(wigner.check.events))
    assert not report.consistent
    assert {c.event for c in report.contradictions} == set(wigner.check.events)


# -- claims and consistency ------------------------------------------------

def test_certain_claims(ewf):
    events = [Event.of(W_L="f"), Event.of(W_L="ok")]
    collapsed = certain_claims(run(ewf, "fbar-collapse"), events)
    assert [(c.probability, c.certain) for c in collapsed] == [(1, True), (0, True)]
    ens = certain_claims(run(ewf, "ensemble"), events)
    assert [c.certain for c in ens] == [False, False]


def test_contradiction_report(ewf):
    report = contradiction_report(ewf, ["ensemble", "fbar-collapse"],
                                  list(ewf.check.events), ewf.check.postselect)
    assert len(report.contradictions) == 1
    c = report.contradictions[0]
    assert c.event == Event.of(W_L="ok")
    assert (c.first, c.first_probability) == ("ensemble", as_scalar("1/2"))
    assert (c.second, c.second_probability) == ("fbar-collapse", 0)
    sel = {o.name: o.selection_probability for o in report.outcomes}
    assert sel == {"ensemble": as_scalar("1/6"), "fbar-collapse": as_scalar("1/2")}


def test_contradiction_report_without_postselect(ewf):
    report = contradiction_report(ewf, ["ensemble", "fbar-collapse"], [Event.of(W_L="ok")])
    assert len(report.contradictions) == 1
    assert report.contradictions[0].first_probability == as_scalar("1/6")


def test_no_contradiction_for_identical_perspectives(ewf):
    report = contradiction_report(ewf, ["ensemble", "ensemble"],
                                  list(ewf.check.events), ewf.check.postselect)
    assert report.consistent


def test_certain_event_is_never_flagged(ewf):
    # W_L=f is possible for both, so it never produces an entry
    report = contradiction_report(ewf, ["ensemble", "fbar-collapse"],
                                  [Event.of(W_L="f")], ewf.check.postselect)
    assert report.consistent


def test_inapplicable_perspective(ewf):
    persp = Perspective("wbar-f", (("20a", "fbar"),))
    report = contradiction_report(ewf, ["ensemble", persp], [Event.of(W_L="ok")],
                                  Event.of(Wbar="ok"))
    outcome = {o.name: o for o in report.outcomes}["wbar-f"]
    assert not outcome.applicable
    assert report.consistent


def test_report_needs_two_perspectives(ewf):
    with pytest.raises(ValueError):
        contradiction_report(ewf, ["ensemble"], [Event.of(W_L="ok")])


# -- trace diff ---------------------------------------------------------------

def test_diff_traces(ewf):
    d = diff_traces(run(ewf, "ensemble"), run(ewf, "fbar-collapse"))
    assert d["first_divergence"] == "00a"
    step = next(s for s in d["steps"] if s["id"] == "30a")
    w = ewf.system.index("W_L")
    assert any(t["assignment"][w] == "ok" for t in step["only_a"])
    assert all(t["assignment"][w] != "ok" for t in step["only_b"])
    same = diff_traces(run(ewf), run(ewf))
    assert same["identical"] and same["first_divergence"] is None
