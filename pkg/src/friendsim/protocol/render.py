"""Text and JSON renderings of protocols, traces, reports and trace diffs.

All output is deterministic: terms are sorted by assignment and JSON keys
are emitted in a fixed order, so renderings can be used as golden files.
"""

from __future__ import annotations

import json
from importlib import resources

from ..scalar import ONE, RadicalScalar
from ..state import StateVector, render_state
from .model import (
    ConsistencyReport,
    Measure,
    Prepare,
    ProtocolSpec,
    Trace,
)

__all__ = [
    "render_protocol",
    "render_trace",
    "trace_to_json",
    "trace_schema",
    "dumps_json",
    "render_report",
    "report_to_json",
    "diff_states",
    "diff_traces",
    "render_diff",
]


# ---------------------------------------------------------------------------
# Protocol source
# ---------------------------------------------------------------------------

def _amp(c: RadicalScalar) -> str:
    text = str(c)
    return f"({text})" if len(c.items()) > 1 else text


def _lincomb(pairs) -> str:
    parts = []
    for i, (labels, c) in enumerate(pairs):
        ket = f"|{','.join(labels)}>"
        neg = c.is_monomial() and c.sign() < 0
        mag = -c if neg else c
        body = ket if mag == ONE else f"{_amp(mag)}{ket}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def render_protocol(spec: ProtocolSpec) -> str:
    """Canonical source text; ``parse_protocol(render_protocol(s)) == s``."""
    out = []
    for reg in spec.system.registers:
        line = f"register {reg.name} {{ {' '.join(reg.labels)} }}"
        if reg.ready_label is not None:
            line += f" ready {reg.ready_label}"
        out.append(line)
    for reg, sup in spec.initial:
        out.append(f"init {reg} = {_lincomb(((lab,), c) for lab, c in sup)}")
    for basis in spec.bases:
        vecs = "; ".join(f"{v.name} = {_lincomb(v.components)}" for v in basis.vectors)
        out.append(f"basis {basis.name} on {','.join(basis.subsystems)} {{ {vecs} }}")
    for step in spec.steps:
        a = step.action
        if isinstance(a, Measure):
            outs = "; ".join(f"{v} -> {lab}" for v, lab in a.outcomes)
            line = f"step {step.id} measure {a.basis} recorder {a.recorder} outcomes {{ {outs} }}"
            if a.collapse is not None:
                line += f" collapse {a.collapse}"
        elif isinstance(a, Prepare):
            rules = "; ".join(f"{lab} -> {_lincomb(((t,), c) for t, c in sup)}" for lab, sup in a.rules)
            line = f"step {step.id} prepare {a.target} by {a.control} {{ {rules} }}"
        else:
            line = f"step {step.id} postselect {a.event}"
        out.append(line)
    for p in spec.perspectives:
        items = "; ".join(f"{sid} collapse {o}" if o is not None else f"{sid} entangle"
                          for sid, o in p.overrides)
        out.append(f"perspective {p.name} {{ {items} }}" if items else f"perspective {p.name} {{ }}")
    for q in spec.queries:
        line = f"query {q.at} probability {q.event}"
        if q.given is not None:
            line += f" given {q.given}"
        out.append(line)
    if spec.check is not None:
        line = f"check {{ {'; '.join(str(e) for e in spec.check.events)} }}"
        if spec.check.postselect is not None:
            line += f" postselect {spec.check.postselect}"
        out.append(line)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

def _value(c: RadicalScalar, float_echo=True) -> str:
    return f"{c} ({float(c)!r})" if float_echo else str(c)


def render_trace(trace: Trace, float_echo: bool = False) -> str:
    """Human-readable trace.  Query lines always carry a float echo."""
    lines = [f"perspective: {trace.perspective}", "init:"]
    lines += ["  " + ln for ln in render_state(trace.initial, float_echo).splitlines()]
    for e in trace.entries:
        head = f"step {e.step_id} [{e.mode}]"
        if e.probability is not None:
            head += f" P = {_value(e.probability, float_echo)}"
        lines.append(head + ":")
        lines += ["  " + ln for ln in render_state(e.state, float_echo).splitlines()]
    if trace.queries:
        lines.append("queries:")
        for r in trace.queries:
            lines.append(f"  [{r.query.at}] {r.query.label()} = {_value(r.value)}")
    return "\n".join(lines) + "\n"


def _scalar_json(c: RadicalScalar) -> dict:
    return {"exact": str(c), "float": float(c)}


def _state_json(state: StateVector) -> list:
    names = state.system.names
    return [{"assignment": dict(zip(names, a)), "coeff": _scalar_json(c)} for a, c in state.items()]


def trace_to_json(trace: Trace) -> dict:
    steps = []
    for e in trace.entries:
        entry = {"id": e.step_id}
        if e.probability is not None:
            entry["probability"] = _scalar_json(e.probability)
        entry["state"] = _state_json(e.state)
        steps.append(entry)
    queries = []
    for r in trace.queries:
        event = str(r.query.event) if r.query.given is None else f"{r.query.event} | {r.query.given}"
        queries.append({"at": r.query.at, "event": event, "exact": str(r.value), "float": float(r.value)})
    return {"perspective": trace.perspective, "steps": steps, "queries": queries}


def trace_schema() -> dict:
    """JSON Schema that ``trace_to_json`` output (or a list of them) satisfies."""
    text = resources.files("friendsim").joinpath("trace.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Consistency reports
# ---------------------------------------------------------------------------

def render_report(report: ConsistencyReport) -> str:
    lines = []
    if report.postselect is not None:
        lines.append(f"postselect: {report.postselect}")
    for o in report.outcomes:
        if not o.applicable:
            lines.append(f"{o.name}: inapplicable (P({report.postselect}) = {o.selection_probability})")
            continue
        sel = f" (selected with P = {o.selection_probability})" if o.selection_probability is not None else ""
        lines.append(f"{o.name}{sel}:")
        for e, p in o.probabilities:
            lines.append(f"  P({e}) = {_value(p)}")
    if report.consistent:
        lines.append("NO CONTRADICTION")
    else:
        lines.append(f"CONTRADICTIONS: {len(report.contradictions)}")
        for c in report.contradictions:
            lines.append(
                f"  {c.event}: {c.first} P = {c.first_probability} vs {c.second} P = {c.second_probability}"
            )
    return "\n".join(lines) + "\n"


def report_to_json(report: ConsistencyReport) -> dict:
    return {
        "postselect": None if report.postselect is None else str(report.postselect),
        "perspectives": [
            {
                "name": o.name,
                "applicable": o.applicable,
                "selection_probability": None if o.selection_probability is None
                else _scalar_json(o.selection_probability),
                "probabilities": [{"event": str(e), **_scalar_json(p)} for e, p in o.probabilities],
            }
            for o in report.outcomes
        ],
        "contradictions": [
            {
                "event": str(c.event),
                "a": {"perspective": c.first, **_scalar_json(c.first_probability)},
                "b": {"perspective": c.second, **_scalar_json(c.second_probability)},
            }
            for c in report.contradictions
        ],
    }


# ---------------------------------------------------------------------------
# Trace diff
# ---------------------------------------------------------------------------

def diff_states(a: StateVector, b: StateVector):
    """``(only_a, only_b, changed)`` keyed by assignment."""
    ta, tb = a.terms, b.terms
    only_a = sorted((k, v) for k, v in ta.items() if k not in tb)
    only_b = sorted((k, v) for k, v in tb.items() if k not in ta)
    changed = sorted((k, ta[k], tb[k]) for k in ta.keys() & tb.keys() if ta[k] != tb[k])
    return only_a, only_b, changed


def diff_traces(a: Trace, b: Trace) -> dict:
    """Step-aligned comparison of two traces of the same protocol."""
    steps = []
    first = None
    for ea, eb in zip(a.entries, b.entries):
        only_a, only_b, changed = diff_states(ea.state, eb.state)
        same = not (only_a or only_b or changed)
        if not same and first is None:
            first = ea.step_id
        steps.append({
            "id": ea.step_id,
            "identical": same,
            "only_a": [{"assignment": list(k), "coeff": str(v)} for k, v in only_a],
            "only_b": [{"assignment": list(k), "coeff": str(v)} for k, v in only_b],
            "changed": [{"assignment": list(k), "a": str(x), "b": str(y)} for k, x, y in changed],
        })
    return {
        "a": a.perspective,
        "b": b.perspective,
        "identical": first is None,
        "first_divergence": first,
        "steps": steps,
    }


def render_diff(diff: dict) -> str:
    a, b = diff["a"], diff["b"]
    lines = [f"trace-diff {a} vs {b}"]
    if diff["identical"]:
        lines.append(f"identical: all {len(diff['steps'])} steps match")
        return "\n".join(lines) + "\n"
    lines.append(f"first divergence at step {diff['first_divergence']}")
    for s in diff["steps"]:
        if s["identical"]:
            lines.append(f"step {s['id']}: identical")
            continue
        lines.append(f"step {s['id']}: differs")
        for t in s["only_a"]:
            lines.append(f"  - {t['coeff']} · |{','.join(t['assignment'])}⟩   (only in {a})")
        for t in s["only_b"]:
            lines.append(f"  + {t['coeff']} · |{','.join(t['assignment'])}⟩   (only in {b})")
        for t in s["changed"]:
            lines.append(f"  ~ |{','.join(t['assignment'])}⟩: {t['a']} -> {t['b']}")
    return "\n".join(lines) + "\n"
