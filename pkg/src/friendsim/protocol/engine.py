"""Running protocols under a perspective and comparing perspectives."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

from ..errors import FriendSimError, SemanticError, StepError, ZeroProbabilityOutcome
from ..measurement import collapse_measure, conditional_prepare, entangle_measure, postselect
from ..state import Event, conditional_probability, probability
from .model import (
    ConsistencyReport,
    Contradiction,
    Measure,
    Perspective,
    PerspectiveOutcome,
    PredictionClaim,
    Prepare,
    ProtocolSpec,
    QueryResult,
    Trace,
    TraceEntry,
)

__all__ = ["run", "resolve_perspective", "certain_claims", "contradiction_report"]

PerspectiveLike = Union[Perspective, str, None]


def resolve_perspective(spec: ProtocolSpec, perspective: PerspectiveLike) -> Perspective:
    """Look up a perspective by name (``None`` means the first declared one)
    and validate its overrides against the protocol."""
    if perspective is None:
        perspective = spec.default_perspective()
    elif isinstance(perspective, str):
        perspective = spec.perspective(perspective)
    for step_id, outcome in perspective.overrides:
        action = spec.step(step_id).action
        if not isinstance(action, Measure):
            raise SemanticError(f"perspective {perspective.name!r}: step {step_id!r} is not a measurement")
        if outcome is not None and outcome not in spec.basis(action.basis).vector_names:
            raise SemanticError(
                f"perspective {perspective.name!r}: step {step_id!r} has no outcome {outcome!r}"
            )
    return perspective


def run(spec: ProtocolSpec, perspective: PerspectiveLike = None) -> Trace:
    """Apply every step of ``spec`` in order, with ``perspective``'s overrides.

    Errors raised by a step are re-raised as :class:`StepError` carrying the
    step id.  Queries are evaluated on the state right after their step.
    """
    trace = _evolve(spec, resolve_perspective(spec, perspective))
    for query in spec.queries:
        at = trace.state_at(query.at)
        try:
            if query.given is None:
                value = probability(at, query.event)
            else:
                value = conditional_probability(at, query.given, query.event)
        except FriendSimError as exc:
            raise StepError(query.at, exc) from exc
        trace.queries.append(QueryResult(query, value))
    return trace


def _evolve(spec: ProtocolSpec, perspective: Perspective) -> Trace:
    overrides = perspective.override_map
    state = spec.initial_state()
    trace = Trace(perspective.name, state)
    for step in spec.steps:
        action = step.action
        prob = None
        mode = "entangle"
        try:
            if isinstance(action, Measure):
                basis = spec.basis(action.basis)
                chosen = overrides.get(step.id, action.collapse)
                if chosen is None:
                    state = entangle_measure(state, basis, action.recorder, action.outcome_map)
                else:
                    mode = f"collapse:{chosen}"
                    state, prob = collapse_measure(
                        state, basis, action.recorder, action.outcome_map, chosen
                    )
            elif isinstance(action, Prepare):
                mode = "prepare"
                state = conditional_prepare(state, action.control, action.target,
                                            {lab: list(sup) for lab, sup in action.rules})
            else:
                mode = "postselect"
                state, prob = postselect(state, action.event)
        except FriendSimError as exc:
            raise StepError(step.id, exc) from exc
        trace.entries.append(TraceEntry(step.id, state, prob, mode))
    return trace


def certain_claims(trace: Trace, events: Iterable[Event]) -> list[PredictionClaim]:
    """Probability of each event on the trace's final state; certain iff 0 or 1."""
    claims = []
    for event in events:
        p = probability(trace.final, event)
        claims.append(PredictionClaim(trace.perspective, event, p, p == 0 or p == 1))
    return claims


def contradiction_report(spec: ProtocolSpec, perspectives: Sequence[PerspectiveLike],
                         events: Sequence[Event],
                         common_postselect: Optional[Event] = None) -> ConsistencyReport:
    """Run each perspective and list events that one calls impossible and another possible.

    With ``common_postselect`` each final state is first conditioned on that
    event; a perspective in which it has probability 0 is marked inapplicable
    and takes no part in the comparison.
    """
    if len(perspectives) < 2:
        raise ValueError("a consistency check needs at least two perspectives")
    resolved = [resolve_perspective(spec, p) for p in perspectives]
    outcomes = []
    for persp in resolved:
        final = _evolve(spec, persp).final
        selection = None
        if common_postselect is not None:
            try:
                final, selection = postselect(final, common_postselect)
            except ZeroProbabilityOutcome:
                outcomes.append(PerspectiveOutcome(persp.name, False, probability(final, common_postselect), ()))
                continue
        probs = tuple((e, probability(final, e)) for e in events)
        outcomes.append(PerspectiveOutcome(persp.name, True, selection, probs))

    applicable = [o for o in outcomes if o.applicable]
    contradictions = []
    for k, event in enumerate(events):
        for i, a in enumerate(applicable):
            for b in applicable[i + 1:]:
                pa, pb = a.probabilities[k][1], b.probabilities[k][1]
                if (pa == 0) != (pb == 0):
                    contradictions.append(Contradiction(event, a.name, pa, b.name, pb))
    return ConsistencyReport(common_postselect, tuple(outcomes), tuple(contradictions))
