"""State-transforming steps: entangling and collapsing measurements,
conditional preparation, and postselection.

All four are pure functions of their inputs.  Entangling measurement never
drops a branch: each basis component of the measured subsystems is correlated
with its own recorder label.  Collapse keeps one branch and renormalizes by
the exact reciprocal of its amplitude norm, which is only possible when the
branch probability is rational.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import (
    MeasurementError,
    NonUnitRule,
    OutcomeMapIncomplete,
    RecorderNotReady,
    RuleMissing,
    SpanError,
    TargetNotReady,
    ZeroProbabilityOutcome,
)
from .scalar import ZERO, RadicalScalar, as_scalar, invert_monomial, sqrt_rational
from .state import Basis, Event, StateVector, decompose, embed, norm_squared, project

__all__ = [
    "entangle_measure",
    "collapse_measure",
    "conditional_prepare",
    "postselect",
]


def _check_recorder(state: StateVector, basis: Basis, recorder: str, outcome_map: Mapping[str, str]):
    system = state.system
    reg = system.register(recorder)
    if recorder in basis.subsystems:
        raise MeasurementError(f"recorder {recorder!r} is one of the measured subsystems")
    missing = [v for v in basis.vector_names if v not in outcome_map]
    if missing:
        raise OutcomeMapIncomplete(f"no recorder label for outcome(s) {missing}")
    extra = set(outcome_map) - set(basis.vector_names)
    if extra:
        raise OutcomeMapIncomplete(f"outcome map names unknown vectors {sorted(extra)}")
    for v, lab in outcome_map.items():
        if lab not in reg.labels:
            raise MeasurementError(f"{lab!r} is not a label of recorder {recorder!r}")
    if reg.ready_label is None:
        raise RecorderNotReady(f"recorder {recorder!r} has no ready label")
    i = system.index(recorder)
    for a in state.terms:
        if a[i] != reg.ready_label:
            raise RecorderNotReady(
                f"recorder {recorder!r} already holds {a[i]!r} in term {a}"
            )


def _spanning_decomposition(state: StateVector, basis: Basis):
    dec = decompose(state, basis)
    if dec.residual:
        raise SpanError(
            f"state has {len(dec.residual)} term(s) outside the span of basis {basis.name!r}"
        )
    return dec


def entangle_measure(state: StateVector, basis: Basis, recorder: str,
                     outcome_map: Mapping[str, str]) -> StateVector:
    """Record the ``basis`` outcome in ``recorder`` without collapsing.

    Returns ``sum_i |b_i> (x) branch_i`` with the recorder set to
    ``outcome_map[b_i]`` inside branch ``i``.  Norm is preserved exactly.
    """
    _check_recorder(state, basis, recorder, outcome_map)
    dec = _spanning_decomposition(state, basis)
    out = StateVector(state.system)
    for name, branch in dec.branches:
        if branch:
            out = out + embed(basis.vector(name), branch.relabel(recorder, outcome_map[name]),
                              state.system)
    return out


def _renormalize(state: StateVector, prob: RadicalScalar) -> StateVector:
    # sqrt_rational raises NonMonomialNorm for irrational probabilities
    return state.scale(invert_monomial(sqrt_rational(prob)))


def collapse_measure(state: StateVector, basis: Basis, recorder: str,
                     outcome_map: Mapping[str, str], chosen: str):
    """Project onto outcome ``chosen``, record it, and renormalize.

    Returns ``(new_state, p)`` where ``p`` is the probability of ``chosen``
    on the input state.
    """
    if chosen not in basis.vector_names:
        raise MeasurementError(f"basis {basis.name!r} has no outcome {chosen!r}")
    _check_recorder(state, basis, recorder, outcome_map)
    dec = _spanning_decomposition(state, basis)
    branch = dec.branch(chosen)
    prob = norm_squared(branch)
    if not prob:
        raise ZeroProbabilityOutcome(f"outcome {chosen!r} of {basis.name!r} has probability 0")
    kept = embed(basis.vector(chosen), branch.relabel(recorder, outcome_map[chosen]), state.system)
    return _renormalize(kept, prob), prob


def _unit_superposition(pairs: Iterable, what: str):
    merged: dict[str, RadicalScalar] = {}
    for lab, c in pairs:
        merged[lab] = merged.get(lab, ZERO) + (c if isinstance(c, RadicalScalar) else as_scalar(c))
    merged = {k: v for k, v in merged.items() if v}
    n2 = ZERO
    for c in merged.values():
        n2 = n2 + c * c
    if n2 != 1:
        raise NonUnitRule(f"{what} has squared norm {n2}")
    return merged


def conditional_prepare(state: StateVector, control: str, target: str,
                        rules: Mapping[str, Iterable]) -> StateVector:
    """Set ``target`` according to the label of ``control`` in each term.

    ``rules`` maps a control label to a unit superposition
    ``[(target_label, amplitude), ...]``.
    """
    system = state.system
    treg = system.register(target)
    ci, ti = system.index(control), system.index(target)
    if ci == ti:
        raise MeasurementError("control and target must differ")
    parsed = {}
    for lab, pairs in rules.items():
        sup = _unit_superposition(pairs, f"rule {lab!r} -> {target}")
        bad = [t for t in sup if t not in treg.labels]
        if bad:
            raise MeasurementError(f"{bad} are not labels of {target!r}")
        parsed[lab] = sup
    terms = []
    for a, c in state.terms.items():
        if treg.ready_label is None or a[ti] != treg.ready_label:
            raise TargetNotReady(f"target {target!r} holds {a[ti]!r} in term {a}")
        sup = parsed.get(a[ci])
        if sup is None:
            raise RuleMissing(f"no rule for {control}={a[ci]}")
        for lab, w in sup.items():
            terms.append((a[:ti] + (lab,) + a[ti + 1:], c * w))
    return StateVector(system, terms)


def postselect(state: StateVector, event: Event):
    """Condition on ``event``: return ``(renormalized projection, P(event))``."""
    kept = project(state, event)
    prob = norm_squared(kept)
    if not prob:
        raise ZeroProbabilityOutcome(f"postselection on {event} has probability 0")
    return _renormalize(kept, prob), prob
