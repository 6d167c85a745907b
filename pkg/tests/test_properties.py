"""Randomised cross-checks of the exact simulator against the dense float oracle."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from dense_oracle import DenseSystem
from friendsim.errors import NonMonomialNorm, ZeroCondition, ZeroProbabilityOutcome
from friendsim.measurement import entangle_measure, postselect
from friendsim.protocol import contradiction_report, parse_protocol, render_protocol, run
from friendsim.scalar import ZERO
from friendsim.state import (
    BasisAtom,
    Event,
    LabelAtom,
    conditional_probability,
    decompose,
    inner_product,
    norm_squared,
    probability,
)
from randproto import RandomProtocol

seeds = st.integers(0, 2**32 - 1)


def evolve(proto):
    states = [proto.initial]
    for basis, rec, omap in proto.steps:
        states.append(entangle_measure(states[-1], basis, rec, omap))
    return states


def label_events(system):
    for reg in system.registers:
        for lab in reg.labels:
            yield Event.of(LabelAtom(reg.name, lab))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_label_probabilities_match_dense(seed):
    proto = RandomProtocol(seed)
    dense = DenseSystem(proto.system)
    for psi in evolve(proto):
        ref = dense.from_exact(psi)
        assert math.isclose(dense.norm2(ref), 1.0, abs_tol=1e-9)
        for ev in label_events(proto.system):
            (atom,) = ev.atoms
            assert math.isclose(float(probability(psi, ev)),
                                dense.prob_label(ref, atom.register, atom.label), abs_tol=1e-9)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_basis_probabilities_match_dense(seed):
    proto = RandomProtocol(seed)
    dense = DenseSystem(proto.system)
    final = evolve(proto)[-1]
    ref = dense.from_exact(final)
    for basis in proto.bases:
        total = ZERO
        for v in basis.vectors:
            p = probability(final, Event((BasisAtom(basis, v.name),)))
            assert math.isclose(float(p), dense.prob_vector(ref, v), abs_tol=1e-9)
            total += p
        assert total == 1


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_decompose_reconstructs_and_preserves_weight(seed):
    proto = RandomProtocol(seed)
    for psi in evolve(proto):
        for basis in proto.bases:
            dec = decompose(psi, basis)
            assert dec.reconstruct() == psi
            weight = norm_squared(dec.residual)
            for _, branch in dec.branches:
                weight += norm_squared(branch)
            assert weight == 1


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_conditional_probability_is_a_ratio(seed, data):
    proto = RandomProtocol(seed)
    final = evolve(proto)[-1]
    events = list(label_events(proto.system))
    given_ev = data.draw(st.sampled_from(events))
    query = data.draw(st.sampled_from(events))
    pg = probability(final, given_ev)
    if not pg:
        try:
            conditional_probability(final, given_ev, query)
        except ZeroCondition:
            return
        raise AssertionError("expected ZeroCondition")
    both = given_ev.conjoin(query)
    joint = ZERO if both is None else probability(final, both)
    cond = conditional_probability(final, given_ev, query)
    assert cond * pg == joint
    assert math.isclose(float(cond), float(joint) / float(pg), abs_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_postselect_matches_conditional(seed, data):
    proto = RandomProtocol(seed)
    final = evolve(proto)[-1]
    events = list(label_events(proto.system))
    sel = data.draw(st.sampled_from(events))
    try:
        selected, p = postselect(final, sel)
    except ZeroProbabilityOutcome:
        assert probability(final, sel) == 0
        return
    except NonMonomialNorm:
        return
    assert p == probability(final, sel)
    assert norm_squared(selected) == 1
    for query in events:
        assert probability(selected, query) == conditional_probability(final, sel, query)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_inner_product_symmetric_and_cauchy_schwarz(seed):
    states = evolve(RandomProtocol(seed))
    a, b = states[0], states[-1]
    ab = inner_product(a, b)
    assert ab == inner_product(b, a)
    assert float(ab) ** 2 <= float(norm_squared(a)) * float(norm_squared(b)) + 1e-12


def test_identical_perspectives_never_contradict(ewf, wigner):
    for spec in (ewf, wigner):
        events = list(spec.check.events)
        for p in spec.perspectives:
            assert contradiction_report(spec, [p.name, p.name], events).consistent


def test_render_round_trip_runs_identically(ewf, wigner):
    for spec in (ewf, wigner):
        again = parse_protocol(render_protocol(spec))
        for p in spec.perspectives:
            assert run(again, p.name).final == run(spec, p.name).final
