"""Exact simulation of multi-agent measurement protocols (Wigner's friend and
its extended four-agent version) under entangling and collapsing measurement.
"""

from .errors import (
    FriendSimError,
    NotMonomial,
    NonMonomialDivision,
    NonMonomialNorm,
    StateError,
    SystemMismatch,
    NonUnitInit,
    SpanError,
    ZeroCondition,
    ZeroProbabilityOutcome,
    MeasurementError,
    RecorderNotReady,
    OutcomeMapIncomplete,
    TargetNotReady,
    RuleMissing,
    NonUnitRule,
    ProtocolError,
    ProtocolSyntaxError,
    SemanticError,
    StepError,
)
from .measurement import collapse_measure, conditional_prepare, entangle_measure, postselect
from .protocol import (
    Perspective,
    ProtocolSpec,
    Trace,
    certain_claims,
    contradiction_report,
    parse_protocol,
    render_protocol,
    render_trace,
    run,
    trace_to_json,
)
from .scalar import ONE, ZERO, RadicalScalar, invert_monomial, sqrt_int, sqrt_rational, to_float
from .scenarios import load_scenario
from .state import (
    Basis,
    BasisAtom,
    BasisVector,
    Event,
    LabelAtom,
    RegisterSpec,
    StateVector,
    SystemSpec,
    build_initial,
    conditional_probability,
    decompose,
    inner_product,
    norm_squared,
    probability,
)

__version__ = "0.1.0"

__all__ = [
    "FriendSimError",
    "NotMonomial",
    "NonMonomialDivision",
    "NonMonomialNorm",
    "StateError",
    "SystemMismatch",
    "NonUnitInit",
    "SpanError",
    "ZeroCondition",
    "ZeroProbabilityOutcome",
    "MeasurementError",
    "RecorderNotReady",
    "OutcomeMapIncomplete",
    "TargetNotReady",
    "RuleMissing",
    "NonUnitRule",
    "ProtocolError",
    "ProtocolSyntaxError",
    "SemanticError",
    "StepError",
    "collapse_measure",
    "conditional_prepare",
    "entangle_measure",
    "postselect",
    "Perspective",
    "ProtocolSpec",
    "Trace",
    "certain_claims",
    "contradiction_report",
    "parse_protocol",
    "render_protocol",
    "render_trace",
    "run",
    "trace_to_json",
    "ONE",
    "ZERO",
    "RadicalScalar",
    "invert_monomial",
    "sqrt_int",
    "sqrt_rational",
    "to_float",
    "load_scenario",
    "Basis",
    "BasisAtom",
    "BasisVector",
    "Event",
    "LabelAtom",
    "RegisterSpec",
    "StateVector",
    "SystemSpec",
    "build_initial",
    "conditional_probability",
    "decompose",
    "inner_product",
    "norm_squared",
    "probability",
    "__version__",
]
