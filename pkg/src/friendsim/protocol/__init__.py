"""Protocol language, interpreter, perspectives and consistency reports."""

from .engine import certain_claims, contradiction_report, resolve_perspective, run
from .model import (
    CheckSpec,
    ConsistencyReport,
    Contradiction,
    Measure,
    Perspective,
    PerspectiveOutcome,
    PredictionClaim,
    Prepare,
    Postselect,
    ProtocolSpec,
    Query,
    QueryResult,
    Step,
    Trace,
    TraceEntry,
)
from .parser import parse_event, parse_protocol, parse_scalar
from .render import (
    diff_traces,
    dumps_json,
    render_diff,
    render_protocol,
    render_report,
    render_trace,
    report_to_json,
    trace_schema,
    trace_to_json,
)

__all__ = [
    "certain_claims",
    "contradiction_report",
    "resolve_perspective",
    "run",
    "CheckSpec",
    "ConsistencyReport",
    "Contradiction",
    "Measure",
    "Perspective",
    "PerspectiveOutcome",
    "PredictionClaim",
    "Prepare",
    "Postselect",
    "ProtocolSpec",
    "Query",
    "QueryResult",
    "Step",
    "Trace",
    "TraceEntry",
    "parse_event",
    "parse_protocol",
    "parse_scalar",
    "diff_traces",
    "dumps_json",
    "render_diff",
    "render_protocol",
    "render_report",
    "render_trace",
    "report_to_json",
    "trace_schema",
    "trace_to_json",
]
