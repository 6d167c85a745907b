"""Data model for protocols, perspectives, traces and reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import SemanticError
from ..scalar import RadicalScalar
from ..state import Basis, Event, StateVector, SystemSpec, build_initial

__all__ = [
    "Measure",
    "Prepare",
    "Postselect",
    "Step",
    "Perspective",
    "Query",
    "CheckSpec",
    "ProtocolSpec",
    "TraceEntry",
    "QueryResult",
    "Trace",
    "PredictionClaim",
    "Contradiction",
    "PerspectiveOutcome",
    "ConsistencyReport",
]

Superposition = tuple[tuple[str, RadicalScalar], ...]


@dataclass(frozen=True)
class Measure:
    """Measure ``basis`` and record the outcome in ``recorder``.

    ``collapse`` is the default mode: ``None`` entangles, a vector name
    collapses onto that outcome.  Perspectives may override it.
    """

    basis: str
    recorder: str
    outcomes: tuple[tuple[str, str], ...]
    collapse: Optional[str] = None

    @property
    def outcome_map(self) -> dict[str, str]:
        return dict(self.outcomes)


@dataclass(frozen=True)
class Prepare:
    target: str
    control: str
    rules: tuple[tuple[str, Superposition], ...]

    @property
    def rule_map(self) -> dict[str, Superposition]:
        return dict(self.rules)


@dataclass(frozen=True)
class Postselect:
    event: Event


Action = Union[Measure, Prepare, Postselect]


@dataclass(frozen=True)
class Step:
    id: str
    action: Action


@dataclass(frozen=True)
class Perspective:
    """Whose wave function: per-step measurement-mode overrides.

    ``overrides`` pairs a step id with the outcome that step collapses onto,
    or ``None`` to force an entangling (no-collapse) measurement.
    """

    name: str
    overrides: tuple[tuple[str, Optional[str]], ...] = ()

    @property
    def override_map(self) -> dict[str, Optional[str]]:
        return dict(self.overrides)

    def with_override(self, step_id: str, outcome: Optional[str], name: str | None = None):
        ov = dict(self.overrides)
        ov[step_id] = outcome
        return Perspective(name or self.name, tuple(ov.items()))


@dataclass(frozen=True)
class Query:
    at: str
    event: Event
    given: Optional[Event] = None

    def label(self) -> str:
        if self.given is None:
            return f"P({self.event})"
        return f"P({self.event} | {self.given})"


@dataclass(frozen=True)
class CheckSpec:
    events: tuple[Event, ...]
    postselect: Optional[Event] = None


@dataclass(frozen=True)
class ProtocolSpec:
    system: SystemSpec
    initial: tuple[tuple[str, Superposition], ...]
    bases: tuple[Basis, ...]
    steps: tuple[Step, ...]
    perspectives: tuple[Perspective, ...] = ()
    queries: tuple[Query, ...] = ()
    check: Optional[CheckSpec] = None

    def basis(self, name: str) -> Basis:
        """Declared basis, or the computational basis of a register of that name."""
        for b in self.bases:
            if b.name == name:
                return b
        if name in self.system:
            return Basis.computational(self.system.register(name))
        raise SemanticError(f"unknown basis {name!r}")

    def step(self, step_id: str) -> Step:
        for s in self.steps:
            if s.id == step_id:
                return s
        raise SemanticError(f"unknown step {step_id!r}")

    @property
    def step_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.steps)

    def perspective(self, name: str) -> Perspective:
        for p in self.perspectives:
            if p.name == name:
                return p
        raise SemanticError(f"unknown perspective {name!r}")

    def default_perspective(self) -> Perspective:
        return self.perspectives[0] if self.perspectives else Perspective("default")

    def initial_state(self) -> StateVector:
        return build_initial(self.system, {reg: list(sup) for reg, sup in self.initial})


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceEntry:
    step_id: str
    state: StateVector
    probability: Optional[RadicalScalar] = None
    mode: str = "entangle"


@dataclass(frozen=True)
class QueryResult:
    query: Query
    value: RadicalScalar


@dataclass
class Trace:
    perspective: str
    initial: StateVector
    entries: list[TraceEntry] = field(default_factory=list)
    queries: list[QueryResult] = field(default_factory=list)

    def state_at(self, step_id: str) -> StateVector:
        for e in self.entries:
            if e.step_id == step_id:
                return e.state
        raise KeyError(step_id)

    def entry(self, step_id: str) -> TraceEntry:
        for e in self.entries:
            if e.step_id == step_id:
                return e
        raise KeyError(step_id)

    @property
    def final(self) -> StateVector:
        return self.entries[-1].state if self.entries else self.initial


@dataclass(frozen=True)
class PredictionClaim:
    perspective: str
    event: Event
    probability: RadicalScalar
    certain: bool


@dataclass(frozen=True)
class Contradiction:
    event: Event
    first: str
    first_probability: RadicalScalar
    second: str
    second_probability: RadicalScalar


@dataclass(frozen=True)
class PerspectiveOutcome:
    name: str
    applicable: bool
    selection_probability: Optional[RadicalScalar]
    probabilities: tuple[tuple[Event, RadicalScalar], ...]


@dataclass(frozen=True)
class ConsistencyReport:
    postselect: Optional[Event]
    outcomes: tuple[PerspectiveOutcome, ...]
    contradictions: tuple[Contradiction, ...]

    @property
    def consistent(self) -> bool:
        return not self.contradictions
