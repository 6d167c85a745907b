"""Exception hierarchy shared by every layer of the simulator."""


class FriendSimError(Exception):
    """Base class for all simulator errors."""


# -- exact arithmetic --------------------------------------------------------

class NotMonomial(FriendSimError, ArithmeticError):
    """Raised when an operation needs a single-term scalar and got something else."""


class NonMonomialDivision(NotMonomial):
    pass


class NonMonomialNorm(NotMonomial):
    """The square root of a branch probability is not an exact monomial."""


# -- states ------------------------------------------------------------------

class StateError(FriendSimError):
    pass


class SystemMismatch(StateError):
    pass


class NonUnitInit(StateError):
    pass


class SpanError(StateError):
    """State support on the measured subsystems leaves the span of the basis."""


class ZeroCondition(StateError):
    pass


class ZeroProbabilityOutcome(StateError):
    pass


# -- measurement -------------------------------------------------------------

class MeasurementError(FriendSimError):
    pass


class RecorderNotReady(MeasurementError):
    pass


class OutcomeMapIncomplete(MeasurementError):
    pass


class TargetNotReady(MeasurementError):
    pass


class RuleMissing(MeasurementError):
    pass


class NonUnitRule(MeasurementError):
    pass


# -- protocol ----------------------------------------------------------------

class ProtocolError(FriendSimError):
    pass


class ProtocolSyntaxError(ProtocolError):
    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


class SemanticError(ProtocolError):
    pass


class StepError(ProtocolError):
    """A step failed while running a protocol; ``cause`` holds the original error."""

    def __init__(self, step_id, cause):
        self.step_id = step_id
        self.cause = cause
        super().__init__(f"step {step_id}: {type(cause).__name__}: {cause}")
