"""Exception hierarchy shared by every basiclab module."""


class BasicLabError(Exception):
    """Base class for all library errors."""


class InvalidInput(BasicLabError, ValueError):
    """Malformed or out-of-range input."""


class DegenerateInput(BasicLabError, ValueError):
    """Input is well formed but geometrically degenerate (e.g. duplicate points)."""


class UnsupportedOddSize(InvalidInput):
    """The A/B/C partition argument only covers arrays of even size.

    An odd-size variant of the combinatorial lemma exists but is not implemented.
    """


class PreconditionFailed(BasicLabError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class BudgetExceeded(BasicLabError):
    """A search ran out of its node budget before it could decide."""

    def __init__(self, message, nodes=0):
        super().__init__(message)
        self.nodes = nodes


class SolverError(BasicLabError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ScheduleInvariantViolated(BasicLabError):
    pass


class NonDecomposableAt(BasicLabError):
    """Raised when a partial sum has no decomposition over the ground set.

    This is a direct witness of non-basicness, not a malfunction.
    """

    def __init__(self, stage):
        super().__init__(f"NON_DECOMPOSABLE_AT {stage}")
        self.stage = stage
