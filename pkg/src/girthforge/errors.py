"""Exception hierarchy shared by every girthforge module."""


class GirthforgeError(Exception):
    """Base class for all library errors."""


class InvalidVertexError(GirthforgeError, ValueError):
    pass


class ParseError(GirthforgeError, ValueError):
    pass


class ParityError(GirthforgeError, ValueError):
    pass


class UnsupportedDegreeError(GirthforgeError, ValueError):
    pass


class SamplingFailureError(GirthforgeError, RuntimeError):
    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts


class EnumerationBudgetError(GirthforgeError, RuntimeError):
    pass


class SolverError(GirthforgeError, RuntimeError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class SizeExceededError(GirthforgeError, ValueError):
    pass


class PreconditionError(GirthforgeError, ValueError):
    """A documented precondition of an algorithm does not hold.

    ``clause`` names the violated condition so callers (and the CLI) can
    report which part failed.
    """

    def __init__(self, message, clause=""):
        super().__init__(message)
        self.clause = clause


class CapacityError(GirthforgeError, RuntimeError):
    pass


class PipelineError(GirthforgeError, RuntimeError):
    def __init__(self, message, stage="", measured=None):
        super().__init__(message)
        self.stage = stage
        self.measured = dict(measured or {})
