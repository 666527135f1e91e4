"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, malformed inputs, or violated preconditions."""


class ConvergenceError(RuntimeError):
    """Iteration failed to converge within its budget.

    Carries the partial state so a caller can inspect how far the solve got.
    """

    def __init__(self, message, field=None, report=None, eps_trace=None):
        super().__init__(message)
        self.field = field
        self.report = report
        self.eps_trace = eps_trace
