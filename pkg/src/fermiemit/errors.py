"""Exception types raised across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SingularInputError(ValidationError):
    """Evaluation requested at a point where the expression is singular (e.g. q = 0)."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its tolerance.

    The best available estimate and its error are attached so callers can
    decide whether to use them anyway.
    """

    def __init__(self, message, estimate=None, error=None, diagnostics=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.diagnostics = diagnostics or {}


class ConfigError(ValueError):
    """Malformed or incomplete configuration file."""

    def __init__(self, message, lines=()):
        super().__init__(message)
        self.lines = tuple(lines)


class UnitError(ConfigError):
    """A configuration value carries a unit suffix that is not accepted for its key."""
