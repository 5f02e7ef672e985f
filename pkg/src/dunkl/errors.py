"""Exception hierarchy shared by all modules."""


class DunklError(Exception):
    """Base class; ``code`` identifies the originating module in CLI error JSON."""

    code = "dunkl"


class ConfigurationError(DunklError, ValueError):
    code = "config"


class ResourceError(DunklError, RuntimeError):
    code = "resource"


class PreconditionError(DunklError, ValueError):
    code = "precondition"


class RegularityError(DunklError, ArithmeticError):
    """A linear system that must be uniquely solvable for k >= 0 was not."""

    code = "regularity"


class TruncationError(DunklError, ValueError):
    code = "truncation"

    def __init__(self, message, suggested_truncation=None):
        super().__init__(message)
        self.suggested_truncation = suggested_truncation


class QuadratureError(DunklError, RuntimeError):
    code = "quadrature"
