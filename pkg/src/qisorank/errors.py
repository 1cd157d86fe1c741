"""Exception hierarchy shared by every module in the package."""


class QIsoRankError(Exception):
    """Base class for all package errors."""


class ValidationError(QIsoRankError, ValueError):
    """Input violates a documented precondition."""


class ParseError(ValidationError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DegenerateConditionError(ValidationError):
    """Conditioning on an outcome that has zero probability."""


class SizeError(QIsoRankError):
    """A matrix or state vector would exceed the configured size cap."""


class ConvergenceError(QIsoRankError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)
