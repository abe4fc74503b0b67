class InvalidParameterError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


class MatrixFormatError(ValueError):
    """Raised by the matrix loader; ``lineno`` is the 1-based offending line."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class InfeasibleError(RuntimeError):
    """No support of the permitted size reproduces the measurements."""
