"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised for inputs outside a function's contract (bad dimensions,
    non-prime modulus, undeclared variables, malformed data)."""


class OverflowGuardError(ValueError):
    """Raised when materializing a power sum would exceed the exponent guard.

    Callers that see this must keep working with the symbolic form."""


class ParseError(InputError):
    """Syntax error in the textual instance format."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class InternalError(RuntimeError):
    """An internal invariant failed; the result cannot be trusted."""
