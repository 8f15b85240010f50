"""Exception types shared across the package."""


class CapExceededError(ValueError):
    """Raised when a size-capped routine is asked for a larger instance."""

    def __init__(self, what, n, cap):
        super().__init__(f"{what}: n={n} exceeds the cap of {cap}")
        self.n = n
        self.cap = cap


class NotChordalError(ValueError):
    """Raised when an operation that needs a chordal graph receives another one."""


class GraphFormatError(ValueError):
    """Malformed graph text, with 1-based line and column of the offending token."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InconsistentOracleError(RuntimeError):
    """A conditional-independence source gave different answers to the same query."""
