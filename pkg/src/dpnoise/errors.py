"""Exception types. The CLI maps ``DomainError`` to exit code 2 and
``NumericError`` to exit code 3."""


class DomainError(ValueError):
    """A parameter is outside the range where the quantity is defined."""


class CalibrationError(DomainError):
    """The requested noise family cannot meet the requested privacy budget."""


class UnsupportedError(DomainError):
    """The operation is deliberately not provided for this input."""


class DegenerateTruncationError(DomainError):
    """Truncation interval carries no probability mass."""


class NumericError(ArithmeticError):
    """A numerical routine failed to produce a finite answer."""
