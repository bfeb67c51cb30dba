"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """An argument is inside the mathematical domain but outside the range
    for which the implementation guarantees its stated accuracy."""


class NumericalError(RuntimeError):
    """A quadrature or iteration failed to reach its target accuracy."""
