"""Exception hierarchy shared by all modules."""


class CGEURError(Exception):
    """Base class for library errors."""


class DomainError(CGEURError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class NumericalError(CGEURError, ArithmeticError):
    """A computed quantity violates an invariant beyond rounding tolerance."""


class ConvergenceError(NumericalError):
    """An iterative method did not converge."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class BracketError(CGEURError, ValueError):
    """A root-finding bracket does not contain a sign change."""


class ResourceError(CGEURError, RuntimeError):
    """A request would need more bins, samples or grid points than allowed."""
