"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when user-supplied data violates a precondition."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration cap."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree.

    This always points at a numerical breakdown or an indexing bug, never at
    bad user input.
    """
