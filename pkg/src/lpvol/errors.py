"""Exception types shared across the package."""


class LpvolError(Exception):
    """Base class for all package-specific failures."""


class DomainError(LpvolError, ValueError):
    """Input outside the mathematical domain of an operation."""


class QuadratureFailure(LpvolError, ArithmeticError):
    """Adaptive quadrature could not meet the requested tolerance."""


class ConvergenceFailure(LpvolError, ArithmeticError):
    """An iterative solver exhausted its budget before converging."""


class DegenerateInput(DomainError):
    """Geometrically degenerate input (e.g. boundary point on a coordinate
    hyperplane) for an operation that requires general position."""


class OverflowGuard(LpvolError, AssertionError):
    """Internal invariant breach: a non-finite value escaped log-space
    bookkeeping.  Indicates a bug, not a user error."""
