"""Exception types shared across the package."""


class QlanRouteError(Exception):
    """Base class for all package errors."""


class ValidationError(QlanRouteError, ValueError):
    """Input violates a documented precondition or invariant."""


class UnknownVertexError(ValidationError):
    """A vertex is not part of the graph it was used with."""


class CapacityError(QlanRouteError, RuntimeError):
    """The dense-vector oracle cannot handle this many qubits."""


class InternalAssertionError(QlanRouteError, AssertionError):
    """A property the pipeline guarantees failed at runtime.

    This always indicates a bug in the package, never bad user input, and
    is therefore surfaced loudly instead of being converted into a result.
    """
