"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an argument falls outside an operation's documented domain."""


class InternalInconsistencyError(RuntimeError):
    """Raised when a construction that is guaranteed to succeed fails validation.

    Seeing this exception always indicates a bug in this package, never bad
    user input.
    """
