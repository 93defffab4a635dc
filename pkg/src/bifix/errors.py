"""Exception types shared across the package."""


class BifixError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(BifixError, ValueError):
    """Transformations or states do not agree on the size of the state set."""


class DomainError(BifixError, ValueError):
    """A query was made outside the set where it is defined."""


class PreconditionError(BifixError, ValueError):
    """An input violates the documented precondition of an operation."""


class ResourceGuardError(BifixError, RuntimeError):
    """The requested computation exceeds the configured size guard."""
