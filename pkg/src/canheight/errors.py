"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class CanHeightError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CanHeightError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(CanHeightError):
    """A step, size or precision budget ran out before the result was certified.

    ``best`` carries the tightest enclosure (or other partial result)
    obtained before giving up, or ``None``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class UnfactoredCofactorError(ResourceError):
    """Factorization stopped at a cofactor it could neither split nor certify."""

    def __init__(self, cofactor, found=()):
        super().__init__(f"could not factor cofactor {cofactor}", best=tuple(found))
        self.cofactor = cofactor
        self.found = tuple(found)


class InconclusiveError(ResourceError):
    """An enclosure straddles a threshold; a smaller epsilon is needed."""


class BoundViolationError(CanHeightError):
    """A certified height contradicts a proven lower bound.

    Never expected to occur; ``verify_point`` returns a BoundViolation
    verdict instead, and callers that want it fatal raise this.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
