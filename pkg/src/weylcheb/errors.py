"""Exception types shared across the package."""


class WeylchebError(Exception):
    """Base class for all package errors."""


class TypeSpecError(WeylchebError, ValueError):
    """Malformed or unsupported root-system type specification."""


class DimensionError(WeylchebError, ValueError):
    """Vector or matrix dimensions do not match the ambient rank."""


class CapExceededError(WeylchebError):
    """A configured size cap (group order, vertex count, state count) would be exceeded."""


class ContinuationError(WeylchebError):
    """Path continuation failed: the step size fell below the minimum."""


class NearSingularError(WeylchebError):
    """Jacobian condition estimate exceeded its cap; the path strayed too close
    to the critical locus or its image."""


class DeckMatchError(WeylchebError):
    """No deck transformation maps one fiber point to the other within tolerance."""
