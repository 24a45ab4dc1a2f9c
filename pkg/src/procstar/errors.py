"""Exception types shared across the package."""


class UnsupportedFamilyError(ValueError):
    """A group or quotient descriptor names a family we do not build."""


class CapExceededError(ValueError):
    """A requested object exceeds a configured size cap."""


class PrecisionFailureError(RuntimeError):
    """A numerical identification step landed in its ambiguity band."""


class DecompositionFailedError(RuntimeError):
    """Irreducible splitting failed certification after all retries."""


class QuotientNotFoundError(LookupError):
    """No finite quotient within the configured caps separates the input."""
