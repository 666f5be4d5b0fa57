"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateFieldError(DomainError):
    """The requested field is not of the expected degree (e.g. a square input
    collapses a biquadratic extension to a quadratic one)."""


class UnsupportedPrimeError(DomainError):
    """Splitting data at this prime is not certified and no override was given."""

    def __init__(self, prime: int, message: str | None = None):
        self.prime = prime
        super().__init__(message or f"splitting data at p={prime} is not certified; "
                         f"supply an override table for this prime")


class ConfigError(ValueError):
    """Mutually inconsistent configuration options."""


class InternalConsistencyError(AssertionError):
    """An invariant that should be unreachable was violated (library bug)."""
