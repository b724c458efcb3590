"""Exception hierarchy shared by all layers."""


class HGCError(Exception):
    pass


class ConfigurationError(HGCError):
    """Invalid backend configuration or mixing of incompatible backends."""


class BackendMismatchError(ConfigurationError):
    pass


class SpecializationPoleError(HGCError):
    """A denominator vanishes under a finite-field specialization; retry with other values."""


class DegenerateSpecializationError(HGCError):
    """Finite-field values hit an accidental coincidence; retry with another seed."""


class InvariantViolation(HGCError):
    """An internal consistency check failed.  Always a bug or a false assumption."""


class PrecisionExhausted(HGCError):
    pass


class UnsupportedFiberError(HGCError):
    """A fiber contains points whose coordinates are not representable in the tower."""

    def __init__(self, message, minimal_polynomial=None):
        super().__init__(message)
        self.minimal_polynomial = minimal_polynomial


class UndecidedRootError(HGCError):
    """Root extraction could not decide whether a root exists in the tower."""


class NonProperIntersectionError(HGCError):
    pass


class UnsupportedError(HGCError):
    pass
