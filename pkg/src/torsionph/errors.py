class TorsionPHError(ValueError):
    """Base class for domain errors (bad input, unsupported request)."""


class FactorizationLimit(TorsionPHError):
    """An invariant factor has a prime factor beyond the trial-division bound."""


class OracleBound(TorsionPHError):
    """The brute-force oracle was asked about a group that is too large."""


class ComplexError(TorsionPHError):
    """Malformed simplicial complex or filtration input."""


class DimensionMismatch(TorsionPHError):
    pass


class MultiDimUnsupported(TorsionPHError):
    """Persistence diagrams only exist for 1-parameter filtrations."""
