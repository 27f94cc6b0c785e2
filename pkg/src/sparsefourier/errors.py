"""Package-specific error types."""


class UnsupportedSizeError(ValueError):
    """A combinatorial routine was asked for a size beyond its practical cap."""


class IllConditionedError(ArithmeticError):
    """A linear solve was refused because the system is numerically singular."""


class MissingDcError(ValueError):
    """1D total-variation recovery requires the DC frequency to be observed."""


class VacuousRegimeError(ValueError):
    """Theory constants were requested in a regime where the claim is empty."""
