"""Exception hierarchy shared across the package."""


class SynergyError(Exception):
    """Base class for every error this package raises deliberately."""


class ValidationError(SynergyError):
    """A value, configuration, or argument violates a stated contract."""


class SchemaError(ValidationError):
    """Data does not match the declared dimension schema."""


class DegenerateDataError(SynergyError):
    """Input carries no usable mass or spans a single-state space.

    Every downstream measure divides by total mass or by a maximum
    entropy, so zero-mass tables and single-category spaces are rejected
    here instead of producing NaNs later.
    """
