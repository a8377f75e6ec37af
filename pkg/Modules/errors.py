"""Exception types shared by the repair modules."""


class RepairError(Exception):
    """Base class for everything raised on purpose by this package."""


class ParameterError(RepairError, ValueError):
    """A parameter or precondition is out of range; the message names the constraint."""


class SupportError(RepairError, ValueError):
    """A set element uses generators outside the declared index space."""


class ConstructionError(RepairError):
    """An internal invariant failed (singular Gram matrix, bad divisibility, ...)."""
