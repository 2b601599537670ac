"""Exception types shared across the package."""


class CapabilityError(Exception):
    """Requested size is beyond the exact / desk-scale limit of an operation."""


class AmplitudeOverflowError(OverflowError):
    """An amplitude evaluation overflowed.

    Carries ``max_abs_arg``, the largest |argument| fed to an exponential,
    so the caller can judge how far out of range the parameters are.
    """

    def __init__(self, message: str, max_abs_arg: float):
        super().__init__(message)
        self.max_abs_arg = max_abs_arg


class GateAbsorptionError(ValueError):
    """A single-spin operator cannot be absorbed at the requested site."""


class CoverError(ValueError):
    """A vertex set fails to cover every edge of its graph."""


class TableauError(ValueError):
    """A check matrix violates independence or commutativity."""
