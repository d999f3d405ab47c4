"""Exception types raised across the package."""


class ModnetError(ValueError):
    """Base class for invalid mathematical input."""


class NotHermitianError(ModnetError):
    pass


class NotPositiveError(ModnetError):
    pass


class NotInvolutionError(ModnetError):
    pass


class NotUnitaryError(ModnetError):
    pass


class NotStandardError(ModnetError):
    """A real subspace failed the cyclic/separating test."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class GroupElementError(ModnetError):
    """A 2x2 matrix is not in SL(2,C) (or SU(2) where required)."""


class ExcludedOrbitError(ModnetError):
    """Momentum on one of the null-measure massless orbits p = (p0, 0, 0, +-p0)."""


class ClosureError(ModnetError):
    """Orbit closure exceeded the configured sample budget."""
