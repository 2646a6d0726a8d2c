"""Exception types shared across the package."""


class SizeGuardError(ValueError):
    """Raised when a requested tensor-power dimension exceeds the guard."""


class VerificationError(AssertionError):
    """Raised when a numerically checked inequality or identity fails."""
