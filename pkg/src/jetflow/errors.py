"""Exception types shared across the package."""


class JetflowError(Exception):
    """Base class for all package-specific errors."""


class KernelRegularityError(JetflowError, ValueError):
    """Raised when a kernel lacks the smoothness an operation requires."""


class GramConditioningError(JetflowError, ValueError):
    """Raised when a Gram system is singular or too ill-conditioned to solve."""


class CollisionError(JetflowError, RuntimeError):
    """Raised when particles come closer than the collision threshold."""


class NonConvergenceError(JetflowError, RuntimeError):
    """Raised when an implicit solve fails to converge."""


class ConfigError(JetflowError, ValueError):
    """Raised for invalid scenario configuration."""
