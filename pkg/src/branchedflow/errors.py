"""Exception types shared across the package."""


class BranchedFlowError(Exception):
    """Base class for all package-specific errors."""


class GridResolutionError(BranchedFlowError):
    """Grid too coarse to resolve the correlation structure or the dynamics."""


class DomainError(BranchedFlowError):
    """A coordinate or time lies outside the sampled domain."""


class ConfigError(BranchedFlowError):
    """Invalid configuration key or value."""


class NumericalInstabilityError(BranchedFlowError):
    """A propagation invariant (norm conservation) was violated."""
