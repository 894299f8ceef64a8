"""Exception types shared across the package."""


class ResourceCapError(RuntimeError):
    """A requested computation exceeds the built-in desk-scale caps."""


class DimensionOverflowError(ResourceCapError):
    """A matrix or transform dimension exceeds the supported range."""


class ConfigurationError(ValueError):
    """Inconsistent or invalid decoder/simulation configuration."""
