"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid ensemble or experiment configuration."""


class NumericsError(RuntimeError):
    """A numerical routine left its domain of validity."""


class DegeneracyError(NumericsError):
    """Input spectrum too close to degenerate for stable evaluation."""


class AccuracyError(NumericsError):
    """Quadrature error estimate exceeded the requested tolerance."""
