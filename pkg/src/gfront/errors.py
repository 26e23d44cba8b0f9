"""Exception types shared across the package."""


class GFrontError(Exception):
    """Base class for package errors."""


class ConfigError(GFrontError):
    """Invalid grid, model, or run configuration."""


class IntegrationError(GFrontError):
    """Time integration produced NaN/Inf or blew up.

    Carries the last finite state so the driver can dump partial artifacts.
    """

    def __init__(self, message, field=None, time=None):
        super().__init__(message)
        self.field = field
        self.time = time


class SolveError(GFrontError):
    """A linear solve failed to meet its residual tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EstimationError(GFrontError):
    """Diagnostics series too short or otherwise unusable for estimation."""
