"""Exception types raised by the simulator."""


class ConfigurationError(ValueError):
    """Invalid model or scenario parameters.

    ``field`` names the offending parameter when one can be singled out.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class DegenerateLandscapeError(ValueError):
    """Raised when a landscape cannot be used for normalization."""
