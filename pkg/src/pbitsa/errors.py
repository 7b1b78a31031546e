"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Argument has the wrong shape, range or index."""


class ParseError(ValueError):
    """Malformed benchmark or instance text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ValueError):
    """Inconsistent engine, tuner or CLI configuration."""


class DegenerateModelError(ValueError):
    """Model has no couplings, so no temperature scale can be derived."""
