"""Exception types raised across ppclab."""


class PpcError(Exception):
    """Base class for all ppclab errors."""


class RangeError(PpcError, ValueError):
    """An index, exponent or size argument is out of its allowed range."""


class UsageError(PpcError, ValueError):
    """Arguments are individually valid but cannot be combined."""


class ConfigError(PpcError, ValueError):
    """A construction schedule fails validation.

    ``violations`` holds the offending entries as returned by
    :func:`ppclab.construction.validate_config`.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class FormatError(PpcError, ValueError):
    """A sequence or config file does not follow the expected format."""
