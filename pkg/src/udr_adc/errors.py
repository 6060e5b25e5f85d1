"""Exception hierarchy shared by every module.

Each class also derives from the closest builtin so callers that only know
``ValueError`` still catch them.
"""


class UdrError(Exception):
    """Base class for all errors raised by :mod:`udr_adc`."""


class ConfigError(UdrError, ValueError):
    """An invalid signal specification or converter configuration."""


class DomainError(UdrError, ValueError):
    """A numeric argument outside the domain of the function."""


class UnsupportedError(UdrError, TypeError):
    """The operation is not defined for this kind of input."""


class ParseError(UdrError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(UdrError, ValueError):
    """Unrecognised container: bad magic, version or encoding."""


class LengthError(UdrError, ValueError):
    """Payload length disagrees with the header."""


class CorruptionError(UdrError, ValueError):
    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)


class SaturationError(UdrError, OverflowError):
    """The fold counter left ``[0, 2**counter_bits)``."""

    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"sample {index}: {message}"
        super().__init__(message)


class NonConvergenceError(UdrError, RuntimeError):
    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"sample {index}: {message}"
        super().__init__(message)
