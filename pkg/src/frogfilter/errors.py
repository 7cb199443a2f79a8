"""Exception types shared across the package."""


class FrogFilterError(Exception):
    """Base class for all frogfilter errors."""


class NonFiniteResponse(FrogFilterError):
    """The frequency response is not finite at some grid point."""


class EmptyBand(FrogFilterError):
    """A declared frequency band contains no grid points."""


class LengthMismatch(FrogFilterError):
    """Inputs that must share a grid length do not."""


class ConfigError(FrogFilterError):
    """Engine or experiment parameters are inconsistent."""


class InvalidCutoff(FrogFilterError):
    """Cutoff frequency outside the open interval (0, 1)."""


class NoCutoffFound(FrogFilterError):
    """The response never drops 1 dB below its passband reference."""


class ParseError(FrogFilterError):
    """A JSON document could not be parsed."""


class UnknownKey(FrogFilterError):
    """A configuration document contains an unrecognized key."""


class MissingFile(FrogFilterError):
    """A referenced file does not exist."""


class SchemaMismatch(FrogFilterError):
    """A summary document does not match the expected schema."""
