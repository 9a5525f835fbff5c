"""Exception types shared across the library."""


class FrosetteError(Exception):
    """Base class for all library errors."""


class ConfigError(FrosetteError):
    """Invalid constellation configuration."""


class ParseError(FrosetteError):
    """Malformed textual input; carries the offending position when known."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class RangeError(FrosetteError):
    """A digit or field value is outside its legal range."""


class DomainError(FrosetteError):
    """Numerically or geometrically invalid request."""


class InfeasibleError(DomainError):
    """The requested configuration cannot satisfy the constraint."""


class LayoutError(FrosetteError):
    """Bit-field layout does not fit the 128-bit address."""
