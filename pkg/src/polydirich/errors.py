"""Exception types raised by polydirich."""


class PolydirichError(ValueError):
    """Base class for all library errors."""


class DomainError(PolydirichError):
    """A point lies outside the open unit bidisc (or disc)."""


class ConfigurationError(PolydirichError):
    """Missing or invalid parameters, malformed input files, bad resolution."""


class PreconditionError(PolydirichError):
    """An operation was called outside its admissible parameter range."""
