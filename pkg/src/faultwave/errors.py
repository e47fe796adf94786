"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the mathematical or physical domain of an operation."""


class DataFormatError(DomainError):
    """A data file violates the documented log format."""
