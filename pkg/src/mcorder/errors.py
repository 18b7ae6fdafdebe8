"""Exception types shared across the package."""


class McorderError(Exception):
    """Base class for all package errors."""


class UnknownSymbol(McorderError):
    """A symbol label is not part of the declared alphabet."""

    def __init__(self, label, position):
        self.label = label
        self.position = position
        super().__init__(f"unknown symbol {label!r} at position {position}")


class SequenceTooShort(McorderError):
    """The sequence has too few symbols for the requested operation."""


class OrderTooLarge(McorderError):
    """Word codes for the requested order would overflow the code width."""


class EmptyTable(McorderError):
    """A count table with zero total mass was passed to an estimator."""


class InvalidParameter(McorderError):
    """A distribution parameter is outside its valid domain."""


class InvalidConfig(McorderError):
    """A configuration value is inconsistent or out of range."""


class MalformedFasta(McorderError):
    """FASTA input violates the expected header/record structure."""
