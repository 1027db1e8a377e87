"""Exception types raised by shiftcodes."""


class ShiftError(Exception):
    """Base class for all library errors."""


class EmptyShiftError(ShiftError):
    """No bi-infinite point survives trimming."""


class AlphabetMismatchError(ShiftError):
    pass


class DomainMismatchError(ShiftError):
    pass


class NotInDomainError(ShiftError, ValueError):
    """A point was passed to a code whose domain does not contain it."""


class NotApplicableError(ShiftError):
    """A decider was asked about an input outside its proven range."""


class PreconditionError(ShiftError, ValueError):
    pass


class DocumentError(ShiftError, ValueError):
    """Malformed or inconsistent JSON document."""


class CapacityError(ShiftError):
    """Input exceeds the configured size caps."""
