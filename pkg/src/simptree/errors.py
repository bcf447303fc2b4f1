"""Exception hierarchy shared by every module."""


class SimptreeError(Exception):
    """Base class for all errors raised by the package."""


class StructuralError(SimptreeError):
    """Malformed input: mismatched ambient sizes, nested facets, bad parents."""


class PreconditionError(SimptreeError):
    """An operation was called outside the domain where it is defined."""


class ResourceError(SimptreeError):
    """A configured size cap was exceeded."""


class InvariantViolation(SimptreeError):
    """A statement that should hold by theory failed on a concrete instance.

    Carries the offending data in ``witness`` so reports can show it.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
