"""Exception hierarchy shared by all modules.

ValidationError covers bad arguments and malformed configs (CLI exit
code 2).  ResourceError covers enumeration or search budgets that a
request would exceed (CLI exit code 3); its message always states the
estimate that tripped the guard.
"""


class RmtLabError(Exception):
    """Base class for all package errors."""


class ValidationError(RmtLabError):
    """Invalid argument, config key, or precondition violation."""


class DimensionError(ValidationError):
    """Array shapes incompatible with the requested operation."""


class DegenerateInputError(RmtLabError):
    """Input is rank deficient or otherwise has no well defined answer."""


class ResourceError(RmtLabError):
    """The request exceeds an enumeration or search budget."""


class CalibrationError(RmtLabError):
    """A constant audit failed, meaning a tabulated constant is miscalibrated."""
