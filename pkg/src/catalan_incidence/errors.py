"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: usage/validation/domain errors exit 2,
resource errors exit 3.
"""


class CatalanError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(CatalanError, ValueError):
    """Arguments that do not fit together (ring mismatch, degree mismatch, ...)."""


class ValidationError(UsageError):
    """Raw input that does not describe a valid object."""


class DomainError(CatalanError, ValueError):
    """A mathematical precondition failed (e.g. X <= Y does not hold)."""


class ResourceError(CatalanError):
    """A requested size exceeds the configured enumeration bound."""
