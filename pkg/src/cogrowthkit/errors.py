"""Exception types shared across the package.

The CLI maps these onto exit codes: usage-type errors exit with 2,
resource errors with 3.
"""


class CogrowthError(Exception):
    pass


class UsageError(CogrowthError, ValueError):
    """Bad parameters, bad element handles, unparsable spec files."""


class DomainError(UsageError):
    """An operation was applied to an engine it does not support."""


class ConfluenceError(UsageError):
    """A rewriting system has a critical pair that does not resolve."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ResourceError(CogrowthError):
    """A configured size cap would be exceeded."""
