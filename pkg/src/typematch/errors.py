"""Exception hierarchy shared across the package.

Callers that need to distinguish misuse from runtime failure can catch
UsageError separately; everything else raised here is a runtime condition
(bad input data, missing records, provider trouble).
"""

from __future__ import annotations


class TypematchError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TypematchError):
    """A precondition was violated by the caller (bad argument, bad state)."""


class CsvParseError(TypematchError):
    """Input is not valid RFC 4180 CSV. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyTableError(TypematchError):
    """The CSV input contained no records at all."""


class ProjectNotFoundError(TypematchError):
    """No stored project exists under the requested id."""


class SessionNotFoundError(TypematchError):
    """No stored match session exists under the requested id."""


class EmptyProfileError(TypematchError):
    """A column type profile with no observations was used where one is required."""


class ProviderError(TypematchError):
    """Base class for reconciliation provider failures."""


class ProviderTransportError(ProviderError):
    """The provider could not be reached or answered with a non-2xx status.

    Transport failures are retryable by the caller.
    """


class ProviderProtocolError(ProviderError):
    """The provider answered, but its payload does not follow the contract."""
