"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: bad user input exits 1,
failed or aborted computations exit 2.
"""


class CycleCertError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CycleCertError, ValueError):
    """Caller passed inconsistent or malformed data."""


class DomainError(CycleCertError, ValueError):
    """Operation applied outside its mathematical domain (e.g. zero polynomial)."""


class ComputationError(CycleCertError, RuntimeError):
    """A computation could not be completed (resource limits, degeneracies).

    May carry partial results in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InternalError(CycleCertError, AssertionError):
    """An internal invariant failed; indicates a bug, not user error."""
