"""Exception types with stable machine-readable codes."""

from __future__ import annotations


class ContinuumError(Exception):
    """Base error carrying a stable code and an optional location hint."""

    def __init__(self, code: str, message: str, location: str | None = None):
        self.code = code
        self.message = message
        self.location = location
        where = f" ({location})" if location else ""
        super().__init__(f"{code}: {message}{where}")


class InputError(ContinuumError):
    """Rejected caller input: malformed files, unknown names, bad flag combinations."""


class IntegrityError(ContinuumError):
    """Shipped data or a self-check failed; not recoverable by fixing input."""
