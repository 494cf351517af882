"""Exception hierarchy shared by every qframe module."""

from __future__ import annotations

from typing import Any


class QFrameError(Exception):
    """Base class. ``witness`` carries machine-readable detail for reports."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class StructuralError(QFrameError):
    """Malformed object: dangling identifier, shape mismatch, bad endpoint."""


class ConstraintError(QFrameError):
    """A physical constraint is violated. ``constraint`` names it."""

    def __init__(self, constraint: str, message: str, witness: Any = None):
        super().__init__(f"{constraint}: {message}", witness)
        self.constraint = constraint


class NonCodeployableError(QFrameError):
    """Operators or diagrams that cannot be deployed jointly."""


class ResourceCapError(QFrameError):
    """Problem size exceeds a configured cap."""


class NoAdversarialFamilyError(QFrameError):
    """No catalog family produces a verified adversarial pair."""


class SchemaError(QFrameError):
    """Input document violates its schema or a domain invariant.

    ``violations`` is a list of ``(json_pointer, message)`` pairs.
    """

    def __init__(self, violations: list[tuple[str, str]]):
        text = "; ".join(f"{ptr or '/'}: {msg}" for ptr, msg in violations)
        super().__init__(text, witness=[{"pointer": p, "message": m} for p, m in violations])
        self.violations = violations
