"""Shared exception and warning types."""

from __future__ import annotations

__all__ = [
    "FormatError",
    "InvalidNetworkError",
    "ScheduleError",
    "EventOrderWarning",
]


class FormatError(ValueError):
    """A document (JSON network, CSV schedule/events/labels) is malformed.

    The message names the offending field or line so callers can point users
    at the exact position.
    """


class InvalidNetworkError(ValueError):
    """A network failed structural validation (see ``validate_network``)."""


class ScheduleError(ValueError):
    """A spike schedule is incompatible with the requested simulation run."""


class EventOrderWarning(UserWarning):
    """Event timestamps arrived out of order and were re-sorted."""
