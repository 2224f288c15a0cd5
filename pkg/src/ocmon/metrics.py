"""Behavioral metrics over object-centric event logs.

Ordering-relation metrics (:func:`causal`, :func:`concur`, :func:`choice`)
grade the strength of an ordering between two activities with respect to one
object type; involvement metrics (:func:`absent`, :func:`singular`,
:func:`multiple`) grade how an activity's events involve objects of a type;
:func:`skip_strength` grades how often objects of a type miss an activity
entirely. All of these land in [0, 1].

Performance measures (:func:`performance`) map an activity to a real number:
a per-type average object count, the event count, or the average sojourn
time in seconds. Sojourn time is measured from an event's enabling time --
the latest timestamp among the immediate per-object predecessor events --
which approximates readiness purely from the log.

Every function accepts either an :class:`~ocmon.model.EventLog` or a shared
:class:`~ocmon.stats.LogCharacteristics` (reusing its cache).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .errors import (
    UndefinedMeasureError,
    UnknownActivityError,
    UnknownMeasureError,
    UnknownTypeError,
)
from .model import EventLog
from .stats import LogCharacteristics

MEASURE_NAMES = ("avg_object_count", "avg_sojourn_time", "event_count")


@dataclass(frozen=True)
class MeasureKey:
    """A registry-validated performance measure name.

    ``avg_object_count`` requires an object type parameter; the other
    measures take none.
    """

    name: str
    otype: str | None = None

    def __post_init__(self):
        if self.name not in MEASURE_NAMES:
            raise UnknownMeasureError(
                f"unknown measure {self.name!r}; known: {', '.join(MEASURE_NAMES)}"
            )
        if self.name == "avg_object_count" and not self.otype:
            raise UnknownMeasureError("avg_object_count requires an object type")
        if self.name != "avg_object_count" and self.otype is not None:
            raise UnknownMeasureError(f"{self.name} takes no object type")

    def __str__(self) -> str:
        return f"{self.name}({self.otype})" if self.otype else self.name


def _log_of(src) -> EventLog:
    return src.log if isinstance(src, LogCharacteristics) else src


# -- ordering relation metrics ------------------------------------------


def causal(src, otype: str, first: str, then: str) -> float:
    """Strength in [0, 1] of ``first`` preceding ``then`` for ``otype``.

    The share of objects containing both activities whose trace has
    ``first`` eventually followed by ``then``; 0 when no object contains
    both.
    """
    stats = LogCharacteristics.of(src)
    both = stats.count_containing(otype, {first, then})
    if both == 0:
        return 0.0
    return stats.count_followed_by(otype, first, then) / both


def concur(src, otype: str, a: str, b: str) -> float:
    """Strength in [0, 1] of ``a`` and ``b`` running in either order.

    1 when the two eventually-follows directions are equally frequent, 0
    when only one direction occurs (or neither).
    """
    stats = LogCharacteristics.of(src)
    forward = stats.count_followed_by(otype, a, b)
    backward = stats.count_followed_by(otype, b, a)
    total = forward + backward
    if total == 0:
        return 0.0
    return 1.0 - (max(forward, backward) - min(forward, backward)) / total


def choice(src, otype: str, a: str, b: str) -> float:
    """Strength in [0, 1] of ``a`` and ``b`` excluding one another.

    1 when no object of the type contains both activities, 0 when every
    object containing either contains both.
    """
    stats = LogCharacteristics.of(src)
    only_a = stats.count_containing(otype, {a})
    only_b = stats.count_containing(otype, {b})
    if only_a + only_b == 0:
        return 0.0
    both = stats.count_containing(otype, {a, b})
    return 1.0 - 2 * both / (only_a + only_b)


def skip_strength(src, otype: str, activity: str) -> float:
    """Share in [0, 1] of ``otype`` objects whose trace misses ``activity``."""
    stats = LogCharacteristics.of(src)
    population = len(stats.log.objects_of_type(otype))
    if population == 0:
        raise UnknownTypeError(f"object type {otype!r} not present in the log")
    return 1.0 - stats.count_containing(otype, {activity}) / population


# -- object involvement metrics -------------------------------------------


def _involvement(src, otype: str, activity: str, kind: str) -> float:
    stats = LogCharacteristics.of(src)
    executions = len(stats.log.events_of_activity(activity))
    if executions == 0:
        raise UnknownActivityError(f"activity {activity!r} not present in the log")
    return stats.count_cardinality(otype, activity, kind) / executions


def absent(src, otype: str, activity: str) -> float:
    """Share of ``activity`` events involving no object of ``otype``."""
    return _involvement(src, otype, activity, "zero")


def singular(src, otype: str, activity: str) -> float:
    """Share of ``activity`` events involving exactly one object of ``otype``."""
    return _involvement(src, otype, activity, "one")


def multiple(src, otype: str, activity: str) -> float:
    """Share of ``activity`` events involving two or more objects of ``otype``."""
    return _involvement(src, otype, activity, "many")


# -- performance measures --------------------------------------------------


def enabling_time(src, event_id: str) -> datetime | None:
    """Latest timestamp among the event's per-object immediate predecessors.

    For each object involved in the event, its predecessor is the event
    right before it in that object's sequence. Returns ``None`` when no
    involved object has a predecessor (the event opens every lifecycle it
    touches).
    """
    log = _log_of(src)
    event = log.event(event_id)
    latest: datetime | None = None
    for obj in log.objects_of_event(event_id):
        sequence = log.sequence(obj.id)
        position = sequence.index(event)
        if position == 0:
            continue
        predecessor = sequence[position - 1]
        if latest is None or predecessor.time > latest:
            latest = predecessor.time
    return latest


def performance(src, activity: str, key: MeasureKey) -> float:
    """Value of a registered performance measure for ``activity``.

    ``avg_object_count``: mean number of objects of the key's type per
    event of the activity. ``event_count``: number of events.
    ``avg_sojourn_time``: mean of (event time - enabling time) in seconds
    over the events that have an enabling time; undefined (raises) when no
    event of the activity has one.
    """
    log = _log_of(src)
    if not isinstance(key, MeasureKey):
        raise UnknownMeasureError(f"not a measure key: {key!r}")
    events = log.events_of_activity(activity)
    if not events:
        raise UnknownActivityError(f"activity {activity!r} not present in the log")

    if key.name == "event_count":
        return float(len(events))

    if key.name == "avg_object_count":
        total = sum(
            sum(1 for obj in log.objects_of_event(e.id) if obj.otype == key.otype)
            for e in events
        )
        return total / len(events)

    sojourns = []
    for event in events:
        enabled = enabling_time(log, event.id)
        if enabled is not None:
            sojourns.append((event.time - enabled).total_seconds())
    if not sojourns:
        raise UndefinedMeasureError(
            f"avg_sojourn_time undefined: no event of {activity!r} has an enabler"
        )
    return sum(sojourns) / len(sojourns)
