"""In-memory model of object-centric event logs.

An :class:`EventLog` relates events to the objects they touch. One event may
involve any number of objects of any number of types, so there is no single
case notion; per-object views (:meth:`EventLog.sequence`,
:meth:`EventLog.trace`) recover classic traces.

Logs are immutable after construction and validate themselves: dangling
relation pairs, duplicate ids, and missing mandatory fields are rejected.
All timestamps are normalized to timezone-aware UTC; naive inputs are
interpreted as UTC.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterable, Mapping, Union

from .errors import (
    DanglingReferenceError,
    DuplicateIdError,
    InvalidWindowError,
    MissingFieldError,
    OcelWarning,
    UnknownIdError,
)

AttrValue = Union[str, int, float, bool, datetime]


def ensure_utc(ts: datetime) -> datetime:
    """Return ``ts`` as an aware UTC datetime (naive values are taken as UTC)."""
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class Event:
    """One event: an activity executed at a point in time.

    ``attrs`` carries free-form event attributes; looking up an absent
    attribute via :meth:`attr` yields ``None``. Attributes do not take part
    in equality or hashing -- events are identified by id within a log.
    """

    id: str
    activity: str
    time: datetime
    attrs: Mapping[str, AttrValue] = field(default_factory=dict, compare=False)

    def attr(self, name: str) -> AttrValue | None:
        return self.attrs.get(name)


@dataclass(frozen=True)
class Object:
    """One process object with its (immutable) object type."""

    id: str
    otype: str
    attrs: Mapping[str, AttrValue] = field(default_factory=dict, compare=False)

    def attr(self, name: str) -> AttrValue | None:
        return self.attrs.get(name)


class EventLog:
    """A validated, immutable object-centric event log.

    Construction checks every invariant:

    * event ids and object ids are unique within their collections,
    * every relation pair references an existing event and object,
    * events carry an activity and a timestamp, objects carry a type.

    Events that relate to no object at all are legal but reported once via
    an :class:`OcelWarning`.
    """

    def __init__(
        self,
        events: Iterable[Event],
        objects: Iterable[Object],
        relation: Iterable[tuple[str, str]],
    ):
        events = [self._check_event(e) for e in events]
        objects = [self._check_object(o) for o in objects]

        events.sort(key=lambda e: (e.time, e.id))
        self._events: dict[str, Event] = {}
        for event in events:
            if event.id in self._events:
                raise DuplicateIdError(f"duplicate event id {event.id!r}")
            self._events[event.id] = event

        self._objects: dict[str, Object] = {}
        for obj in sorted(objects, key=lambda o: o.id):
            if obj.id in self._objects:
                raise DuplicateIdError(f"duplicate object id {obj.id!r}")
            self._objects[obj.id] = obj

        pairs = set()
        for eid, oid in relation:
            if eid not in self._events:
                raise DanglingReferenceError(
                    f"relation references unknown event id {eid!r}"
                )
            if oid not in self._objects:
                raise DanglingReferenceError(
                    f"relation references unknown object id {oid!r}"
                )
            pairs.add((eid, oid))
        self._relation: frozenset[tuple[str, str]] = frozenset(pairs)

        self._index()

        orphans = [e.id for e in self.events if not self._event_objects[e.id]]
        if orphans:
            warnings.warn(
                f"{len(orphans)} event(s) relate to no object: "
                + ", ".join(sorted(orphans)),
                OcelWarning,
                stacklevel=2,
            )

    @staticmethod
    def _check_event(event: Event) -> Event:
        if not event.id or not isinstance(event.id, str):
            raise MissingFieldError("event id must be a non-empty string")
        if not event.activity or not isinstance(event.activity, str):
            raise MissingFieldError(f"event {event.id!r} has no activity")
        if not isinstance(event.time, datetime):
            raise MissingFieldError(f"event {event.id!r} has no timestamp")
        normalized = ensure_utc(event.time)
        if normalized is not event.time:
            event = replace(event, time=normalized)
        return event

    @staticmethod
    def _check_object(obj: Object) -> Object:
        if not obj.id or not isinstance(obj.id, str):
            raise MissingFieldError("object id must be a non-empty string")
        if not obj.otype or not isinstance(obj.otype, str):
            raise MissingFieldError(f"object {obj.id!r} has no type")
        return obj

    def _index(self) -> None:
        event_objects: dict[str, set[str]] = {eid: set() for eid in self._events}
        object_events: dict[str, list[Event]] = {oid: [] for oid in self._objects}
        for eid, oid in self._relation:
            event_objects[eid].add(oid)
            object_events[oid].append(self._events[eid])

        self._event_objects: dict[str, frozenset[Object]] = {
            eid: frozenset(self._objects[oid] for oid in oids)
            for eid, oids in event_objects.items()
        }
        self._object_events: dict[str, tuple[Event, ...]] = {
            oid: tuple(sorted(evs, key=lambda e: (e.time, e.id)))
            for oid, evs in object_events.items()
        }
        self._traces: dict[str, tuple[str, ...]] = {
            oid: tuple(e.activity for e in seq)
            for oid, seq in self._object_events.items()
        }

        by_activity: dict[str, set[Event]] = {}
        for event in self._events.values():
            by_activity.setdefault(event.activity, set()).add(event)
        self._activity_events = {a: frozenset(s) for a, s in by_activity.items()}

        by_type: dict[str, set[Object]] = {}
        for obj in self._objects.values():
            by_type.setdefault(obj.otype, set()).add(obj)
        self._type_objects = {t: frozenset(s) for t, s in by_type.items()}

    # -- basic views ---------------------------------------------------------

    @property
    def events(self) -> tuple[Event, ...]:
        """All events, ordered by (time, id)."""
        return tuple(self._events.values())

    @property
    def objects(self) -> tuple[Object, ...]:
        """All objects, ordered by id."""
        return tuple(self._objects.values())

    @property
    def relation(self) -> frozenset[tuple[str, str]]:
        """The event-object relation as (event id, object id) pairs."""
        return self._relation

    def event(self, event_id: str) -> Event:
        try:
            return self._events[event_id]
        except KeyError:
            raise UnknownIdError(f"unknown event id {event_id!r}") from None

    def object(self, object_id: str) -> Object:
        try:
            return self._objects[object_id]
        except KeyError:
            raise UnknownIdError(f"unknown object id {object_id!r}") from None

    # -- query accessors -------------------------------------------------

    def activities(self) -> frozenset[str]:
        """The set of activity names occurring in the log."""
        return frozenset(self._activity_events)

    def object_types(self) -> frozenset[str]:
        """The set of object types occurring in the log."""
        return frozenset(self._type_objects)

    def events_of_activity(self, activity: str) -> frozenset[Event]:
        """All events executing ``activity`` (empty set when unknown)."""
        return self._activity_events.get(activity, frozenset())

    def objects_of_type(self, otype: str) -> frozenset[Object]:
        """All objects of type ``otype`` (empty set when unknown)."""
        return self._type_objects.get(otype, frozenset())

    def events_of_object(self, object_id: str) -> frozenset[Event]:
        """All events the given object participates in."""
        if object_id not in self._objects:
            raise UnknownIdError(f"unknown object id {object_id!r}")
        return frozenset(self._object_events[object_id])

    def objects_of_event(self, event_id: str) -> frozenset[Object]:
        """All objects involved in the given event."""
        if event_id not in self._events:
            raise UnknownIdError(f"unknown event id {event_id!r}")
        return self._event_objects[event_id]

    def sequence(self, object_id: str) -> tuple[Event, ...]:
        """The object's events ordered by time, ties broken by event id."""
        if object_id not in self._objects:
            raise UnknownIdError(f"unknown object id {object_id!r}")
        return self._object_events[object_id]

    def trace(self, object_id: str) -> tuple[str, ...]:
        """The activity names along :meth:`sequence`."""
        if object_id not in self._objects:
            raise UnknownIdError(f"unknown object id {object_id!r}")
        return self._traces[object_id]

    # -- derived logs ------------------------------------------------------

    def filter_time_window(
        self,
        start: datetime | None = None,
        end: datetime | None = None,
    ) -> EventLog:
        """Restrict the log to events with ``start <= time <= end``.

        Objects no longer referenced by any kept event are dropped, and the
        relation is restricted accordingly. A fully unbounded window returns
        the log itself.
        """
        if start is None and end is None:
            return self
        if start is not None:
            start = ensure_utc(start)
        if end is not None:
            end = ensure_utc(end)
        if start is not None and end is not None and start > end:
            raise InvalidWindowError(
                f"window start {start.isoformat()} is after end {end.isoformat()}"
            )

        kept = [
            e
            for e in self.events
            if (start is None or e.time >= start) and (end is None or e.time <= end)
        ]
        kept_ids = {e.id for e in kept}
        relation = {(eid, oid) for eid, oid in self._relation if eid in kept_ids}
        object_ids = {oid for _, oid in relation}
        objects = [o for o in self.objects if o.id in object_ids]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OcelWarning)
            return EventLog(kept, objects, relation)

    # -- equality ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return (
            {e.id: (e.activity, e.time, dict(e.attrs)) for e in self.events}
            == {e.id: (e.activity, e.time, dict(e.attrs)) for e in other.events}
            and {o.id: (o.otype, dict(o.attrs)) for o in self.objects}
            == {o.id: (o.otype, dict(o.attrs)) for o in other.objects}
            and self._relation == other._relation
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"EventLog(events={len(self._events)}, objects={len(self._objects)}, "
            f"relation={len(self._relation)})"
        )
