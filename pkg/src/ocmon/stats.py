"""Cached counting queries over one event log.

Three families of counts characterize a log per object type:

* how many objects of a type contain a given activity set in their trace,
* how many contain one activity eventually followed by another,
* how many events of an activity involve zero / one / more than one
  object of the type.

Results are memoized per exact query; a :class:`LogCharacteristics` behaves
like a pure function of its (immutable) log.
"""

from __future__ import annotations

from typing import Iterable

from .model import EventLog

CARDINALITY_KINDS = ("zero", "one", "many")


class LogCharacteristics:
    """Counting layer shared by all metrics computed on the same log."""

    def __init__(self, log: EventLog):
        self.log = log
        self._containing: dict[tuple[str, frozenset[str]], int] = {}
        self._followed_by: dict[tuple[str, str, str], int] = {}
        self._cardinality: dict[tuple[str, str], tuple[int, int, int]] = {}

    @classmethod
    def of(cls, src: EventLog | LogCharacteristics) -> LogCharacteristics:
        """Coerce an event log to a characteristics view (idempotent)."""
        return src if isinstance(src, LogCharacteristics) else cls(src)

    def count_containing(self, otype: str, activities: Iterable[str]) -> int:
        """Objects of ``otype`` whose trace contains every given activity.

        An empty activity set counts all objects of the type; an unknown
        type yields 0.
        """
        wanted = frozenset(activities)
        key = (otype, wanted)
        cached = self._containing.get(key)
        if cached is None:
            cached = sum(
                1
                for obj in self.log.objects_of_type(otype)
                if wanted <= set(self.log.trace(obj.id))
            )
            self._containing[key] = cached
        return cached

    def count_followed_by(self, otype: str, first: str, then: str) -> int:
        """Objects of ``otype`` with ``first`` eventually followed by ``then``.

        Eventually-follows means strictly increasing trace positions, so an
        activity followed by itself requires two occurrences.
        """
        key = (otype, first, then)
        cached = self._followed_by.get(key)
        if cached is None:
            cached = sum(
                1
                for obj in self.log.objects_of_type(otype)
                if _eventually_follows(self.log.trace(obj.id), first, then)
            )
            self._followed_by[key] = cached
        return cached

    def count_cardinality(self, otype: str, activity: str, kind: str) -> int:
        """Events of ``activity`` involving 0 / 1 / >1 objects of ``otype``.

        ``kind`` is one of ``"zero"``, ``"one"``, ``"many"``.
        """
        if kind not in CARDINALITY_KINDS:
            raise ValueError(f"kind must be one of {CARDINALITY_KINDS}, got {kind!r}")
        zero, one, many = self._cardinalities(otype, activity)
        return {"zero": zero, "one": one, "many": many}[kind]

    def _cardinalities(self, otype: str, activity: str) -> tuple[int, int, int]:
        key = (otype, activity)
        cached = self._cardinality.get(key)
        if cached is None:
            zero = one = many = 0
            for event in self.log.events_of_activity(activity):
                involved = sum(
                    1
                    for obj in self.log.objects_of_event(event.id)
                    if obj.otype == otype
                )
                if involved == 0:
                    zero += 1
                elif involved == 1:
                    one += 1
                else:
                    many += 1
            cached = (zero, one, many)
            self._cardinality[key] = cached
        return cached


def _eventually_follows(trace: tuple[str, ...], first: str, then: str) -> bool:
    try:
        start = trace.index(first)
    except ValueError:
        return False
    return then in trace[start + 1 :]
