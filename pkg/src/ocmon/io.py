"""Import and export of object-centric event logs.

Two sources are supported: the standard OCEL JSON layout (``ocel:events`` /
``ocel:objects`` maps) and tabular CSV files where each object type occupies
one column holding a separator-joined list of object ids. OCEL XML is not
supported; convert such files to OCEL JSON first.
"""

from __future__ import annotations

import csv
import io as _io
import json
import warnings
from dataclasses import dataclass
from datetime import datetime
from typing import Mapping

from .errors import (
    ColumnMissingError,
    OcelWarning,
    ParseError,
    SchemaError,
    TimestampError,
    TypeConflictError,
)
from .model import AttrValue, Event, EventLog, Object

# Table-style timestamps look like "25-10-2022:09.35".
DEFAULT_CSV_TIMESTAMP_FORMAT = "%d-%m-%Y:%H.%M"

_SCALAR_TYPES = (str, int, float, bool)


@dataclass(frozen=True)
class CsvSpec:
    """Column layout of a CSV event table.

    ``object_columns`` maps a column name to the object type its cells hold;
    each cell contains zero or more object ids joined by ``list_separator``.
    """

    event_id: str
    activity: str
    timestamp: str
    object_columns: Mapping[str, str]
    timestamp_format: str = DEFAULT_CSV_TIMESTAMP_FORMAT
    list_separator: str = ";"


def parse_iso_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp, accepting a trailing ``Z`` for UTC."""
    if not isinstance(text, str):
        raise TimestampError(f"timestamp must be a string, got {text!r}")
    normalized = text[:-1] + "+00:00" if text.endswith("Z") else text
    try:
        return datetime.fromisoformat(normalized)
    except ValueError:
        raise TimestampError(f"not an ISO-8601 timestamp: {text!r}") from None


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not UTF-8: {exc}") from None


def _require(record: Mapping, key: str, where: str):
    if key not in record:
        raise SchemaError(f"{where}: missing required key {key!r}")
    return record[key]


def _check_attrs(vmap, where: str) -> dict[str, AttrValue]:
    if not isinstance(vmap, dict):
        raise SchemaError(f"{where}: attribute map must be a JSON object")
    for name, value in vmap.items():
        if not isinstance(value, _SCALAR_TYPES):
            raise SchemaError(
                f"{where}: attribute {name!r} has unsupported value {value!r}"
            )
    return dict(vmap)


def import_json(data: bytes | str) -> EventLog:
    """Build a log from OCEL JSON bytes or text.

    The ``ocel:global-log``, ``ocel:global-event`` and ``ocel:global-object``
    sections are accepted and ignored. Every omap entry must name a declared
    object. Duplicate omap mentions are deduplicated with a warning.
    """
    try:
        doc = json.loads(_decode(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")

    raw_events = _require(doc, "ocel:events", "document")
    raw_objects = _require(doc, "ocel:objects", "document")
    if not isinstance(raw_events, dict) or not isinstance(raw_objects, dict):
        raise SchemaError("'ocel:events' and 'ocel:objects' must be JSON objects")

    objects = []
    for oid, record in raw_objects.items():
        if not isinstance(record, dict):
            raise SchemaError(f"object {oid!r}: record must be a JSON object")
        otype = _require(record, "ocel:type", f"object {oid!r}")
        attrs = _check_attrs(record.get("ocel:ovmap", {}), f"object {oid!r}")
        objects.append(Object(id=oid, otype=otype, attrs=attrs))

    events = []
    relation = set()
    for eid, record in raw_events.items():
        if not isinstance(record, dict):
            raise SchemaError(f"event {eid!r}: record must be a JSON object")
        activity = _require(record, "ocel:activity", f"event {eid!r}")
        timestamp = parse_iso_timestamp(
            _require(record, "ocel:timestamp", f"event {eid!r}")
        )
        omap = _require(record, "ocel:omap", f"event {eid!r}")
        if not isinstance(omap, list):
            raise SchemaError(f"event {eid!r}: 'ocel:omap' must be a list")
        attrs = _check_attrs(record.get("ocel:vmap", {}), f"event {eid!r}")
        events.append(Event(id=eid, activity=activity, time=timestamp, attrs=attrs))
        if len(set(omap)) < len(omap):
            warnings.warn(
                f"event {eid!r}: duplicate object mentions in omap were merged",
                OcelWarning,
                stacklevel=2,
            )
        for oid in omap:
            relation.add((eid, oid))

    return EventLog(events, objects, relation)


def import_csv(data: bytes | str, spec: CsvSpec) -> EventLog:
    """Build a log from a CSV event table described by ``spec``.

    Objects are created on first mention with the type of the column they
    appear in; the same id under two different type columns is an error.
    """
    reader = csv.DictReader(_io.StringIO(_decode(data)))
    try:
        header = reader.fieldnames or []
        rows = list(reader)
    except csv.Error as exc:
        raise ParseError(f"malformed CSV: {exc}") from None

    needed = [spec.event_id, spec.activity, spec.timestamp, *spec.object_columns]
    for column in needed:
        if column not in header:
            raise ColumnMissingError(f"column {column!r} not found in CSV header")

    events = []
    object_types: dict[str, str] = {}
    relation = set()
    for row in rows:
        eid = row[spec.event_id]
        activity = row[spec.activity]
        raw_ts = row[spec.timestamp]
        try:
            timestamp = datetime.strptime(raw_ts, spec.timestamp_format)
        except ValueError:
            raise TimestampError(
                f"event {eid!r}: timestamp {raw_ts!r} does not match "
                f"format {spec.timestamp_format!r}"
            ) from None
        events.append(Event(id=eid, activity=activity, time=timestamp))
        for column, otype in spec.object_columns.items():
            cell = row[column] or ""
            for oid in (part.strip() for part in cell.split(spec.list_separator)):
                if not oid:
                    continue
                known = object_types.get(oid)
                if known is not None and known != otype:
                    raise TypeConflictError(
                        f"object {oid!r} appears both as {known!r} and {otype!r}"
                    )
                object_types[oid] = otype
                relation.add((eid, oid))

    objects = [Object(id=oid, otype=otype) for oid, otype in object_types.items()]
    return EventLog(events, objects, relation)


def export_json(log: EventLog) -> bytes:
    """Serialize a log to OCEL JSON (UTF-8); inverse of :func:`import_json`.

    Timestamp-valued attributes are written as ISO-8601 strings and read
    back as strings, so typed round-trips hold for JSON scalar attributes.
    """
    attribute_names = sorted(
        {name for e in log.events for name in e.attrs}
        | {name for o in log.objects for name in o.attrs}
    )
    object_ids_of = {e.id: sorted(o.id for o in log.objects_of_event(e.id)) for e in log.events}
    doc = {
        "ocel:global-log": {
            "ocel:version": "1.0",
            "ocel:ordering": "timestamp",
            "ocel:attribute-names": attribute_names,
            "ocel:object-types": sorted(log.object_types()),
        },
        "ocel:global-event": {"ocel:activity": "__INVALID__"},
        "ocel:global-object": {"ocel:type": "__INVALID__"},
        "ocel:events": {
            e.id: {
                "ocel:activity": e.activity,
                "ocel:timestamp": e.time.isoformat(),
                "ocel:omap": object_ids_of[e.id],
                "ocel:vmap": _jsonable_attrs(e.attrs),
            }
            for e in log.events
        },
        "ocel:objects": {
            o.id: {
                "ocel:type": o.otype,
                "ocel:ovmap": _jsonable_attrs(o.attrs),
            }
            for o in log.objects
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False).encode("utf-8")


def _jsonable_attrs(attrs: Mapping[str, AttrValue]) -> dict:
    return {
        name: value.isoformat() if isinstance(value, datetime) else value
        for name, value in attrs.items()
    }
