"""Turning alert feeds into store updates.

Two line formats are understood: Suricata EVE JSON (the primary feed; only
``event_type == "alert"`` records matter, everything else is skipped) and a
plain CSV fixture format ``source,destination,epoch_micros,id``. Parsers
return alerts with ``seq == 0``; the stream loop assigns real ordinals.

Timestamps must carry a UTC offset; an offset-less timestamp is ambiguous
and rejected rather than guessed at.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Callable, Iterable, Literal

from .errors import ParseError
from .maintenance import InsertOutcome, insert_alert, reinsert_alert
from .model import Alert
from .store import AlertStore

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_OFFSET_NO_COLON = re.compile(r"([+-]\d{2})(\d{2})$")
_PROGRESS_EVERY = 1000


@dataclass(slots=True)
class IngestReport:
    """Outcome of one stream run."""

    parsed: int = 0
    skipped: int = 0
    inserted: int = 0
    reinserted: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    endpoints_created: int = 0
    paths_created: int = 0

    @property
    def error_count(self) -> int:
        return len(self.errors)

    def to_dict(self) -> dict:
        return {
            "parsed": self.parsed,
            "skipped": self.skipped,
            "inserted": self.inserted,
            "reinserted": self.reinserted,
            "errors": self.error_count,
            "endpoints_created": self.endpoints_created,
            "paths_created": self.paths_created,
        }


def parse_timestamp(text: str) -> int:
    """ISO 8601 timestamp with offset -> epoch microseconds (exact integer).

    Suricata writes offsets without a colon ("+0000"); both forms are
    accepted. Sub-second digits are optional and padded to microseconds.
    """
    normalized = text.strip()
    if normalized.endswith(("Z", "z")):
        normalized = normalized[:-1] + "+00:00"
    else:
        normalized = _OFFSET_NO_COLON.sub(r"\1:\2", normalized)
    try:
        moment = datetime.fromisoformat(normalized)
    except ValueError:
        raise ParseError(f"unparsable timestamp {text!r}")
    if moment.tzinfo is None:
        raise ParseError(f"timestamp {text!r} has no UTC offset")
    return (moment - _EPOCH) // timedelta(microseconds=1)


def parse_eve_line(line: str) -> Alert | None:
    """One EVE JSON line -> Alert, or None for non-alert event types."""
    try:
        event = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})")
    if not isinstance(event, dict):
        raise ParseError("expected a JSON object")
    try:
        event_type = event["event_type"]
    except KeyError:
        raise ParseError("missing field 'event_type'")
    if event_type != "alert":
        return None
    try:
        source = event["src_ip"]
        dest = event["dest_ip"]
        timestamp = event["timestamp"]
        sid = event["alert"]["signature_id"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}")
    if not isinstance(sid, int):
        raise ParseError(f"signature id must be an integer, got {sid!r}")
    return Alert(str(source), str(dest), parse_timestamp(str(timestamp)), sid)


def parse_csv_line(line: str) -> Alert | None:
    """One ``source,destination,epoch_micros,id`` row -> Alert; blank -> None."""
    if not line.strip():
        return None
    rows = list(csv.reader([line]))
    fields = rows[0] if rows else []
    if len(fields) != 4:
        raise ParseError(f"expected 4 fields, got {len(fields)}")
    source, dest, time_text, sid_text = (f.strip() for f in fields)
    if not source or not dest:
        raise ParseError("empty source or destination")
    try:
        time_us = int(time_text)
        sid = int(sid_text)
    except ValueError:
        raise ParseError(f"non-integer time or id in {line.strip()!r}")
    return Alert(source, dest, time_us, sid)


_PARSERS: dict[str, Callable[[str], Alert | None]] = {
    "eve": parse_eve_line,
    "csv": parse_csv_line,
}


def ingest_stream(
    store: AlertStore,
    lines: Iterable[str],
    *,
    fmt: Literal["eve", "csv"] = "eve",
    mode: Literal["chronological", "auto"] = "chronological",
    strict: bool = False,
    progress: Callable[[int], None] | None = None,
) -> IngestReport:
    """Parse a feed and fold it into the store.

    ``chronological`` sorts the batch by (time, then input order), assigns
    consecutive ordinals, and requires nothing in the store to be newer; a
    conflict is an error. ``auto`` keeps input order and routes any alert
    older than the store's latest time through reinsertion. Parse failures
    are recorded per line and skipped unless ``strict``.
    """
    report = IngestReport()
    alerts = _parse_all(lines, fmt, strict, report)
    if mode == "chronological":
        alerts.sort(key=lambda item: item[1].time_us)  # ties keep input order
    seq = store.next_seq
    done = 0
    for _line_no, alert in alerts:
        alert = replace(alert, seq=seq)
        seq += 1
        latest = store.latest_time_us
        if mode == "auto" and latest is not None and alert.time_us < latest:
            outcome = reinsert_alert(store, alert)
            report.reinserted += 1
        else:
            outcome = insert_alert(store, alert)
            report.inserted += 1
        _tally(report, outcome)
        done += 1
        if progress is not None and done % _PROGRESS_EVERY == 0:
            progress(done)
    return report


def reinsert_stream(
    store: AlertStore,
    lines: Iterable[str],
    *,
    fmt: Literal["eve", "csv"] = "eve",
    strict: bool = False,
    progress: Callable[[int], None] | None = None,
) -> IngestReport:
    """Route every record of a feed through reinsertion, in input order."""
    report = IngestReport()
    alerts = _parse_all(lines, fmt, strict, report)
    seq = store.next_seq
    done = 0
    for _line_no, alert in alerts:
        outcome = reinsert_alert(store, replace(alert, seq=seq))
        seq += 1
        report.reinserted += 1
        _tally(report, outcome)
        done += 1
        if progress is not None and done % _PROGRESS_EVERY == 0:
            progress(done)
    return report


def _parse_all(
    lines: Iterable[str],
    fmt: str,
    strict: bool,
    report: IngestReport,
) -> list[tuple[int, Alert]]:
    try:
        parser = _PARSERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {sorted(_PARSERS)}")
    alerts: list[tuple[int, Alert]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            alert = parser(line)
        except ParseError as exc:
            if strict:
                raise ParseError(str(exc), line_no) from None
            report.errors.append((line_no, str(exc)))
            continue
        if alert is None:
            report.skipped += 1
            continue
        report.parsed += 1
        alerts.append((line_no, alert))
    return alerts


def _tally(report: IngestReport, outcome: InsertOutcome) -> None:
    report.endpoints_created += outcome.endpoints_created
    report.paths_created += outcome.paths_created
