"""Loading, validating and segmenting interaction recordings.

A recording file is UTF-8 NDJSON: a header line naming the recording and the
original files with their line counts, then one event per line. Long pauses
split a recording into work sessions; shorter pauses are kept inside the
session and reported as idle spans (presumed reading or thinking time).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Iterable

from .events import (
    Event,
    MalformedRecord,
    RecordingError,
    parse_event,
    serialize_event,
)

SCHEMA_NAME = "tracelens-recording"
SCHEMA_VERSION = 1

# A pause longer than this splits the recording into separate sessions.
LONG_IDLE_THRESHOLD_MS = 300_000
# Pauses above this floor (but below the session threshold) are reported as
# short idles; anything shorter counts as continuous activity.
SHORT_IDLE_FLOOR_MS = 15_000

SHORT_IDLE = "ShortIdle"
LONG_IDLE = "LongIdle"


class HeaderMissing(RecordingError):
    """The first line is not a valid recording header."""


class VersionUnsupported(RecordingError):
    """The header declares a schema version this reader does not handle."""


class UnknownFileReference(RecordingError):
    """An event references a file absent from the header manifest."""


@dataclass(frozen=True)
class FileEntry:
    """One original file: path and its line count before any edits."""

    path: str
    initial_line_count: int


@dataclass
class Recording:
    """A validated recording: identity, file manifest and event stream."""

    recording_id: str
    files: list[FileEntry]
    events: list[Event] = field(default_factory=list)

    @property
    def duration_ms(self) -> int:
        if not self.events:
            return 0
        return self.events[-1].timestamp_ms - self.events[0].timestamp_ms

    def manifest_paths(self) -> list[str]:
        return [entry.path for entry in self.files]

    def line_counts(self) -> dict[str, int]:
        return {entry.path: entry.initial_line_count for entry in self.files}


@dataclass
class Session:
    """A contiguous run of events with no long idle inside."""

    index: int
    events: list[Event]

    @property
    def start_ms(self) -> int:
        return self.events[0].timestamp_ms

    @property
    def end_ms(self) -> int:
        return self.events[-1].timestamp_ms

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class IdleSpan:
    """A reported pause between two consecutive events."""

    kind: str
    start_event_id: int
    end_event_id: int
    start_ms: int
    end_ms: int

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


def _referenced_files(event: Event) -> Iterable[str]:
    # Payload "file" fields and opened files always name code files. Tree and
    # resource paths may point at directories and are left unchecked.
    file = event.payload.get("file")
    if isinstance(file, str):
        yield file
    if event.type == "FileEvent":
        path = event.payload.get("path")
        if isinstance(path, str):
            yield path
    if event.context.file is not None:
        yield event.context.file
    yield from event.context.visible_tabs


def _parse_header(line: str, line_number: int) -> tuple[str, list[FileEntry]]:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError:
        raise HeaderMissing("first line is not valid JSON", line_number) from None
    if not isinstance(raw, dict) or raw.get("schema") != SCHEMA_NAME:
        raise HeaderMissing(
            f"first line must be a {SCHEMA_NAME!r} header", line_number
        )
    version = raw.get("version")
    if version != SCHEMA_VERSION:
        raise VersionUnsupported(
            f"unsupported schema version {version!r}", line_number
        )
    recording_id = raw.get("recording_id")
    if not isinstance(recording_id, str) or not recording_id:
        raise HeaderMissing("header misses a recording_id", line_number)
    files_raw = raw.get("files")
    if not isinstance(files_raw, list):
        raise HeaderMissing("header misses the files manifest", line_number)
    files = []
    for entry in files_raw:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("path"), str)
            or type(entry.get("initial_line_count")) is not int
            or entry["initial_line_count"] < 0
        ):
            raise HeaderMissing(
                "manifest entries need a path and a non-negative "
                "initial_line_count",
                line_number,
            )
        files.append(FileEntry(entry["path"], entry["initial_line_count"]))
    return recording_id, files


def load_recording(source: str | Path | IO[str] | IO[bytes]) -> Recording:
    """Load and validate a recording from NDJSON.

    Args:
        source: Path to a recording file, or an open text/byte stream.

    Returns:
        The validated recording with events in stream order.

    Raises:
        HeaderMissing / VersionUnsupported: Bad or unsupported header.
        MalformedRecord: Bad JSON, missing envelope fields, or ids and
            timestamps out of order; message carries the line number.
        UnknownFileReference: An event references a file not in the manifest.
        SchemaViolation / ContextViolation / UnknownEventType: Per-event
            validation failures, with line numbers.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return load_recording(handle)
    if isinstance(source, io.TextIOBase):
        lines: Iterable[str] = source
    else:
        lines = io.TextIOWrapper(source, encoding="utf-8")

    recording_id: str | None = None
    files: list[FileEntry] = []
    known: set[str] = set()
    events: list[Event] = []
    last_id: int | None = None
    last_ts: int | None = None

    for line_number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if recording_id is None:
            recording_id, files = _parse_header(line, line_number)
            known = {entry.path for entry in files}
            continue
        event = parse_event(line, line_number)
        if last_id is not None and event.id <= last_id:
            raise MalformedRecord(
                f"event id {event.id} does not increase over {last_id}",
                line_number,
            )
        if last_ts is not None and event.timestamp_ms < last_ts:
            raise MalformedRecord(
                f"timestamp {event.timestamp_ms} decreases below {last_ts}",
                line_number,
            )
        for path in _referenced_files(event):
            if path not in known:
                raise UnknownFileReference(
                    f"event references {path!r}, absent from the manifest",
                    line_number,
                )
        last_id = event.id
        last_ts = event.timestamp_ms
        events.append(event)

    if recording_id is None:
        raise HeaderMissing("recording is empty", 1)
    return Recording(recording_id=recording_id, files=files, events=events)


def save_recording(recording: Recording, target: str | Path | IO[str]) -> None:
    """Write a recording as canonical NDJSON.

    The header keeps its documented key order; events use sorted-key
    canonical JSON, so saving the same recording always produces the same
    bytes.
    """
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="\n") as handle:
            save_recording(recording, handle)
            return
    header = {
        "schema": SCHEMA_NAME,
        "version": SCHEMA_VERSION,
        "recording_id": recording.recording_id,
        "files": [
            {"path": entry.path, "initial_line_count": entry.initial_line_count}
            for entry in recording.files
        ],
    }
    target.write(json.dumps(header, separators=(",", ":"), ensure_ascii=False))
    target.write("\n")
    for event in recording.events:
        target.write(serialize_event(event))
        target.write("\n")


def split_sessions(
    recording: Recording, long_idle_threshold_ms: int = LONG_IDLE_THRESHOLD_MS
) -> list[Session]:
    """Split a recording into sessions at long idles.

    A gap strictly exceeding the threshold separates two sessions; within a
    session no gap exceeds it.

    Args:
        recording: The recording to segment.
        long_idle_threshold_ms: Gap duration above which a new session starts.

    Returns:
        Sessions in chronological order; empty for an event-free recording.
    """
    sessions: list[Session] = []
    current: list[Event] = []
    for event in recording.events:
        if current and event.timestamp_ms - current[-1].timestamp_ms > long_idle_threshold_ms:
            sessions.append(Session(index=len(sessions), events=current))
            current = []
        current.append(event)
    if current:
        sessions.append(Session(index=len(sessions), events=current))
    return sessions


def classify_idles(
    events: Iterable[Event],
    short_idle_floor_ms: int = SHORT_IDLE_FLOOR_MS,
    long_idle_threshold_ms: int = LONG_IDLE_THRESHOLD_MS,
) -> list[IdleSpan]:
    """Report every pause above the short-idle floor.

    Args:
        events: Events in stream order (a session's or a whole recording's).
        short_idle_floor_ms: Pauses at or below this duration are ignored.
        long_idle_threshold_ms: Pauses above this are classified LongIdle;
            inside a properly split session only ShortIdle can occur.

    Returns:
        Idle spans in chronological order.
    """
    spans: list[IdleSpan] = []
    previous: Event | None = None
    for event in events:
        if previous is not None:
            gap = event.timestamp_ms - previous.timestamp_ms
            if gap > short_idle_floor_ms:
                kind = LONG_IDLE if gap > long_idle_threshold_ms else SHORT_IDLE
                spans.append(
                    IdleSpan(
                        kind=kind,
                        start_event_id=previous.id,
                        end_event_id=event.id,
                        start_ms=previous.timestamp_ms,
                        end_ms=event.timestamp_ms,
                    )
                )
        previous = event
    return spans
