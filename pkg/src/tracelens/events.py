"""Event model for IDE interaction recordings.

An interaction recording is a stream of typed events. Every event carries a
monotonically increasing id, a millisecond timestamp, a type-specific payload
and a snapshot of the editor context (focused file, visible line range, open
tabs). Events serialize to canonical single-line JSON so recordings can be
stored as NDJSON and compared byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

# Event categories. Every event type belongs to exactly one.
ACTIVITY = "Activity"
EXECUTION = "Execution"
EDIT = "Edit"
ENVIRONMENT = "Environment"
NAVIGATION = "Navigation"
SOLUTION = "Solution"

CATEGORIES = (ACTIVITY, EXECUTION, EDIT, ENVIRONMENT, NAVIGATION, SOLUTION)

# Category of each event type.
EVENT_CATEGORIES: dict[str, str] = {
    # Recording lifecycle, viewport motion and text selection.
    "RecordingEvent": ACTIVITY,
    "ScrollEvent": ACTIVITY,
    "TextSelectionEvent": ACTIVITY,
    # Running and debugging the program under work.
    "DebugEvent": EXECUTION,
    "LaunchEvent": EXECUTION,
    "WebBrowserEvent": EXECUTION,
    # Changes to the code itself.
    "CodeChangeEvent": EDIT,
    "CodeCompletionEvent": EDIT,
    "TextCommentEvent": EDIT,
    "VoiceCommentEvent": EDIT,
    # IDE window management.
    "EditorEvent": ENVIRONMENT,
    "PerspectiveEvent": ENVIRONMENT,
    "ViewEvent": ENVIRONMENT,
    "WindowEvent": ENVIRONMENT,
    # Moving around the code base.
    "EditorMouseEvent": NAVIGATION,
    "EditorTextCursorEvent": NAVIGATION,
    "SearchEvent": NAVIGATION,
    "TreeSelectionEvent": NAVIGATION,
    "TreeViewerEvent": NAVIGATION,
    # Workspace-level resources.
    "FileEvent": SOLUTION,
    "ProjectEvent": SOLUTION,
    "ResourceEvent": SOLUTION,
    "SaveEvent": SOLUTION,
}

EVENT_TYPES = frozenset(EVENT_CATEGORIES)

# Required payload fields per event type. Values are "str"/"int"/"bool" for a
# plain type check or a frozenset of admissible string values. Extra payload
# keys are preserved on round-trip but ignored by analysis.
_PAYLOAD_FIELDS: dict[str, dict[str, Any]] = {
    "RecordingEvent": {"action": frozenset({"start", "stop"})},
    "ScrollEvent": {
        "file": "str",
        "from_first": "int",
        "from_last": "int",
        "to_first": "int",
        "to_last": "int",
    },
    "TextSelectionEvent": {
        "file": "str",
        "start_line": "int",
        "start_col": "int",
        "end_line": "int",
        "end_col": "int",
    },
    "DebugEvent": {
        "kind": frozenset(
            {"breakpoint_set", "breakpoint_removed", "breakpoint_hit", "step"}
        ),
        "file": "str",
        "line": "int",
    },
    "LaunchEvent": {"mode": frozenset({"run", "debug"}), "target": "str"},
    "WebBrowserEvent": {"url": "str"},
    "CodeChangeEvent": {
        "file": "str",
        "line": "int",
        "col": "int",
        "inserted": "str",
        "deleted": "str",
    },
    "CodeCompletionEvent": {"file": "str", "line": "int", "accepted": "bool"},
    "TextCommentEvent": {"text": "str"},
    "VoiceCommentEvent": {"attachment_ref": "str"},
    "EditorEvent": {"editor_id": "str", "action": "str"},
    "PerspectiveEvent": {"name": "str", "action": "str"},
    "ViewEvent": {"name": "str", "action": "str"},
    "WindowEvent": {"window_id": "str", "action": "str"},
    "EditorMouseEvent": {
        "file": "str",
        "line": "int",
        "kind": frozenset({"move", "click"}),
    },
    "EditorTextCursorEvent": {"file": "str", "line": "int", "col": "int"},
    "SearchEvent": {"query": "str", "scope": "str"},
    "TreeSelectionEvent": {"path": "str"},
    "TreeViewerEvent": {"path": "str", "action": frozenset({"collapse", "expand"})},
    "FileEvent": {"path": "str", "action": frozenset({"open", "close"})},
    "ProjectEvent": {"name": "str", "action": frozenset({"load", "unload"})},
    "ResourceEvent": {
        "path": "str",
        "action": frozenset({"create", "delete", "change"}),
    },
    "SaveEvent": {"file": "str"},
}


class RecordingError(ValueError):
    """Base class for recording validation failures.

    Carries an optional 1-based line number locating the offending record
    inside an NDJSON source.
    """

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class MalformedRecord(RecordingError):
    """A line is not valid JSON or misses the event envelope fields."""


class UnknownEventType(RecordingError):
    """An event names a type outside the known catalogue."""


class SchemaViolation(RecordingError):
    """A payload misses a required field or carries an ill-typed one."""


class ContextViolation(RecordingError):
    """An event context breaks a context invariant."""


@dataclass(frozen=True)
class EventContext:
    """Editor state snapshot attached to an event.

    Attributes:
        file: Path of the focused file, if any.
        visible_range: First and last visible line of the focused editor,
            1-based and inclusive.
        visible_tabs: Paths of the open editor tabs, in tab order.
        focused_window: Identifier of the focused IDE window.
    """

    file: str | None = None
    visible_range: tuple[int, int] | None = None
    visible_tabs: tuple[str, ...] = ()
    focused_window: str | None = None

    def to_mapping(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.file is not None:
            out["file"] = self.file
        if self.visible_range is not None:
            out["visible_range"] = list(self.visible_range)
        if self.visible_tabs:
            out["visible_tabs"] = list(self.visible_tabs)
        if self.focused_window is not None:
            out["focused_window"] = self.focused_window
        return out


@dataclass(frozen=True)
class Event:
    """One recorded interaction event.

    Attributes:
        id: Recording-wide id, strictly increasing over the stream.
        timestamp_ms: Milliseconds since recording start, non-decreasing.
        type: One of the 23 known event type names.
        payload: Type-specific fields; unknown keys are carried along.
        context: Editor context snapshot at event time.
    """

    id: int
    timestamp_ms: int
    type: str
    payload: dict[str, Any] = field(default_factory=dict)
    context: EventContext = field(default_factory=EventContext)

    @property
    def category(self) -> str:
        return EVENT_CATEGORIES[self.type]

    def to_mapping(self) -> dict[str, Any]:
        return {
            "context": self.context.to_mapping(),
            "id": self.id,
            "payload": self.payload,
            "timestamp_ms": self.timestamp_ms,
            "type": self.type,
        }


def category_of(event_type: str) -> str:
    """Return the category of an event type.

    Args:
        event_type: Name of the event type.

    Raises:
        UnknownEventType: If the type is not in the catalogue.
    """
    try:
        return EVENT_CATEGORIES[event_type]
    except KeyError:
        raise UnknownEventType(f"unknown event type {event_type!r}") from None


def _is_int(value: Any) -> bool:
    # bool is an int subclass; a boolean line number is still ill-typed.
    return type(value) is int


def _check_payload(event_type: str, payload: Any, line_number: int | None) -> None:
    if not isinstance(payload, dict):
        raise SchemaViolation(f"{event_type} payload must be an object", line_number)
    for name, spec in _PAYLOAD_FIELDS[event_type].items():
        if name not in payload:
            raise SchemaViolation(
                f"{event_type} payload misses required field {name!r}", line_number
            )
        value = payload[name]
        if isinstance(spec, frozenset):
            if value not in spec:
                raise SchemaViolation(
                    f"{event_type} field {name!r} must be one of "
                    f"{sorted(spec)}, got {value!r}",
                    line_number,
                )
        elif spec == "str":
            if not isinstance(value, str):
                raise SchemaViolation(
                    f"{event_type} field {name!r} must be a string", line_number
                )
        elif spec == "int":
            if not _is_int(value):
                raise SchemaViolation(
                    f"{event_type} field {name!r} must be an integer", line_number
                )
        elif spec == "bool":
            if not isinstance(value, bool):
                raise SchemaViolation(
                    f"{event_type} field {name!r} must be a boolean", line_number
                )


def _parse_context(raw: Any, line_number: int | None) -> EventContext:
    if raw is None:
        return EventContext()
    if not isinstance(raw, dict):
        raise ContextViolation("context must be an object", line_number)

    file = raw.get("file")
    if file is not None and not isinstance(file, str):
        raise ContextViolation("context file must be a string", line_number)

    visible_range = None
    if "visible_range" in raw:
        vr = raw["visible_range"]
        if (
            not isinstance(vr, (list, tuple))
            or len(vr) != 2
            or not all(_is_int(v) for v in vr)
        ):
            raise ContextViolation(
                "visible_range must be a pair of integers", line_number
            )
        first, last = vr
        if not 1 <= first <= last:
            raise ContextViolation(
                f"visible_range must satisfy 1 <= first <= last, got {vr}", line_number
            )
        visible_range = (first, last)

    tabs_raw = raw.get("visible_tabs", [])
    if not isinstance(tabs_raw, (list, tuple)) or not all(
        isinstance(t, str) for t in tabs_raw
    ):
        raise ContextViolation("visible_tabs must be a list of paths", line_number)
    visible_tabs = tuple(tabs_raw)

    focused_window = raw.get("focused_window")
    if focused_window is not None and not isinstance(focused_window, str):
        raise ContextViolation("focused_window must be a string", line_number)

    if file is not None and visible_tabs and file not in visible_tabs:
        raise ContextViolation(
            f"focused file {file!r} is not among the visible tabs", line_number
        )

    return EventContext(
        file=file,
        visible_range=visible_range,
        visible_tabs=visible_tabs,
        focused_window=focused_window,
    )


def parse_event(line: str | bytes, line_number: int | None = None) -> Event:
    """Parse one NDJSON line into an Event.

    Args:
        line: Single-line JSON text for one event.
        line_number: 1-based source line, attached to error messages.

    Returns:
        The parsed event. Unknown payload keys are preserved.

    Raises:
        MalformedRecord: Bad JSON or missing envelope fields.
        UnknownEventType: Type outside the catalogue.
        SchemaViolation: Missing or ill-typed required payload field.
        ContextViolation: Context invariant broken.
    """
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON: {exc.msg}", line_number) from None
    if not isinstance(raw, dict):
        raise MalformedRecord("event must be a JSON object", line_number)

    for key in ("id", "timestamp_ms", "type", "payload"):
        if key not in raw:
            raise MalformedRecord(f"event misses field {key!r}", line_number)
    if not _is_int(raw["id"]):
        raise MalformedRecord("event id must be an integer", line_number)
    if not _is_int(raw["timestamp_ms"]):
        raise MalformedRecord("timestamp_ms must be an integer", line_number)

    event_type = raw["type"]
    if not isinstance(event_type, str) or event_type not in EVENT_TYPES:
        raise UnknownEventType(f"unknown event type {event_type!r}", line_number)

    _check_payload(event_type, raw["payload"], line_number)
    context = _parse_context(raw.get("context"), line_number)

    return Event(
        id=raw["id"],
        timestamp_ms=raw["timestamp_ms"],
        type=event_type,
        payload=dict(raw["payload"]),
        context=context,
    )


def serialize_event(event: Event) -> str:
    """Serialize an event to canonical single-line JSON.

    Keys are sorted and whitespace is stripped so equal events always
    produce identical bytes; parse_event inverts this exactly.
    """
    return json.dumps(
        event.to_mapping(), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )


def canonical_json(doc: Any) -> str:
    """Serialize any JSON document in the canonical form used throughout."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
