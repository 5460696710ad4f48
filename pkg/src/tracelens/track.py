"""Viewing-position tracks, keystroke aggregation and level-of-detail.

A track is the chronological sequence of plotted positions of a recording's
events on the global line axis. Keystroke-level code changes aggregate into
per-line edit groups carrying before/after line text; a deletion escapes the
running group so undo-and-retype behaviour stays visible. Tracks thin out
through a shape-preserving polyline simplification whose retained point sets
nest across zoom levels.

Recordings carry no initial file contents, only line counts, so line text is
reconstructed from the edit stream: untouched text is treated as empty and a
deletion back-fills the characters it reveals. Changes whose inserted or
deleted text spans line boundaries are structural: they update the line
genealogy and terminate the open edit group, but join no group themselves.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fnmatch import fnmatchcase
from typing import Iterable, Sequence

from .events import CATEGORIES, EVENT_CATEGORIES, EVENT_TYPES, Event
from .recording import FileEntry, Recording
from .spatial import (
    EditOutOfRange,
    GlobalIndex,
    LineDelta,
    LineMap,
    OriginalPosition,
    delta_from_event,
    initial_maps,
)

MAX_GAP_MS = 2_000
MAX_LOD = 24


class FilterSyntaxError(ValueError):
    """A filter expression contains a segment no grammar rule accepts."""


@dataclass(frozen=True)
class AggregatedEdit:
    """A burst of keystrokes collapsed into one before/after line rewrite."""

    file: str
    origin: OriginalPosition
    start_event_id: int
    end_event_id: int
    start_ms: int
    end_ms: int
    before: str
    after: str
    contains_deletion: bool


@dataclass(frozen=True)
class TrackPoint:
    """One plotted event: position on the global axis plus visible span."""

    event_id: int
    timestamp_ms: int
    type: str
    category: str
    file: str | None
    global_pos: int
    visible_span: tuple[int, int] | None
    marker: bool = False


@dataclass
class Track:
    """Plotted points of one recording over a global index."""

    recording_id: str
    index: GlobalIndex
    points: list[TrackPoint]
    lod: int = 0


@dataclass(frozen=True)
class FilterSpec:
    """Event retention filter; empty fields do not constrain.

    edge_categories controls which categories get connecting edges when
    rendered; None keeps edges for all categories.
    """

    include_types: frozenset[str] = frozenset()
    include_categories: frozenset[str] = frozenset()
    window: tuple[int, int] | None = None
    files: tuple[str, ...] = ()
    edge_categories: frozenset[str] | None = None

    _WINDOW = re.compile(r"^(\d+)\.\.(\d+)$")

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        """Parse the compact filter grammar used in URLs and CLI flags.

        Comma-separated segments: category or event type names select
        events, `t0..t1` bounds the millisecond window, `files=<glob>`
        restricts files.

        Raises:
            FilterSyntaxError: On a segment no rule accepts.
        """
        categories: set[str] = set()
        types: set[str] = set()
        window: tuple[int, int] | None = None
        files: list[str] = []
        for segment in filter(None, (s.strip() for s in text.split(","))):
            if segment.startswith("files="):
                files.append(segment[len("files=") :])
            elif match := cls._WINDOW.match(segment):
                window = (int(match.group(1)), int(match.group(2)))
            elif segment in CATEGORIES:
                categories.add(segment)
            elif segment in EVENT_TYPES:
                types.add(segment)
            else:
                raise FilterSyntaxError(f"unknown filter segment {segment!r}")
        return cls(
            include_types=frozenset(types),
            include_categories=frozenset(categories),
            window=window,
            files=tuple(files),
        )

    def admits(self, event: Event) -> bool:
        if self.include_types and event.type not in self.include_types:
            return False
        if self.include_categories and event.category not in self.include_categories:
            return False
        if self.window is not None:
            t0, t1 = self.window
            if not t0 <= event.timestamp_ms <= t1:
                return False
        if self.files:
            file = _event_file(event)
            if file is None or not any(
                fnmatchcase(file, pattern) for pattern in self.files
            ):
                return False
        return True


def _event_file(event: Event) -> str | None:
    file = event.payload.get("file")
    if isinstance(file, str):
        return file
    if event.type == "FileEvent":
        path = event.payload.get("path")
        if isinstance(path, str):
            return path
    return event.context.file


class FileReplay:
    """Text and genealogy of one file replayed from its edit stream."""

    def __init__(self, initial_line_count: int):
        self.line_map = LineMap(initial_line_count)
        self.texts: list[str] = [""] * initial_line_count

    def _splice(self, text: str, col: int, inserted: str, deleted: str) -> tuple[str, str]:
        """Apply one in-line change; returns (before, after).

        The before text is back-filled first: padding out to the edit column
        and extending with any deleted text the stream never wrote, so a
        deletion of unknown text reports what it removed.
        """
        if len(text) < col:
            text = text.ljust(col)
        end = col + len(deleted)
        if len(text) < end:
            text = text + deleted[len(text) - col :]
        return text, text[:col] + inserted + text[end:]

    def apply(self, event: Event) -> tuple[OriginalPosition, str, str, bool]:
        """Apply one CodeChangeEvent.

        Returns:
            (line identity before the change, before text, after text,
            structural flag). For structural changes the texts describe the
            first affected row.
        """
        payload = event.payload
        line, col = payload["line"], payload["col"]
        inserted, deleted = payload["inserted"], payload["deleted"]
        delta = delta_from_event(event)

        if not self.texts:
            # Edits against an empty file materialize a first pocket row.
            self.line_map.apply_edit(LineDelta(1, 0, 0, 1))
            self.texts = [""]

        if not 1 <= line <= len(self.texts):
            raise EditOutOfRange(
                f"edit at line {line} outside 1..{len(self.texts)}"
            )
        origin = self.line_map.map_to_original(line)

        if not delta.structural:
            before, after = self._splice(self.texts[line - 1], col, inserted, deleted)
            self.texts[line - 1] = after
            return origin, before, after, False

        d = delta.deleted_newlines
        if line - 1 + d > len(self.texts):
            raise EditOutOfRange(f"structural edit at line {line} exceeds file")
        # A column-0 deletion reaching end of file has no survivor row to
        # merge into; the join below then covers one row less and the
        # back-fill supplies the phantom trailing newline.
        joined = "\n".join(self.texts[line - 1 : min(line + d, len(self.texts))])
        joined_before, spliced = self._splice(joined, col, inserted, deleted)
        before = joined_before.split("\n", 1)[0]
        parts = spliced.split("\n")
        if len(parts) != 1 + delta.inserted_newlines:
            raise EditOutOfRange(
                f"structural edit at line {line} does not match file state"
            )
        self.line_map.apply_edit(delta)
        self.texts[line - 1 : line + d] = parts
        if len(self.texts) != self.line_map.current_line_count:
            raise EditOutOfRange("text replay diverged from the line genealogy")
        return origin, before, parts[0], True

    def final_text(self, origin: OriginalPosition) -> str | None:
        """Current text of the line with this identity, None if gone."""
        for row, text in zip(self.line_map._rows, self.texts):
            if row == origin:
                return text
        return None


def replays_for(files: Iterable[FileEntry]) -> dict[str, FileReplay]:
    return {entry.path: FileReplay(entry.initial_line_count) for entry in files}


def aggregate_edits(
    events: Sequence[Event],
    files: Iterable[FileEntry],
    max_gap_ms: int = MAX_GAP_MS,
) -> list[AggregatedEdit]:
    """Group keystroke-level code changes into per-line edits.

    Consecutive CodeChangeEvents (within the code-change subsequence) merge
    while they hit the same line identity and follow within max_gap_ms.
    A change that deletes text closes the open group and opens the next one,
    so the group sequence always replays: applying each group's before-to-
    after rewrite in order reproduces the final text of every edited line.

    Args:
        events: Full event stream in order.
        files: Manifest entries (initial line counts seed the replay).
        max_gap_ms: Largest silence joined into one group.

    Returns:
        Aggregated edits in chronological order.
    """
    replays = replays_for(files)
    groups: list[AggregatedEdit] = []

    key = None
    start_event: Event | None = None
    last_event: Event | None = None
    before = after = ""
    saw_deletion = False

    def close() -> None:
        nonlocal start_event
        if start_event is not None:
            groups.append(
                AggregatedEdit(
                    file=key[0],
                    origin=key[1],
                    start_event_id=start_event.id,
                    end_event_id=last_event.id,
                    start_ms=start_event.timestamp_ms,
                    end_ms=last_event.timestamp_ms,
                    before=before,
                    after=after,
                    contains_deletion=saw_deletion,
                )
            )
        start_event = None

    for event in events:
        if event.type != "CodeChangeEvent":
            continue
        file = event.payload["file"]
        replay = replays[file]
        origin, event_before, event_after, structural = replay.apply(event)
        if structural:
            close()
            continue
        deletes = event.payload["deleted"] != ""
        event_key = (file, origin)
        if (
            start_event is None
            or event_key != key
            or event.timestamp_ms - last_event.timestamp_ms > max_gap_ms
            or deletes
        ):
            close()
            key = event_key
            start_event = event
            before = event_before
            saw_deletion = False
        last_event = event
        after = event_after
        saw_deletion = saw_deletion or deletes
    close()
    return groups


@dataclass(frozen=True)
class EditOutcome:
    """Net fate of one edited line over the whole recording.

    A line survives when it still exists at the end and its final text
    differs from the text it had before its first edit group; otherwise the
    editing was reverted (typed back to the original state, cleared, or the
    line was deleted).
    """

    file: str
    origin: OriginalPosition
    surviving: bool
    first_start_ms: int
    last_end_ms: int
    last_end_event_id: int
    final_text: str | None


def edit_outcomes(
    events: Sequence[Event],
    files: Iterable[FileEntry],
    max_gap_ms: int = MAX_GAP_MS,
) -> list[EditOutcome]:
    """Classify every edited line as surviving or reverted.

    Args:
        events: Full event stream in order.
        files: Manifest entries.
        max_gap_ms: Aggregation gap, as for aggregate_edits.

    Returns:
        One outcome per edited line, ordered by when the line was last
        touched.
    """
    edits = aggregate_edits(events, files, max_gap_ms)
    replays = replays_for(files)
    for event in events:
        if event.type == "CodeChangeEvent":
            replays[event.payload["file"]].apply(event)

    by_line: dict[tuple[str, OriginalPosition], list[AggregatedEdit]] = {}
    for edit in edits:
        by_line.setdefault((edit.file, edit.origin), []).append(edit)

    outcomes = []
    for (file, origin), groups in by_line.items():
        final_text = replays[file].final_text(origin)
        surviving = final_text is not None and final_text != groups[0].before
        outcomes.append(
            EditOutcome(
                file=file,
                origin=origin,
                surviving=surviving,
                first_start_ms=groups[0].start_ms,
                last_end_ms=groups[-1].end_ms,
                last_end_event_id=groups[-1].end_event_id,
                final_text=final_text,
            )
        )
    outcomes.sort(key=lambda o: (o.last_end_ms, o.last_end_event_id))
    return outcomes


def _map_span(
    index: GlobalIndex, line_map: LineMap, file: str, first: int, last: int
) -> tuple[int, int] | None:
    count = line_map.current_line_count
    if count == 0:
        return None
    first = min(max(first, 1), count)
    last = min(max(last, 1), count)
    a = index.anchor_global(file, line_map.map_to_original(first))
    b = index.anchor_global(file, line_map.map_to_original(last))
    return (a, b) if a <= b else (b, a)


def build_track(
    recording: Recording,
    index: GlobalIndex,
    filter_spec: FilterSpec | None = None,
) -> Track:
    """Plot a recording's events on the global line axis.

    Edits advance the line genealogy as the walk proceeds, so every event is
    positioned against the file state of its own moment; pockets collapse
    onto their anchor's slot. Filtering drops points but never skips state
    evolution.

    Args:
        recording: Validated recording.
        index: Global index over the recording's manifest.
        filter_spec: Optional retention filter.

    Returns:
        The track, at level of detail 0.
    """
    maps = initial_maps(recording.files)
    points: list[TrackPoint] = []
    last_pos = 1

    for event in recording.events:
        payload = event.payload
        file = _event_file(event)
        pos: int | None = None
        span: tuple[int, int] | None = None
        marker = False

        if event.type == "ScrollEvent":
            line_map = maps[payload["file"]]
            span = _map_span(
                index, line_map, payload["file"], payload["to_first"], payload["to_last"]
            )
            if span is not None:
                pos = (span[0] + span[1]) // 2
        elif event.type == "TextSelectionEvent":
            line_map = maps[payload["file"]]
            count = line_map.current_line_count
            if count:
                line = min(max(payload["start_line"], 1), count)
                pos = index.anchor_global(
                    payload["file"], line_map.map_to_original(line)
                )
        elif "line" in payload and "file" in payload:
            line_map = maps[payload["file"]]
            count = line_map.current_line_count
            if event.type == "CodeChangeEvent":
                # Position against the pre-change state, then evolve it.
                replay_line = min(max(payload["line"], 1), max(count, 1))
                if count:
                    pos = index.anchor_global(
                        payload["file"], line_map.map_to_original(replay_line)
                    )
                delta = delta_from_event(event)
                if delta.structural:
                    if count == 0:
                        line_map.apply_edit(LineDelta(1, 0, 0, 1))
                    line_map.apply_edit(delta)
                elif count == 0:
                    line_map.apply_edit(LineDelta(1, 0, 0, 1))
            elif count:
                line = min(max(payload["line"], 1), count)
                pos = index.anchor_global(payload["file"], line_map.map_to_original(line))

        if pos is None and event.context.visible_range is not None and file in maps:
            span = _map_span(index, maps[file], file, *event.context.visible_range)
            if span is not None:
                pos = (span[0] + span[1]) // 2
        if span is None and event.context.visible_range is not None:
            ctx_file = event.context.file
            if ctx_file in maps:
                span = _map_span(
                    index, maps[ctx_file], ctx_file, *event.context.visible_range
                )
        if pos is None:
            pos = last_pos
            marker = True
        last_pos = pos

        if filter_spec is not None and not filter_spec.admits(event):
            continue
        points.append(
            TrackPoint(
                event_id=event.id,
                timestamp_ms=event.timestamp_ms,
                type=event.type,
                category=EVENT_CATEGORIES[event.type],
                file=file if file in maps else None,
                global_pos=pos,
                visible_span=span,
                marker=marker,
            )
        )

    return Track(recording_id=recording.recording_id, index=index, points=points)


def _deviation(p: TrackPoint, a: TrackPoint, b: TrackPoint) -> float:
    # Vertical deviation in line units from the chord a-b at p's timestamp;
    # timestamp-degenerate chords interpolate by nothing and use a's height.
    dx = b.timestamp_ms - a.timestamp_ms
    if dx == 0:
        base = (a.global_pos + b.global_pos) / 2
    else:
        f = (p.timestamp_ms - a.timestamp_ms) / dx
        base = a.global_pos + (b.global_pos - a.global_pos) * f
    return abs(p.global_pos - base)


def _significances(points: Sequence[TrackPoint], forced: Sequence[int]) -> list[float]:
    """Clamped split-point significance of every point.

    Thresholding the result at a tolerance reproduces the classic
    divide-and-conquer simplification at that tolerance, so retained sets
    nest as the tolerance grows.
    """
    sig = [0.0] * len(points)
    for idx in forced:
        sig[idx] = math.inf
    bounds = sorted(set(forced))
    stack: list[tuple[int, int, float]] = [
        (bounds[i], bounds[i + 1], math.inf) for i in range(len(bounds) - 1)
    ]
    while stack:
        start, end, clamp = stack.pop()
        if end - start < 2:
            continue
        best = start + 1
        best_dev = -1.0
        for i in range(start + 1, end):
            dev = _deviation(points[i], points[start], points[end])
            if dev > best_dev:
                best_dev = dev
                best = i
        value = min(clamp, best_dev)
        sig[best] = value
        stack.append((start, best, value))
        stack.append((best, end, value))
    return sig


def simplify(
    track: Track, level: int, anchor_event_ids: frozenset[int] = frozenset()
) -> Track:
    """Thin a track to a zoom level, keeping its shape.

    Level 0 is the identity; each further level doubles the tolerance
    (2**level lines). Endpoints and anchor events always survive, retained
    sets nest across levels, and no dropped point deviates vertically from
    the simplified polyline by more than the level's tolerance.

    Args:
        track: A level-0 track.
        level: Zoom-out level, non-negative.
        anchor_event_ids: Events that must survive at every level.

    Returns:
        A new track at the requested level.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    level = min(level, MAX_LOD)
    points = track.points
    if level == 0 or len(points) <= 2:
        return Track(track.recording_id, track.index, list(points), lod=level)
    forced = {0, len(points) - 1}
    forced.update(i for i, p in enumerate(points) if p.event_id in anchor_event_ids)
    sig = _significances(points, sorted(forced))
    tol = float(2**level)
    kept = [p for i, p in enumerate(points) if sig[i] > tol]
    return Track(track.recording_id, track.index, kept, lod=level)


def level_point_counts(
    track: Track,
    anchor_event_ids: frozenset[int] = frozenset(),
    up_to: int = 12,
) -> list[int]:
    """Retained point count per level, 0..up_to inclusive."""
    points = track.points
    if len(points) <= 2:
        return [len(points)] * (up_to + 1)
    forced = {0, len(points) - 1}
    forced.update(i for i, p in enumerate(points) if p.event_id in anchor_event_ids)
    sig = sorted(_significances(points, sorted(forced)), reverse=True)
    counts = [len(points)]
    for level in range(1, up_to + 1):
        tol = float(2**level)
        lo, hi = 0, len(sig)
        while lo < hi:
            mid = (lo + hi) // 2
            if sig[mid] > tol:
                lo = mid + 1
            else:
                hi = mid
        counts.append(lo)
    return counts


def point_to_mapping(point: TrackPoint) -> dict:
    return {
        "event_id": point.event_id,
        "timestamp_ms": point.timestamp_ms,
        "type": point.type,
        "category": point.category,
        "file": point.file,
        "global_pos": point.global_pos,
        "visible_span": list(point.visible_span) if point.visible_span else None,
        "marker": point.marker,
    }


def track_to_mapping(track: Track) -> dict:
    return {
        "recording_id": track.recording_id,
        "lod": track.lod,
        "total_lines": track.index.total_lines,
        "files": [
            {
                "path": path,
                "offset": track.index.offsets[path],
                "line_count": track.index.line_counts[path],
            }
            for path in track.index.ordered_paths
        ],
        "point_count": len(track.points),
        "points": [point_to_mapping(p) for p in track.points],
    }
