"""Action-pattern detectors and work-phase segmentation.

Detectors turn a recording into discrete behavioural observations: viewing
oscillations between two code regions, documentation lookups between code
focuses, full re-scans after a dead end, debugger runs, output-statement
debugging, and launches inside the validation phase. Phase segmentation
splits the timeline into investigation, edit and validation spans from the
local density of edit events.

All detectors are pure functions of their inputs: same recording and
parameters, same matches, independent of invocation order.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, replace
from fnmatch import fnmatchcase
from typing import Iterable, Protocol, Sequence

from .events import EDIT, Event
from .recording import FileEntry
from .track import AggregatedEdit, Track, aggregate_edits

OSCILLATE = "Oscillate"
RESTART = "Restart"
DOC_SWITCH = "DocSwitch"
DEBUGGER_USE = "DebuggerUse"
POOR_MANS_DEBUGGER = "PoorMansDebugger"
VALIDATION_LAUNCH = "ValidationLaunch"

PATTERN_KINDS = (
    OSCILLATE,
    RESTART,
    DOC_SWITCH,
    DEBUGGER_USE,
    POOR_MANS_DEBUGGER,
    VALIDATION_LAUNCH,
)

INVESTIGATION = "Investigation"
EDIT_PHASE = "Edit"
VALIDATION = "Validation"

PHASE_LABELS = (INVESTIGATION, EDIT_PHASE, VALIDATION)

# Output statements across the usual languages; a line gaining one of these
# followed by a launch is print-debugging.
DEFAULT_OUTPUT_PATTERNS = (
    r"System\.(out|err)\.print",
    r"printf\s*\(",
    r"\bprint\s*\(",
    r"console\.(log|warn|error|debug)",
    r"fmt\.Print",
    r"cout\s*<<",
    r"println!",
    r"\bputs\b",
    r"\becho\b",
    r"\blog(ger)?\.(trace|debug|info|warn|error)",
)

DEFAULT_DOC_GLOBS = ("*.txt", "*.md")


@dataclass(frozen=True)
class OscillateParams:
    min_alternations: int = 3
    region_gap_lines: int = 50
    window_ms: int = 300_000


@dataclass(frozen=True)
class RestartParams:
    breadth_files: int = 3
    window_ms: int = 120_000
    low_cyclissity: float = 0.2


@dataclass(frozen=True)
class PhaseParams:
    window_ms: int = 120_000
    step_ms: int = 30_000
    edit_density_low: float = 0.05
    edit_density_high: float = 0.15
    min_phase_ms: int = 60_000


@dataclass(frozen=True)
class DetectorParams:
    """All detector tuning in one bundle, overridable from config."""

    oscillate: OscillateParams = OscillateParams()
    restart: RestartParams = RestartParams()
    phase: PhaseParams = PhaseParams()
    doc_files: tuple[str, ...] = DEFAULT_DOC_GLOBS
    pmd_patterns: tuple[str, ...] = DEFAULT_OUTPUT_PATTERNS

    @staticmethod
    def from_mapping(raw: dict) -> "DetectorParams":
        params = DetectorParams()
        if "oscillate" in raw:
            params = replace(params, oscillate=OscillateParams(**raw["oscillate"]))
        if "restart" in raw:
            params = replace(params, restart=RestartParams(**raw["restart"]))
        if "phase" in raw:
            params = replace(params, phase=PhaseParams(**raw["phase"]))
        if "doc_files" in raw:
            params = replace(params, doc_files=tuple(raw["doc_files"]))
        if "pmd_patterns" in raw:
            params = replace(params, pmd_patterns=tuple(raw["pmd_patterns"]))
        return params


@dataclass(frozen=True)
class PatternMatch:
    """One detected behaviour span.

    evidence lists the event ids the detection rests on; region, when
    present, carries the two alternation poles as (file, global interval).
    """

    kind: str
    start_event_id: int
    end_event_id: int
    evidence: tuple[int, ...] = ()
    region: tuple[tuple[str, tuple[int, int]], ...] | None = None
    flags: tuple[str, ...] = ()

    def to_mapping(self) -> dict:
        return {
            "kind": self.kind,
            "start_event_id": self.start_event_id,
            "end_event_id": self.end_event_id,
            "evidence": list(self.evidence),
            "region": [
                {"file": file, "span": list(span)} for file, span in self.region
            ]
            if self.region is not None
            else None,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class PhaseSpan:
    label: str
    start_event_id: int
    end_event_id: int
    start_ms: int
    end_ms: int

    def to_mapping(self) -> dict:
        return {
            "label": self.label,
            "start_event_id": self.start_event_id,
            "end_event_id": self.end_event_id,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
        }


def is_doc_file(path: str, doc_globs: Sequence[str] = DEFAULT_DOC_GLOBS) -> bool:
    return any(fnmatchcase(path, glob) for glob in doc_globs)


def focus_sequence(
    events: Iterable[Event], known_files: set[str] | None = None
) -> list[tuple[Event, str]]:
    """File focus changes over a stream, consecutive duplicates collapsed.

    Focus derives from opened files, editor and window focus events, and
    tree selections that land on a manifest file.
    """
    out: list[tuple[Event, str]] = []
    for event in events:
        path: str | None = None
        if event.type == "FileEvent" and event.payload["action"] == "open":
            path = event.payload["path"]
        elif event.type in ("EditorEvent", "WindowEvent"):
            if event.payload.get("action") == "focus":
                path = event.context.file
        elif event.type == "TreeSelectionEvent":
            candidate = event.payload["path"]
            if known_files is None or candidate in known_files:
                path = candidate
        if path is None:
            continue
        if out and out[-1][1] == path:
            continue
        out.append((event, path))
    return out


class Visit(Protocol):
    """What detectors need from a file-visit record."""

    event_id: int
    timestamp_ms: int
    path: str
    cyclissity: float


@dataclass
class _Segment:
    file: str
    anchor_pos: int
    low: int
    high: int
    first_event_id: int
    last_event_id: int
    first_ms: int
    last_ms: int


def _segment_track(track: Track, gap: int) -> list[_Segment]:
    segments: list[_Segment] = []
    for point in track.points:
        if point.file is None or point.marker:
            continue
        seg = segments[-1] if segments else None
        if (
            seg is not None
            and point.file == seg.file
            and abs(point.global_pos - seg.anchor_pos) < gap
        ):
            seg.low = min(seg.low, point.global_pos)
            seg.high = max(seg.high, point.global_pos)
            seg.last_event_id = point.event_id
            seg.last_ms = point.timestamp_ms
        else:
            segments.append(
                _Segment(
                    file=point.file,
                    anchor_pos=point.global_pos,
                    low=point.global_pos,
                    high=point.global_pos,
                    first_event_id=point.event_id,
                    last_event_id=point.event_id,
                    first_ms=point.timestamp_ms,
                    last_ms=point.timestamp_ms,
                )
            )
    return segments


def _same_region(a: _Segment, b: _Segment, gap: int) -> bool:
    return a.file == b.file and abs(a.anchor_pos - b.anchor_pos) < gap


def detect_oscillate(
    track: Track, params: OscillateParams = OscillateParams()
) -> list[PatternMatch]:
    """Find viewing alternations between two regions.

    Track points collapse into dwell segments (same file, positions within
    region_gap_lines of the segment's first point); an oscillation is a
    maximal run of segments alternating between two regions with at least
    min_alternations jumps, some min_alternations of them inside window_ms.
    A monotone read-through never alternates: every jump lands on a fresh
    region.
    """
    gap = params.region_gap_lines
    segments = _segment_track(track, gap)
    matches: list[PatternMatch] = []
    i = 0
    while i < len(segments) - 1:
        j = i + 1
        while j + 1 < len(segments) and _same_region(
            segments[j + 1], segments[j - 1], gap
        ):
            j += 1
        jumps = j - i
        if jumps >= params.min_alternations:
            jump_times = [segments[k].first_ms for k in range(i + 1, j + 1)]
            window_ok = any(
                jump_times[r + params.min_alternations - 1] - jump_times[r]
                <= params.window_ms
                for r in range(len(jump_times) - params.min_alternations + 1)
            )
            if window_ok:
                pole_a = segments[i]
                pole_b = segments[i + 1]
                a_low = min(s.low for s in segments[i : j + 1 : 2])
                a_high = max(s.high for s in segments[i : j + 1 : 2])
                b_low = min(s.low for s in segments[i + 1 : j + 1 : 2])
                b_high = max(s.high for s in segments[i + 1 : j + 1 : 2])
                matches.append(
                    PatternMatch(
                        kind=OSCILLATE,
                        start_event_id=segments[i].first_event_id,
                        end_event_id=segments[j].last_event_id,
                        evidence=tuple(
                            s.first_event_id for s in segments[i : j + 1]
                        ),
                        region=(
                            (pole_a.file, (a_low, a_high)),
                            (pole_b.file, (b_low, b_high)),
                        ),
                    )
                )
                i = j + 1
                continue
        i += 1
    return matches


def detect_doc_switch(
    events: Sequence[Event],
    doc_files: Sequence[str] = DEFAULT_DOC_GLOBS,
    known_files: set[str] | None = None,
) -> list[PatternMatch]:
    """Find code-to-documentation-and-back focus excursions.

    A match spans the documentation focuses; the flanking code focuses go
    into the evidence. Consecutive documentation files inside one excursion
    form a single match.
    """
    focus = focus_sequence(events, known_files)
    matches: list[PatternMatch] = []
    i = 1
    while i < len(focus):
        event, path = focus[i]
        if is_doc_file(path, doc_files) and not is_doc_file(focus[i - 1][1], doc_files):
            j = i
            while j + 1 < len(focus) and is_doc_file(focus[j + 1][1], doc_files):
                j += 1
            if j + 1 < len(focus):
                matches.append(
                    PatternMatch(
                        kind=DOC_SWITCH,
                        start_event_id=focus[i][0].id,
                        end_event_id=focus[j][0].id,
                        evidence=tuple(
                            focus[k][0].id for k in range(i - 1, j + 2)
                        ),
                    )
                )
            i = j + 1
        else:
            i += 1
    return matches


def detect_debugger_use(events: Sequence[Event]) -> list[PatternMatch]:
    """Find breakpoint-set, debug-launch, breakpoint-hit cycles in order.

    The caller passes one session's events; matches never span sessions.
    """
    matches: list[PatternMatch] = []
    pending_set: Event | None = None
    pending_launch: Event | None = None
    for event in events:
        if event.type == "DebugEvent":
            kind = event.payload["kind"]
            if kind == "breakpoint_set" and pending_set is None:
                pending_set = event
            elif kind == "breakpoint_hit" and pending_set and pending_launch:
                matches.append(
                    PatternMatch(
                        kind=DEBUGGER_USE,
                        start_event_id=pending_set.id,
                        end_event_id=event.id,
                        evidence=(pending_set.id, pending_launch.id, event.id),
                    )
                )
                pending_set = None
                pending_launch = None
        elif (
            event.type == "LaunchEvent"
            and event.payload["mode"] == "debug"
            and pending_set is not None
        ):
            pending_launch = event
    return matches


def detect_poor_mans_debugger(
    events: Sequence[Event],
    files: Iterable[FileEntry],
    patterns: Sequence[str] = DEFAULT_OUTPUT_PATTERNS,
    edits: Sequence[AggregatedEdit] | None = None,
) -> list[PatternMatch]:
    """Find output-statement debugging: print inserted, program launched.

    Aggregated edits whose after-state gains an output statement pair with
    the first launch that follows; edits sharing that launch merge into one
    match. A later edit that removes the statement from the same line flags
    the match removed_later. Pass one session's events, launches never
    match across sessions.
    """
    if edits is None:
        edits = aggregate_edits(events, files)
    compiled = [re.compile(p) for p in patterns]

    def prints(text: str) -> bool:
        return any(rx.search(text) for rx in compiled)

    launches = [e for e in events if e.type == "LaunchEvent"]
    launch_times = [e.timestamp_ms for e in launches]

    matches: list[PatternMatch] = []
    current: list[AggregatedEdit] = []
    current_launch: Event | None = None

    def close() -> None:
        if not current:
            return
        removed = False
        for edit in current:
            for later in edits:
                if (
                    later.end_ms > edit.end_ms
                    and (later.file, later.origin) == (edit.file, edit.origin)
                    and prints(edit.after)
                    and not prints(later.after)
                ):
                    removed = True
        evidence = []
        for edit in current:
            evidence.extend((edit.start_event_id, edit.end_event_id))
        evidence.append(current_launch.id)
        matches.append(
            PatternMatch(
                kind=POOR_MANS_DEBUGGER,
                start_event_id=current[0].start_event_id,
                end_event_id=current_launch.id,
                evidence=tuple(dict.fromkeys(evidence)),
                flags=("removed_later",) if removed else (),
            )
        )

    for edit in edits:
        if not (prints(edit.after) and not prints(edit.before)):
            continue
        idx = bisect.bisect_left(launch_times, edit.end_ms)
        if idx >= len(launches):
            continue
        launch = launches[idx]
        if current_launch is not None and launch.id != current_launch.id:
            close()
            current = []
        current_launch = launch
        current.append(edit)
    close()
    return matches


def segment_phases(
    events: Sequence[Event],
    params: PhaseParams = PhaseParams(),
    files: Iterable[FileEntry] | None = None,
) -> list[PhaseSpan]:
    """Split a timeline into Investigation, Edit and Validation spans.

    The timeline advances in step_ms steps; each step holding at least one
    event is labeled from the edit-event density of the window_ms window
    starting at it (below edit_density_low: Investigation, at or above
    edit_density_high: Edit, between: unlabeled). Steps after the last
    surviving edit turn into Validation when launches follow. Equal labels
    merge; spans shorter than min_phase_ms or without events are dropped.
    Event-free steps stay unlabeled, so long pauses break phases.
    """
    events = list(events)
    if not events:
        return []
    times = [e.timestamp_ms for e in events]
    edit_prefix = [0]
    for event in events:
        edit_prefix.append(edit_prefix[-1] + (1 if event.category == EDIT else 0))

    t0, t_end = times[0], times[-1]
    step, window = params.step_ms, params.window_ms
    step_count = (t_end - t0) // step + 1

    last_surviving_ms: int | None = None
    if files is not None:
        from .track import edit_outcomes

        for outcome in edit_outcomes(events, files):
            if outcome.surviving:
                last = outcome.last_end_ms
                if last_surviving_ms is None or last > last_surviving_ms:
                    last_surviving_ms = last
    launch_after = (
        last_surviving_ms is not None
        and any(
            e.type == "LaunchEvent" and e.timestamp_ms > last_surviving_ms
            for e in events
        )
    )

    labels: list[str | None] = []
    for k in range(step_count):
        start = t0 + k * step
        in_step = bisect.bisect_left(times, start + step) - bisect.bisect_left(
            times, start
        )
        if in_step == 0:
            labels.append(None)
            continue
        lo = bisect.bisect_left(times, start)
        hi = bisect.bisect_left(times, start + window)
        total = hi - lo
        edits = edit_prefix[hi] - edit_prefix[lo]
        density = edits / total
        if density < params.edit_density_low:
            label = INVESTIGATION
        elif density >= params.edit_density_high:
            label = EDIT_PHASE
        else:
            label = None
        if (
            launch_after
            and start > last_surviving_ms
            and label != EDIT_PHASE
        ):
            label = VALIDATION
        labels.append(label)

    spans: list[PhaseSpan] = []
    k = 0
    while k < step_count:
        label = labels[k]
        if label is None:
            k += 1
            continue
        j = k
        while j + 1 < step_count and labels[j + 1] == label:
            j += 1
        span_start = t0 + k * step
        span_end = t0 + (j + 1) * step
        if span_end - span_start >= params.min_phase_ms:
            lo = bisect.bisect_left(times, span_start)
            hi = bisect.bisect_left(times, span_end)
            if hi > lo:
                spans.append(
                    PhaseSpan(
                        label=label,
                        start_event_id=events[lo].id,
                        end_event_id=events[hi - 1].id,
                        start_ms=times[lo],
                        end_ms=times[hi - 1],
                    )
                )
        k = j + 1
    return spans


def detect_restart(
    events: Sequence[Event],
    phases: Sequence[PhaseSpan],
    history: Sequence[Visit],
    params: RestartParams = RestartParams(),
    doc_files: Sequence[str] = DEFAULT_DOC_GLOBS,
) -> list[PatternMatch]:
    """Find dead-end restarts: doc lookup then a broad low-familiarity scan.

    After the first Edit phase has begun, a documentation focus followed
    within window_ms by visits to at least breadth_files distinct non-doc
    files whose mean cyclissity stays below low_cyclissity is a restart.
    Returning straight to one known place is not: no breadth, high
    familiarity.
    """
    edit_spans = [p for p in phases if p.label == EDIT_PHASE]
    if not edit_spans:
        return []
    first_edit_ms = edit_spans[0].start_ms
    matches: list[PatternMatch] = []
    consumed_until = -1
    for visit in history:
        if visit.timestamp_ms < first_edit_ms or visit.timestamp_ms <= consumed_until:
            continue
        if not is_doc_file(visit.path, doc_files):
            continue
        window_end = visit.timestamp_ms + params.window_ms
        scan = [
            w
            for w in history
            if visit.timestamp_ms < w.timestamp_ms <= window_end
            and not is_doc_file(w.path, doc_files)
        ]
        if len({w.path for w in scan}) < params.breadth_files:
            continue
        mean_cyclissity = sum(w.cyclissity for w in scan) / len(scan)
        if mean_cyclissity >= params.low_cyclissity:
            continue
        matches.append(
            PatternMatch(
                kind=RESTART,
                start_event_id=visit.event_id,
                end_event_id=scan[-1].event_id,
                evidence=(visit.event_id, *(w.event_id for w in scan)),
            )
        )
        consumed_until = scan[-1].timestamp_ms
    return matches


def detect_validation_launches(
    events: Sequence[Event], phases: Sequence[PhaseSpan]
) -> list[PatternMatch]:
    """Mark every launch inside a Validation phase."""
    spans = [p for p in phases if p.label == VALIDATION]
    matches = []
    for event in events:
        if event.type != "LaunchEvent":
            continue
        if any(s.start_ms <= event.timestamp_ms <= s.end_ms for s in spans):
            matches.append(
                PatternMatch(
                    kind=VALIDATION_LAUNCH,
                    start_event_id=event.id,
                    end_event_id=event.id,
                    evidence=(event.id,),
                )
            )
    return matches
