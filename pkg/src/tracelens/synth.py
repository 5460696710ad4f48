"""Synthetic recordings with planted, machine-checkable behaviour.

Each archetype generates an event stream exhibiting exactly one behaviour
family and returns the ground truth of what was planted, so detector
precision and recall can be measured without hand labeling. Streams are
deterministic per (archetype, seed) and valid against the full wire checks.

Archetypes compose by concatenation: manifests merge, ids and timestamps
shift, truths union. An archetype that starts with a documentation focus
(read-through) belongs first in a composition, otherwise the seam itself
reads as a documentation excursion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

from .events import Event, EventContext
from .patterns import (
    DEBUGGER_USE,
    DOC_SWITCH,
    EDIT_PHASE,
    INVESTIGATION,
    OSCILLATE,
    POOR_MANS_DEBUGGER,
    RESTART,
    VALIDATION,
    VALIDATION_LAUNCH,
)
from .recording import FileEntry, Recording

READ_THROUGH = "read-through"
OSCILLATE_ARCH = "oscillate"
INVESTIGATE_EDIT_VALIDATE = "investigate-edit-validate"
RESTART_ARCH = "restart"
PMD_ARCH = "poor-mans-debugger"
DEBUGGER_ARCH = "debugger-use"
IDLE_GAPS = "idle-gaps"

ARCHETYPES = (
    READ_THROUGH,
    OSCILLATE_ARCH,
    INVESTIGATE_EDIT_VALIDATE,
    RESTART_ARCH,
    PMD_ARCH,
    DEBUGGER_ARCH,
    IDLE_GAPS,
)

DOC_FILE = "instructions.txt"
MAIN_FILE = "src/Main.java"
HELPER_FILE = "src/Helper.java"


@dataclass
class GroundTruth:
    """What a synthetic recording contains, in event-id coordinates."""

    patterns: list[dict] = field(default_factory=list)
    phases: list[dict] = field(default_factory=list)

    def to_mapping(self) -> dict:
        return {"patterns": list(self.patterns), "phases": list(self.phases)}

    @staticmethod
    def from_mapping(raw: Mapping[str, Any]) -> "GroundTruth":
        return GroundTruth(
            patterns=list(raw.get("patterns", [])),
            phases=list(raw.get("phases", [])),
        )

    def shifted(self, id_offset: int) -> "GroundTruth":
        def shift(entry: dict) -> dict:
            out = dict(entry)
            out["start_id"] += id_offset
            out["end_id"] += id_offset
            return out

        return GroundTruth(
            patterns=[shift(p) for p in self.patterns],
            phases=[shift(p) for p in self.phases],
        )


def _pattern(kind: str, start_id: int, end_id: int) -> dict:
    return {"kind": kind, "start_id": start_id, "end_id": end_id}


def _phase(label: str, start_id: int, end_id: int) -> dict:
    return {"label": label, "start_id": start_id, "end_id": end_id}


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.events: list[Event] = []
        self.now = 0
        self._next_id = 1

    def wait(self, lo_ms: int, hi_ms: int | None = None) -> None:
        self.now += self.rng.randint(lo_ms, hi_ms if hi_ms is not None else lo_ms)

    def emit(self, type_: str, payload: dict) -> Event:
        event = Event(
            id=self._next_id,
            timestamp_ms=self.now,
            type=type_,
            payload=payload,
            context=EventContext(),
        )
        self._next_id += 1
        self.events.append(event)
        return event

    def open(self, path: str) -> Event:
        return self.emit("FileEvent", {"path": path, "action": "open"})

    def scroll(self, file: str, first: int, height: int = 30) -> Event:
        return self.emit(
            "ScrollEvent",
            {
                "file": file,
                "from_first": max(1, first - 5),
                "from_last": max(1, first - 5) + height,
                "to_first": first,
                "to_last": first + height,
            },
        )

    def cursor(self, file: str, line: int) -> Event:
        return self.emit(
            "EditorTextCursorEvent", {"file": file, "line": line, "col": 0}
        )

    def edit(self, file: str, line: int, inserted: str, deleted: str = "") -> Event:
        return self.emit(
            "CodeChangeEvent",
            {
                "file": file,
                "line": line,
                "col": 0,
                "inserted": inserted,
                "deleted": deleted,
            },
        )

    def launch(self, mode: str = "run") -> Event:
        return self.emit("LaunchEvent", {"mode": mode, "target": "Main"})

    def debug(self, kind: str, file: str, line: int) -> Event:
        return self.emit("DebugEvent", {"kind": kind, "file": file, "line": line})


def _read_through(rng: random.Random, params: Mapping[str, Any]):
    total = int(params.get("events", 80))
    scrolls = max(total - 8, 10)
    files = [
        FileEntry(DOC_FILE, 40),
        FileEntry(MAIN_FILE, scrolls * 4 + 80),
    ]
    b = _Builder(rng)
    b.open(DOC_FILE)
    line = 1
    for _ in range(4):
        b.wait(2_000, 7_000)
        b.scroll(DOC_FILE, line, height=8)
        line += rng.randint(1, 3)
    b.wait(3_000, 8_000)
    b.open(MAIN_FILE)
    line = 1
    for _ in range(scrolls):
        b.wait(2_000, 8_000)
        b.scroll(MAIN_FILE, line)
        line += rng.randint(1, 4)
    return files, b.events, GroundTruth()


def _oscillate(rng: random.Random, params: Mapping[str, Any]):
    alternations = int(params.get("alternations", 4))
    if alternations < 3:
        raise ValueError("oscillation needs at least 3 alternations")
    files = [FileEntry(MAIN_FILE, 220)]
    b = _Builder(rng)
    b.open(MAIN_FILE)
    for _ in range(2):
        b.wait(2_000, 6_000)
        b.scroll(MAIN_FILE, 90 + rng.randint(-3, 3), height=10)

    first_id = last_id = None
    for visit in range(alternations + 1):
        centre = 25 if visit % 2 == 0 else 165
        for _ in range(rng.randint(2, 3)):
            b.wait(3_000, 8_000)
            event = b.scroll(MAIN_FILE, centre + rng.randint(-5, 5), height=10)
            if first_id is None:
                first_id = event.id
            last_id = event.id
    truth = GroundTruth(patterns=[_pattern(OSCILLATE, first_id, last_id)])
    return files, b.events, truth


def _edit_burst(b: _Builder, file: str, lines: Sequence[int]) -> tuple[int, int]:
    """Alternate insertions and cursor moves; starts and ends on an edit."""
    first = last = None
    for i, line in enumerate(lines):
        b.wait(5_000, 7_000)
        event = b.edit(file, line, f"int v{line} = {line};")
        first = first or event.id
        last = event.id
        if i < len(lines) - 1:
            b.wait(5_000, 7_000)
            b.cursor(file, line)
    return first, last


def _investigate_edit_validate(rng: random.Random, params: Mapping[str, Any]):
    files = [
        FileEntry(MAIN_FILE, 200),
        FileEntry(HELPER_FILE, 200),
        FileEntry(DOC_FILE, 40),
    ]
    b = _Builder(rng)
    inv_first = b.open(MAIN_FILE).id
    line = 1
    for _ in range(8):
        b.wait(4_000, 9_000)
        b.scroll(MAIN_FILE, line)
        line += rng.randint(2, 5)
    b.wait(4_000, 8_000)
    doc_id = b.open(DOC_FILE).id
    for _ in range(2):
        b.wait(3_000, 7_000)
        b.scroll(DOC_FILE, rng.randint(1, 10), height=8)
    b.wait(4_000, 8_000)
    b.open(HELPER_FILE)
    line = 1
    inv_last = None
    for _ in range(6):
        b.wait(4_000, 9_000)
        inv_last = b.scroll(HELPER_FILE, line).id
        line += rng.randint(2, 5)

    b.wait(125_000, 135_000)
    edit_first, edit_last = _edit_burst(b, MAIN_FILE, list(range(5, 5 + 16)))

    b.wait(125_000, 135_000)
    val_first = None
    launch_ids = []
    line = 1
    for i in range(16):
        b.wait(5_000, 8_000)
        if i in (4, 10):
            event = b.launch()
            launch_ids.append(event.id)
        else:
            event = b.cursor(MAIN_FILE, line)
            line += rng.randint(2, 5)
        val_first = val_first or event.id
    val_last = b.events[-1].id

    truth = GroundTruth(
        patterns=[_pattern(DOC_SWITCH, doc_id, doc_id)]
        + [_pattern(VALIDATION_LAUNCH, i, i) for i in launch_ids],
        phases=[
            _phase(INVESTIGATION, inv_first, inv_last),
            _phase(EDIT_PHASE, edit_first, edit_last),
            _phase(VALIDATION, val_first, val_last),
        ],
    )
    return files, b.events, truth


def _restart(rng: random.Random, params: Mapping[str, Any]):
    restarts = int(params.get("restarts", 1))
    extras = [f"src/Extra{i}.java" for i in range(1, 4 * restarts + 1)]
    files = [
        FileEntry(MAIN_FILE, 200),
        FileEntry(DOC_FILE, 40),
        *(FileEntry(path, 100) for path in extras),
    ]
    b = _Builder(rng)
    b.open(MAIN_FILE)
    line = 1
    for _ in range(8):
        b.wait(4_000, 9_000)
        b.scroll(MAIN_FILE, line)
        line += rng.randint(2, 5)

    b.wait(125_000, 135_000)
    _edit_burst(b, MAIN_FILE, list(range(5, 5 + 14)))

    truth = GroundTruth()
    for cycle in range(restarts):
        # Past the previous scan's window, so cycles never bleed together.
        b.wait(125_000, 135_000)
        doc = b.open(DOC_FILE)
        scan_last = None
        for path in extras[cycle * 4 : cycle * 4 + 4]:
            b.wait(8_000, 15_000)
            scan_last = b.open(path)
            b.wait(2_000, 4_000)
            b.cursor(path, rng.randint(1, 40))
        truth.patterns.append(_pattern(DOC_SWITCH, doc.id, doc.id))
        truth.patterns.append(_pattern(RESTART, doc.id, scan_last.id))
    return files, b.events, truth


def _poor_mans_debugger(rng: random.Random, params: Mapping[str, Any]):
    cycles = int(params.get("cycles", 1))
    removed = bool(params.get("removed", False))
    files = [FileEntry(MAIN_FILE, 60)]
    b = _Builder(rng)
    b.open(MAIN_FILE)
    for i in range(4):
        b.wait(5_000, 8_000)
        b.cursor(MAIN_FILE, 5 + i)

    truth = GroundTruth()
    probe_lines = []
    for cycle in range(cycles):
        line = 10 + 2 * cycle
        probe_lines.append(line)
        b.wait(6_000, 12_000)
        edit = b.edit(MAIN_FILE, line, f'System.out.println("probe{cycle}");')
        b.wait(5_000, 8_000)
        launch = b.launch()
        b.wait(4_000, 6_000)
        b.cursor(MAIN_FILE, line + 1)
        truth.patterns.append(_pattern(POOR_MANS_DEBUGGER, edit.id, launch.id))
    if removed:
        for cycle, line in enumerate(probe_lines):
            b.wait(4_000, 8_000)
            b.edit(MAIN_FILE, line, "", deleted=f'System.out.println("probe{cycle}");')
    return files, b.events, truth


def _debugger_use(rng: random.Random, params: Mapping[str, Any]):
    cycles = int(params.get("cycles", 1))
    files = [FileEntry(MAIN_FILE, 100)]
    b = _Builder(rng)
    b.open(MAIN_FILE)
    for i in range(3):
        b.wait(4_000, 8_000)
        b.cursor(MAIN_FILE, 10 + 3 * i)

    truth = GroundTruth()
    for cycle in range(cycles):
        b.wait(5_000, 10_000)
        bp = b.debug("breakpoint_set", MAIN_FILE, 20 + cycle)
        b.wait(4_000, 7_000)
        b.launch(mode="debug")
        b.wait(3_000, 6_000)
        hit = b.debug("breakpoint_hit", MAIN_FILE, 20 + cycle)
        for _ in range(2):
            b.wait(2_000, 4_000)
            b.debug("step", MAIN_FILE, 21 + cycle)
        truth.patterns.append(_pattern(DEBUGGER_USE, bp.id, hit.id))
    return files, b.events, truth


def _idle_gaps(rng: random.Random, params: Mapping[str, Any]):
    gap_seconds = int(params.get("gap_seconds", 400))
    segments = int(params.get("segments", 2))
    files = [FileEntry(MAIN_FILE, 40 * segments + 200)]
    b = _Builder(rng)
    b.open(MAIN_FILE)
    line = 1
    for segment in range(segments):
        if segment:
            b.now += gap_seconds * 1_000
        for _ in range(9):
            b.wait(5_000, 10_000)
            b.scroll(MAIN_FILE, line)
            line += rng.randint(1, 4)
    return files, b.events, GroundTruth()


_GENERATORS = {
    READ_THROUGH: _read_through,
    OSCILLATE_ARCH: _oscillate,
    INVESTIGATE_EDIT_VALIDATE: _investigate_edit_validate,
    RESTART_ARCH: _restart,
    PMD_ARCH: _poor_mans_debugger,
    DEBUGGER_ARCH: _debugger_use,
    IDLE_GAPS: _idle_gaps,
}


def generate_synthetic(
    spec: Mapping[str, Any], seed: int = 0
) -> tuple[Recording, GroundTruth]:
    """Generate one synthetic recording plus its ground truth.

    Args:
        spec: Either {"archetype": <name>, ...params} or
            {"compose": [<spec>, ...], "gap_ms": <int>} for concatenation.
        seed: Determines every random choice; same spec and seed, same
            recording bytes.

    Returns:
        (recording, truth): the recording is fully valid against the wire
        checks, the truth lists planted patterns and phases by event id.
    """
    if "compose" in spec:
        return _compose(spec, seed)
    name = spec.get("archetype")
    if name not in _GENERATORS:
        raise ValueError(f"unknown archetype {name!r}")
    rng = random.Random(f"{name}:{seed}")
    files, events, truth = _GENERATORS[name](rng, spec)
    recording_id = spec.get("recording_id", f"{name}-{seed}")
    return Recording(recording_id=recording_id, files=files, events=events), truth


def _compose(spec: Mapping[str, Any], seed: int) -> tuple[Recording, GroundTruth]:
    parts = spec["compose"]
    if not parts:
        raise ValueError("compose needs at least one part")
    gap_ms = int(spec.get("gap_ms", 400_000))

    merged_files: dict[str, int] = {}
    events: list[Event] = []
    truth = GroundTruth()
    clock = 0
    id_offset = 0
    for k, part in enumerate(parts):
        recording, part_truth = generate_synthetic(part, seed=seed * 1_000 + k)
        for entry in recording.files:
            # Shared paths take the largest size any part asked for.
            known = merged_files.get(entry.path, 0)
            merged_files[entry.path] = max(known, entry.initial_line_count)
        time_offset = clock
        for event in recording.events:
            events.append(
                replace(
                    event,
                    id=event.id + id_offset,
                    timestamp_ms=event.timestamp_ms + time_offset,
                )
            )
        shifted = part_truth.shifted(id_offset)
        truth.patterns.extend(shifted.patterns)
        truth.phases.extend(shifted.phases)
        id_offset = events[-1].id
        clock = events[-1].timestamp_ms + gap_ms

    recording_id = spec.get("recording_id", f"composite-{seed}")
    return (
        Recording(
            recording_id=recording_id,
            files=[FileEntry(path, count) for path, count in merged_files.items()],
            events=events,
        ),
        truth,
    )
