"""File-visit familiarity metric and behaviour scoring.

Every file focus appends to a visit history. A revisit's cyclissity is
1 - P_c/N where P_c counts the visits since the file was last seen and N is
the history length at the revisit; a first visit scores zero. Late short
loops (just saw it again) approach one, early-history returns approach zero.

Scoring turns detected behaviour into a running integer: beneficial moves
(doc lookup before editing, validation launches, edits that survive, returns
to recently seen files) add one, wasteful repetition (restarts after the
first, oscillating beyond three rounds in one region, print-debugging beyond
two cycles, reverted edits) subtracts one. The final score is exactly the
sum of the trigger deltas, independent of detector invocation order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping, Sequence

from .events import Event
from .patterns import (
    DEBUGGER_USE,
    DOC_SWITCH,
    EDIT_PHASE,
    OSCILLATE,
    PATTERN_KINDS,
    PHASE_LABELS,
    POOR_MANS_DEBUGGER,
    RESTART,
    VALIDATION_LAUNCH,
    PatternMatch,
    PhaseSpan,
    focus_sequence,
)
from .track import EditOutcome

N_MODE_VISITS = "visits"
N_MODE_DISTINCT = "distinct"

HIGH_CYCLISSITY_REVISIT = "HighCyclissityRevisit"
SURVIVING_EDIT = "SurvivingEdit"
REVERTED_EDIT = "RevertedEdit"

TRIGGER_KINDS = (
    HIGH_CYCLISSITY_REVISIT,
    DOC_SWITCH,
    VALIDATION_LAUNCH,
    SURVIVING_EDIT,
    REVERTED_EDIT,
    RESTART,
    OSCILLATE,
    POOR_MANS_DEBUGGER,
    DEBUGGER_USE,
)


def cyclissity(recency_distance: int, history_length: int) -> float:
    """1 - P_c/N for a revisit at history length N."""
    return 1 - recency_distance / history_length


@dataclass(frozen=True)
class FileVisit:
    """One entry of the visit history.

    recency_distance is None on a first visit; the immediately previous
    visit counts as one step back.
    """

    event_id: int
    timestamp_ms: int
    path: str
    visit_index: int
    recency_distance: int | None
    cyclissity: float

    def to_mapping(self) -> dict:
        return {
            "event_id": self.event_id,
            "timestamp_ms": self.timestamp_ms,
            "path": self.path,
            "visit_index": self.visit_index,
            "recency_distance": self.recency_distance,
            "cyclissity": self.cyclissity,
        }


def file_visit_history(
    events: Iterable[Event],
    known_files: set[str] | None = None,
    n_mode: str = N_MODE_VISITS,
) -> list[FileVisit]:
    """Stream the visit history with per-visit cyclissity.

    Args:
        events: Event stream in order.
        known_files: Manifest paths; tree selections outside it are ignored.
        n_mode: "visits" divides by history length, "distinct" by the
            number of distinct files seen so far.

    Returns:
        Visits in order, consecutive refocuses of the same file collapsed.
    """
    if n_mode not in (N_MODE_VISITS, N_MODE_DISTINCT):
        raise ValueError(f"unknown n_mode {n_mode!r}")
    history: list[FileVisit] = []
    last_seen: dict[str, int] = {}
    for event, path in focus_sequence(events, known_files):
        index = len(history) + 1
        if path in last_seen:
            distance = index - last_seen[path]
            n = index if n_mode == N_MODE_VISITS else len(last_seen)
            value = cyclissity(distance, n)
        else:
            distance = None
            value = 0.0
        history.append(
            FileVisit(
                event_id=event.id,
                timestamp_ms=event.timestamp_ms,
                path=path,
                visit_index=index,
                recency_distance=distance,
                cyclissity=value,
            )
        )
        last_seen[path] = index
    return history


@dataclass(frozen=True)
class ScoringRules:
    """Trigger deltas and thresholds of the behaviour score."""

    high_cyclissity_threshold: float = 0.5
    high_cyclissity_revisit: int = 1
    doc_switch_before_first_edit: int = 1
    validation_launch: int = 1
    surviving_edit: int = 1
    reverted_edit: int = -1
    restart_first: int = 0
    restart_repeat: int = -1
    oscillate_free_repetitions: int = 3
    oscillate_repeat: int = -1
    pmd_free_repetitions: int = 2
    pmd_repeat: int = -1
    debugger_use: int = 0
    n_mode: str = N_MODE_VISITS

    @staticmethod
    def from_mapping(raw: Mapping[str, Any]) -> "ScoringRules":
        allowed = {f.name for f in ScoringRules.__dataclass_fields__.values()}
        unknown = set(raw) - set(allowed)
        if unknown:
            raise ValueError(f"unknown scoring rule keys: {sorted(unknown)}")
        return replace(ScoringRules(), **dict(raw))


@dataclass(frozen=True)
class Trigger:
    """One score change, anchored at the event that sealed it."""

    kind: str
    event_id: int
    timestamp_ms: int
    delta: int
    detail: str = ""

    def to_mapping(self) -> dict:
        return {
            "kind": self.kind,
            "event_id": self.event_id,
            "timestamp_ms": self.timestamp_ms,
            "delta": self.delta,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ScoreSample:
    event_id: int
    timestamp_ms: int
    score: int
    distinct_files: int

    def to_mapping(self) -> dict:
        return {
            "event_id": self.event_id,
            "timestamp_ms": self.timestamp_ms,
            "score": self.score,
            "distinct_files": self.distinct_files,
        }


@dataclass
class ScoreTrajectory:
    """Running score with the distinct-files band it is read against."""

    samples: list[ScoreSample]
    triggers: list[Trigger]
    final_score: int
    distinct_files: int

    def to_mapping(self) -> dict:
        return {
            "samples": [s.to_mapping() for s in self.samples],
            "triggers": [t.to_mapping() for t in self.triggers],
            "final_score": self.final_score,
            "distinct_files": self.distinct_files,
        }


def _poles_overlap(a, b) -> bool:
    (file_a, span_a), (file_b, span_b) = a, b
    return file_a == file_b and span_a[0] <= span_b[1] and span_b[0] <= span_a[1]


def _same_oscillation_region(poles_a, poles_b) -> bool:
    straight = _poles_overlap(poles_a[0], poles_b[0]) and _poles_overlap(
        poles_a[1], poles_b[1]
    )
    crossed = _poles_overlap(poles_a[0], poles_b[1]) and _poles_overlap(
        poles_a[1], poles_b[0]
    )
    return straight or crossed


def derive_triggers(
    events: Sequence[Event],
    matches: Sequence[PatternMatch],
    phases: Sequence[PhaseSpan],
    history: Sequence[FileVisit],
    outcomes: Sequence[EditOutcome] = (),
    rules: ScoringRules = ScoringRules(),
) -> list[Trigger]:
    """Turn detections into ordered score triggers.

    Triggers sort by (timestamp, event id, kind), so permuting detector
    outputs never changes the result.
    """
    times = {e.id: e.timestamp_ms for e in events}
    triggers: list[Trigger] = []

    for visit in history:
        if (
            visit.recency_distance is not None
            and visit.cyclissity >= rules.high_cyclissity_threshold
        ):
            triggers.append(
                Trigger(
                    kind=HIGH_CYCLISSITY_REVISIT,
                    event_id=visit.event_id,
                    timestamp_ms=visit.timestamp_ms,
                    delta=rules.high_cyclissity_revisit,
                    detail=visit.path,
                )
            )

    edit_spans = [p for p in phases if p.label == EDIT_PHASE]
    first_edit_ms = edit_spans[0].start_ms if edit_spans else None

    restarts = 0
    pmd_cycles = 0
    oscillation_regions: list[tuple] = []
    for match in sorted(matches, key=lambda m: (m.start_event_id, m.kind)):
        at = match.end_event_id
        ts = times.get(at, 0)
        if match.kind == DOC_SWITCH:
            before_edit = first_edit_ms is None or ts < first_edit_ms
            delta = rules.doc_switch_before_first_edit if before_edit else 0
            triggers.append(Trigger(DOC_SWITCH, at, ts, delta))
        elif match.kind == VALIDATION_LAUNCH:
            triggers.append(Trigger(VALIDATION_LAUNCH, at, ts, rules.validation_launch))
        elif match.kind == RESTART:
            restarts += 1
            delta = rules.restart_first if restarts == 1 else rules.restart_repeat
            triggers.append(Trigger(RESTART, at, ts, delta))
        elif match.kind == POOR_MANS_DEBUGGER:
            pmd_cycles += 1
            delta = 0 if pmd_cycles <= rules.pmd_free_repetitions else rules.pmd_repeat
            triggers.append(Trigger(POOR_MANS_DEBUGGER, at, ts, delta))
        elif match.kind == OSCILLATE:
            poles = tuple(sorted(match.region or ()))
            count = 1
            found = False
            for i, (known, seen) in enumerate(oscillation_regions):
                if poles and _same_oscillation_region(known, poles):
                    count = seen + 1
                    oscillation_regions[i] = (known, count)
                    found = True
                    break
            if poles and not found:
                oscillation_regions.append((poles, 1))
            delta = (
                0 if count <= rules.oscillate_free_repetitions else rules.oscillate_repeat
            )
            triggers.append(Trigger(OSCILLATE, at, ts, delta))
        elif match.kind == DEBUGGER_USE:
            triggers.append(Trigger(DEBUGGER_USE, at, ts, rules.debugger_use))

    for outcome in outcomes:
        triggers.append(
            Trigger(
                kind=SURVIVING_EDIT if outcome.surviving else REVERTED_EDIT,
                event_id=outcome.last_end_event_id,
                timestamp_ms=outcome.last_end_ms,
                delta=rules.surviving_edit if outcome.surviving else rules.reverted_edit,
                detail=f"{outcome.file}:{outcome.origin.anchor}.{outcome.origin.pocket}",
            )
        )

    triggers.sort(key=lambda t: (t.timestamp_ms, t.event_id, t.kind, t.detail))
    return triggers


def run_state_machine(
    events: Sequence[Event],
    matches: Sequence[PatternMatch],
    phases: Sequence[PhaseSpan],
    history: Sequence[FileVisit],
    outcomes: Sequence[EditOutcome] = (),
    rules: ScoringRules = ScoringRules(),
) -> ScoreTrajectory:
    """Accumulate triggers into a score trajectory.

    The trajectory samples whenever the score or the distinct-file count
    changes, plus the stream endpoints; the final score equals the sum of
    all trigger deltas.
    """
    triggers = derive_triggers(events, matches, phases, history, outcomes, rules)
    return accumulate(events, triggers, history)


def accumulate(
    events: Sequence[Event],
    triggers: Sequence[Trigger],
    history: Sequence[FileVisit],
) -> ScoreTrajectory:
    """Fold an already-derived trigger list into a trajectory."""
    first_seen: dict[str, int] = {}
    distinct_at: list[tuple[int, int, int]] = []
    for visit in history:
        if visit.path not in first_seen:
            first_seen[visit.path] = visit.event_id
            distinct_at.append((visit.timestamp_ms, visit.event_id, len(first_seen)))

    changes: dict[tuple[int, int], dict] = {}

    def slot(ts: int, event_id: int) -> dict:
        return changes.setdefault((ts, event_id), {"delta": 0, "distinct": None})

    for trigger in triggers:
        slot(trigger.timestamp_ms, trigger.event_id)["delta"] += trigger.delta
    for ts, event_id, count in distinct_at:
        slot(ts, event_id)["distinct"] = count

    if events:
        slot(events[0].timestamp_ms, events[0].id)
        slot(events[-1].timestamp_ms, events[-1].id)

    samples: list[ScoreSample] = []
    score = 0
    distinct = 0
    for (ts, event_id), change in sorted(changes.items()):
        score += change["delta"]
        if change["distinct"] is not None:
            distinct = max(distinct, change["distinct"])
        samples.append(
            ScoreSample(
                event_id=event_id, timestamp_ms=ts, score=score, distinct_files=distinct
            )
        )
    # The closing sample carries the final state even when changes landed
    # on earlier events only.
    if samples and events and samples[-1].event_id != events[-1].id:
        samples.append(
            ScoreSample(
                event_id=events[-1].id,
                timestamp_ms=events[-1].timestamp_ms,
                score=score,
                distinct_files=distinct,
            )
        )
    return ScoreTrajectory(
        samples=samples,
        triggers=list(triggers),
        final_score=score,
        distinct_files=distinct,
    )


@dataclass
class RecordingSummary:
    """Headline numbers of one analyzed recording."""

    recording_id: str
    duration_ms: int
    event_count: int
    session_count: int
    distinct_files: int
    edit_group_count: int
    surviving_edit_count: int
    reverted_edit_count: int
    pattern_counts: dict[str, int]
    phase_durations_ms: dict[str, int]
    final_score: int
    mean_cyclissity: float
    uses_debugger: bool

    def to_mapping(self) -> dict:
        return {
            "recording_id": self.recording_id,
            "duration_ms": self.duration_ms,
            "event_count": self.event_count,
            "session_count": self.session_count,
            "distinct_files": self.distinct_files,
            "edit_group_count": self.edit_group_count,
            "surviving_edit_count": self.surviving_edit_count,
            "reverted_edit_count": self.reverted_edit_count,
            "pattern_counts": dict(self.pattern_counts),
            "phase_durations_ms": dict(self.phase_durations_ms),
            "final_score": self.final_score,
            "mean_cyclissity": self.mean_cyclissity,
            "uses_debugger": self.uses_debugger,
        }


def summarize(
    recording_id: str,
    events: Sequence[Event],
    session_count: int,
    matches: Sequence[PatternMatch],
    phases: Sequence[PhaseSpan],
    history: Sequence[FileVisit],
    outcomes: Sequence[EditOutcome],
    edit_group_count: int,
    trajectory: ScoreTrajectory,
) -> RecordingSummary:
    pattern_counts = {kind: 0 for kind in PATTERN_KINDS}
    for match in matches:
        pattern_counts[match.kind] += 1
    phase_durations = {label: 0 for label in PHASE_LABELS}
    for span in phases:
        phase_durations[span.label] += span.end_ms - span.start_ms
    surviving = sum(1 for o in outcomes if o.surviving)
    mean_cyc = (
        sum(v.cyclissity for v in history) / len(history) if history else 0.0
    )
    return RecordingSummary(
        recording_id=recording_id,
        duration_ms=events[-1].timestamp_ms - events[0].timestamp_ms if events else 0,
        event_count=len(events),
        session_count=session_count,
        distinct_files=len({v.path for v in history}),
        edit_group_count=edit_group_count,
        surviving_edit_count=surviving,
        reverted_edit_count=len(outcomes) - surviving,
        pattern_counts=pattern_counts,
        phase_durations_ms=phase_durations,
        final_score=trajectory.final_score,
        mean_cyclissity=mean_cyc,
        uses_debugger=pattern_counts[DEBUGGER_USE] > 0,
    )


# Ranking directions: True ranks high values first.
COMPARE_METRICS = {
    "final_score": True,
    "distinct_files": True,
    "surviving_edit_count": True,
    "mean_cyclissity": True,
    "edit_group_count": True,
    "duration_ms": False,
    "session_count": False,
}


def compare(
    summaries: Sequence[RecordingSummary],
    trajectories: Mapping[str, ScoreTrajectory] | None = None,
    manifests: Mapping[str, Mapping[str, int]] | None = None,
) -> dict:
    """Rank recordings per metric, with aligned trajectories when possible.

    Args:
        summaries: At least two recording summaries.
        trajectories: Score trajectories by recording id, for the aligned
            export.
        manifests: Path-to-line-count manifests by recording id; alignment
            is only emitted when all manifests agree.

    Returns:
        JSON-ready comparison report.
    """
    if len(summaries) < 2:
        raise ValueError("compare needs at least two summaries")
    rankings = {}
    for metric, high_first in COMPARE_METRICS.items():
        values = [(s.recording_id, getattr(s, metric)) for s in summaries]
        values.sort(key=lambda pair: (-pair[1] if high_first else pair[1], pair[0]))
        rankings[metric] = [
            {"recording_id": rid, "value": value, "rank": i + 1}
            for i, (rid, value) in enumerate(values)
        ]

    warnings: list[str] = []
    aligned = None
    if manifests is not None:
        manifest_list = [dict(manifests[s.recording_id]) for s in summaries]
        if all(m == manifest_list[0] for m in manifest_list[1:]):
            aligned = {
                "shared_manifest": True,
                "trajectories": {
                    s.recording_id: trajectories[s.recording_id].to_mapping()
                    for s in summaries
                }
                if trajectories is not None
                else {},
            }
        else:
            warnings.append("manifests differ; aligned export skipped")

    return {
        "recordings": [s.recording_id for s in summaries],
        "summaries": {s.recording_id: s.to_mapping() for s in summaries},
        "rankings": rankings,
        "aligned": aligned,
        "warnings": warnings,
    }
