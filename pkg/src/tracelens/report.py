"""Whole-recording analysis pipeline and its serializable report.

analyze() runs every stage in a fixed order: sessions and idles, the global
axis and track, keystroke aggregation, phase segmentation, all detectors,
the visit history and the behaviour score. The report is plain data, hashes
of the inputs included, and serializes canonically so the same recording
under the same configuration always produces identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Config
from .events import canonical_json
from .patterns import (
    PatternMatch,
    PhaseSpan,
    detect_debugger_use,
    detect_doc_switch,
    detect_oscillate,
    detect_poor_mans_debugger,
    detect_restart,
    detect_validation_launches,
    segment_phases,
)
from .recording import IdleSpan, Recording, Session, classify_idles, split_sessions
from .scoring import (
    FileVisit,
    RecordingSummary,
    ScoreTrajectory,
    file_visit_history,
    run_state_machine,
    summarize,
)
from .spatial import GlobalIndex
from .track import (
    AggregatedEdit,
    EditOutcome,
    FilterSpec,
    Track,
    aggregate_edits,
    build_track,
    edit_outcomes,
    level_point_counts,
)


@dataclass
class AnalysisReport:
    """Everything the explorers consume, minus the raw track points."""

    recording_id: str
    config_digest: str
    summary: RecordingSummary
    sessions: list[Session]
    idles: list[IdleSpan]
    edits: list[AggregatedEdit]
    outcomes: list[EditOutcome]
    phases: list[PhaseSpan]
    patterns: list[PatternMatch]
    history: list[FileVisit]
    trajectory: ScoreTrajectory
    lod_point_counts: list[int]

    def to_mapping(self) -> dict:
        return {
            "recording_id": self.recording_id,
            "config_digest": self.config_digest,
            "summary": self.summary.to_mapping(),
            "sessions": [
                {
                    "index": s.index,
                    "start_ms": s.start_ms,
                    "end_ms": s.end_ms,
                    "event_count": len(s.events),
                }
                for s in self.sessions
            ],
            "idles": [
                {
                    "kind": i.kind,
                    "start_event_id": i.start_event_id,
                    "end_event_id": i.end_event_id,
                    "start_ms": i.start_ms,
                    "end_ms": i.end_ms,
                }
                for i in self.idles
            ],
            "edits": [
                {
                    "file": e.file,
                    "anchor": e.origin.anchor,
                    "pocket": e.origin.pocket,
                    "start_event_id": e.start_event_id,
                    "end_event_id": e.end_event_id,
                    "start_ms": e.start_ms,
                    "end_ms": e.end_ms,
                    "before": e.before,
                    "after": e.after,
                    "contains_deletion": e.contains_deletion,
                }
                for e in self.edits
            ],
            "outcomes": [
                {
                    "file": o.file,
                    "anchor": o.origin.anchor,
                    "pocket": o.origin.pocket,
                    "surviving": o.surviving,
                    "first_start_ms": o.first_start_ms,
                    "last_end_ms": o.last_end_ms,
                    "last_end_event_id": o.last_end_event_id,
                    "final_text": o.final_text,
                }
                for o in self.outcomes
            ],
            "phases": [p.to_mapping() for p in self.phases],
            "patterns": [m.to_mapping() for m in self.patterns],
            "history": [v.to_mapping() for v in self.history],
            "trajectory": self.trajectory.to_mapping(),
            "lod_point_counts": list(self.lod_point_counts),
        }

    def serialize(self) -> str:
        return canonical_json(self.to_mapping())


def _session_slice(items, session: Session):
    first, last = session.events[0].id, session.events[-1].id
    return [item for item in items if first <= item.start_event_id <= last]


def analyze(
    recording: Recording,
    config: Config = Config(),
    filter_spec: FilterSpec | None = None,
) -> tuple[AnalysisReport, Track]:
    """Run the full pipeline over one recording.

    Args:
        recording: A validated recording.
        config: Effective configuration.
        filter_spec: Restricts which events appear on the returned track;
            the report itself is always computed over the full stream.

    Returns:
        (report, track): the serializable report and the level-0 track it
        was computed from.
    """
    events = recording.events
    files = recording.files
    known = set(recording.manifest_paths())

    sessions = split_sessions(recording, config.session_gap_ms)
    idles = classify_idles(events, config.idle_floor_ms, config.session_gap_ms)

    index = GlobalIndex(files, config.ordering_rule)
    track = build_track(recording, index, filter_spec)

    edits = aggregate_edits(events, files, config.aggregation_gap_ms)
    outcomes = edit_outcomes(events, files, config.aggregation_gap_ms)
    phases = segment_phases(events, config.detectors.phase, files)
    history = file_visit_history(events, known, config.scoring.n_mode)

    patterns: list[PatternMatch] = []
    patterns.extend(detect_oscillate(track, config.detectors.oscillate))
    patterns.extend(
        detect_doc_switch(events, config.detectors.doc_files, known)
    )
    for session in sessions:
        patterns.extend(detect_debugger_use(session.events))
        patterns.extend(
            detect_poor_mans_debugger(
                session.events,
                files,
                config.detectors.pmd_patterns,
                edits=_session_slice(edits, session),
            )
        )
    patterns.extend(
        detect_restart(
            events, phases, history, config.detectors.restart, config.detectors.doc_files
        )
    )
    patterns.extend(detect_validation_launches(events, phases))
    patterns.sort(key=lambda m: (m.start_event_id, m.end_event_id, m.kind))

    trajectory = run_state_machine(
        events, patterns, phases, history, outcomes, config.scoring
    )
    summary = summarize(
        recording.recording_id,
        events,
        len(sessions),
        patterns,
        phases,
        history,
        outcomes,
        len(edits),
        trajectory,
    )
    report = AnalysisReport(
        recording_id=recording.recording_id,
        config_digest=config.digest(),
        summary=summary,
        sessions=sessions,
        idles=idles,
        edits=edits,
        outcomes=outcomes,
        phases=phases,
        patterns=patterns,
        history=history,
        trajectory=trajectory,
        lod_point_counts=level_point_counts(track),
    )
    return report, track


class ReportCache:
    """Reports keyed by recording id and configuration digest."""

    def __init__(self):
        self._reports: dict[tuple[str, str], tuple[AnalysisReport, Track]] = {}

    def get_or_build(
        self, recording: Recording, config: Config
    ) -> tuple[AnalysisReport, Track]:
        key = (recording.recording_id, config.digest())
        if key not in self._reports:
            self._reports[key] = analyze(recording, config)
        return self._reports[key]

    def invalidate(self, recording_id: str) -> None:
        for key in [k for k in self._reports if k[0] == recording_id]:
            del self._reports[key]
