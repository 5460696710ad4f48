"""Analytics toolkit for fine-grained IDE interaction recordings.

The library ingests NDJSON interaction recordings, reconstructs the
developer's viewing track over a concatenated global line axis, aggregates
keystrokes into edit groups, detects behaviour patterns and work phases,
and scores task-solving behaviour along a reproducible trajectory. All
serialized artifacts (reports, SVG charts, API payloads) are deterministic
byte-for-byte.

Typical use::

    from tracelens import analyze, load_recording

    recording = load_recording("session.ndjson")
    report, track = analyze(recording)
    print(report.summary.final_score)
"""

from .config import Config, load_config
from .events import (
    CATEGORIES,
    EVENT_TYPES,
    Event,
    EventContext,
    RecordingError,
    canonical_json,
    parse_event,
    serialize_event,
)
from .recording import (
    FileEntry,
    IdleSpan,
    Recording,
    Session,
    classify_idles,
    load_recording,
    save_recording,
    split_sessions,
)
from .report import AnalysisReport, ReportCache, analyze
from .scoring import (
    ScoreTrajectory,
    ScoringRules,
    compare,
    cyclissity,
    file_visit_history,
    run_state_machine,
)
from .spatial import GlobalIndex, LineMap, align_recordings
from .svg import render_score_svg, render_track_svg
from .synth import ARCHETYPES, GroundTruth, generate_synthetic
from .track import (
    FilterSpec,
    Track,
    aggregate_edits,
    build_track,
    edit_outcomes,
    level_point_counts,
    simplify,
)

__version__ = "0.1.0"

__all__ = [
    "ARCHETYPES",
    "AnalysisReport",
    "CATEGORIES",
    "Config",
    "EVENT_TYPES",
    "Event",
    "EventContext",
    "FileEntry",
    "FilterSpec",
    "GlobalIndex",
    "GroundTruth",
    "IdleSpan",
    "LineMap",
    "Recording",
    "RecordingError",
    "ReportCache",
    "ScoreTrajectory",
    "ScoringRules",
    "Session",
    "Track",
    "aggregate_edits",
    "align_recordings",
    "analyze",
    "build_track",
    "canonical_json",
    "classify_idles",
    "compare",
    "cyclissity",
    "edit_outcomes",
    "file_visit_history",
    "generate_synthetic",
    "level_point_counts",
    "load_config",
    "load_recording",
    "parse_event",
    "render_score_svg",
    "render_track_svg",
    "run_state_machine",
    "save_recording",
    "serialize_event",
    "simplify",
    "split_sessions",
]
