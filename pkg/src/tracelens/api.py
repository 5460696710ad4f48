"""Read-only HTTP JSON API over a directory of recordings.

All recordings are loaded once at startup and never mutated; analysis
results come from an in-memory report cache. Payload responses are emitted
through the same canonical JSON serializer the CLI uses, so a given
resource always yields identical bytes in either channel. Errors carry
{"code": <http status>, "message": <text>}.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse

from .config import Config
from .events import canonical_json
from .recording import Recording, load_recording
from .report import ReportCache
from .scoring import compare
from .spatial import GlobalIndex
from .track import (
    MAX_LOD,
    FilterSpec,
    FilterSyntaxError,
    build_track,
    simplify,
    track_to_mapping,
)

RECORDING_GLOB = "*.ndjson"


def _canonical(doc) -> Response:
    return Response(content=canonical_json(doc), media_type="application/json")


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"code": status, "message": message}
    )


def load_directory(directory: Path) -> dict[str, Recording]:
    """Load every recording file in a directory, keyed by recording id."""
    recordings: dict[str, Recording] = {}
    for path in sorted(directory.glob(RECORDING_GLOB)):
        recording = load_recording(path)
        recordings[recording.recording_id] = recording
    return recordings


def create_app(directory: Path, config: Config = Config()) -> FastAPI:
    recordings = load_directory(Path(directory))
    cache = ReportCache()
    app = FastAPI(title="tracelens", docs_url=None, redoc_url=None)

    def report_for(recording: Recording):
        return cache.get_or_build(recording, config)

    def lookup(recording_id: str) -> Recording | None:
        return recordings.get(recording_id)

    @app.get("/recordings")
    def list_recordings():
        report_docs = []
        for recording_id in sorted(recordings):
            report, _ = report_for(recordings[recording_id])
            report_docs.append(report.summary.to_mapping())
        return _canonical(report_docs)

    @app.get("/recordings/{recording_id}")
    def get_report(recording_id: str):
        recording = lookup(recording_id)
        if recording is None:
            return _error(404, f"unknown recording {recording_id!r}")
        report, _ = report_for(recording)
        return _canonical(report.to_mapping())

    @app.get("/recordings/{recording_id}/events")
    def get_events(
        recording_id: str,
        offset: str = "0",
        limit: str | None = None,
        filter: str | None = None,
    ):
        recording = lookup(recording_id)
        if recording is None:
            return _error(404, f"unknown recording {recording_id!r}")
        try:
            start = int(offset)
            count = int(limit) if limit is not None else None
        except ValueError:
            return _error(400, "offset and limit must be integers")
        if start < 0 or (count is not None and count < 0):
            return _error(400, "offset and limit must be non-negative")
        events = recording.events
        if filter is not None:
            try:
                spec = FilterSpec.parse(filter)
            except FilterSyntaxError as exc:
                return _error(422, str(exc))
            events = [e for e in events if spec.admits(e)]
        stop = None if count is None else start + count
        return _canonical([e.to_mapping() for e in events[start:stop]])

    @app.get("/recordings/{recording_id}/track")
    def get_track(recording_id: str, lod: str = "0", filter: str | None = None):
        recording = lookup(recording_id)
        if recording is None:
            return _error(404, f"unknown recording {recording_id!r}")
        try:
            level = int(lod)
        except ValueError:
            return _error(400, "lod must be an integer")
        if not 0 <= level <= MAX_LOD:
            return _error(400, f"lod must be between 0 and {MAX_LOD}")
        spec = None
        if filter is not None:
            try:
                spec = FilterSpec.parse(filter)
            except FilterSyntaxError as exc:
                return _error(422, str(exc))
        index = GlobalIndex(recording.files, config.ordering_rule)
        track = build_track(recording, index, spec)
        return _canonical(track_to_mapping(simplify(track, level)))

    def report_field(recording_id: str, pick):
        recording = lookup(recording_id)
        if recording is None:
            return _error(404, f"unknown recording {recording_id!r}")
        report, _ = report_for(recording)
        return _canonical(pick(report))

    @app.get("/recordings/{recording_id}/phases")
    def get_phases(recording_id: str):
        return report_field(
            recording_id, lambda r: [p.to_mapping() for p in r.phases]
        )

    @app.get("/recordings/{recording_id}/patterns")
    def get_patterns(recording_id: str):
        return report_field(
            recording_id, lambda r: [m.to_mapping() for m in r.patterns]
        )

    @app.get("/recordings/{recording_id}/cyclissity")
    def get_cyclissity(recording_id: str):
        return report_field(
            recording_id, lambda r: [v.to_mapping() for v in r.history]
        )

    @app.get("/recordings/{recording_id}/trajectory")
    def get_trajectory(recording_id: str):
        return report_field(recording_id, lambda r: r.trajectory.to_mapping())

    @app.get("/compare")
    def get_compare(ids: str = ""):
        wanted = [part for part in ids.split(",") if part]
        if len(wanted) < 2:
            return _error(400, "ids must name at least two recordings")
        missing = [rid for rid in wanted if rid not in recordings]
        if missing:
            return _error(404, f"unknown recording {missing[0]!r}")
        summaries = []
        trajectories = {}
        manifests = {}
        for rid in wanted:
            recording = recordings[rid]
            report, _ = report_for(recording)
            summaries.append(report.summary)
            trajectories[rid] = report.trajectory
            manifests[rid] = recording.line_counts()
        return _canonical(compare(summaries, trajectories, manifests))

    return app
