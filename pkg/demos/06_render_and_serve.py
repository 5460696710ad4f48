#!/usr/bin/env python3
"""Render deterministic SVG charts and query the HTTP API in-process.

The track chart puts the global line axis horizontally with time flowing
down; every glyph carries its event id, so charts stay linkable to the
data. The score chart steps through the trajectory against the
distinct-files band. Both renderings are pure functions of their input:
same recording, same bytes.

The HTTP service is read-only and serves the same canonical JSON the
library produces in-process, byte for byte.
"""

import tempfile
import warnings
from pathlib import Path

warnings.filterwarnings(
    "ignore", message="Using `httpx` with `starlette.testclient` is deprecated"
)
from fastapi.testclient import TestClient  # noqa: E402

from tracelens import analyze, generate_synthetic, save_recording, simplify
from tracelens.api import create_app
from tracelens.svg import render_score_svg, render_track_svg

workdir = Path(tempfile.mkdtemp(prefix="tracelens-demo-"))

recording, _ = generate_synthetic({"archetype": "investigate-edit-validate"}, seed=8)
report, track = analyze(recording)

track_svg = render_track_svg(
    simplify(track, 1), patterns=report.patterns, phases=report.phases
)
score_svg = render_score_svg(report.trajectory)
(workdir / "track.svg").write_text(track_svg)
(workdir / "score.svg").write_text(score_svg)
print(f"wrote {workdir}/track.svg ({len(track_svg)} bytes)")
print(f"wrote {workdir}/score.svg ({len(score_svg)} bytes)")
assert track_svg == render_track_svg(
    simplify(track, 1), patterns=report.patterns, phases=report.phases
)

# Serve the directory. In production this would be
#   tracelens serve --dir <dir> --port 8000
# but the app object works just as well under a test client.
save_recording(recording, workdir / "demo.ndjson")
client = TestClient(create_app(workdir))

listing = client.get("/recordings").json()
print(f"\nGET /recordings -> {[s['recording_id'] for s in listing]}")

rid = recording.recording_id
coarse = client.get(f"/recordings/{rid}/track?lod=4").json()
print(f"GET /recordings/{rid}/track?lod=4 -> {len(coarse['points'])} points")

served = client.get(f"/recordings/{rid}").content
assert served == report.serialize().encode("utf-8")
print(f"GET /recordings/{rid} matches the in-process report byte-for-byte")

phases = client.get(f"/recordings/{rid}/phases").json()
print("phases:", [p["label"] for p in phases])
