#!/usr/bin/env python3
"""Generate a recording, save and reload it, then look at its sessions.

The wire format is a one-line JSON header (schema, recording id, file
manifest) followed by one canonical JSON event per line. Saving the same
recording twice always produces the same bytes.
"""

import tempfile
from pathlib import Path

from tracelens import (
    classify_idles,
    generate_synthetic,
    load_recording,
    save_recording,
    split_sessions,
)

workdir = Path(tempfile.mkdtemp(prefix="tracelens-demo-"))

# Two work bursts separated by a quiet gap of roughly 400 seconds, which is
# past the five-minute session boundary.
recording, _ = generate_synthetic(
    {"archetype": "idle-gaps", "gap_seconds": 400, "segments": 2}, seed=11
)
path = workdir / "idle-gaps.ndjson"
save_recording(recording, path)
print(f"wrote {path} ({path.stat().st_size} bytes)")

reloaded = load_recording(path)
assert reloaded == recording
print(f"recording {reloaded.recording_id!r}: {len(reloaded.events)} events, "
      f"{reloaded.duration_ms / 1000:.0f}s of activity")

sessions = split_sessions(reloaded)
print(f"\n{len(sessions)} session(s):")
for session in sessions:
    seconds = session.duration_ms / 1000
    print(f"  session {session.index}: {len(session.events)} events over {seconds:.0f}s")

# Idle spans inside a session: short pauses of 15s to 5min are reading or
# thinking time; anything longer would have split the session instead.
idles = classify_idles(reloaded.events)
print(f"\n{len(idles)} idle span(s):")
for idle in idles:
    print(f"  {idle.kind}: {(idle.end_ms - idle.start_ms) / 1000:.0f}s "
          f"between events {idle.start_event_id} and {idle.end_event_id}")
