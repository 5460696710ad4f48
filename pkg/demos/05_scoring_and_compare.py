#!/usr/bin/env python3
"""Score task-solving behaviour and rank two recordings against each other.

Every file focus gets a revisitation-recency value between 0 (first visit)
and 1 (immediate return). Detected behaviours turn into score triggers:
returning to a recently seen file, consulting the instructions before the
first edit and verifying after it all pay out, while reverted edits and
compulsive repetitions cost. The running total is read against the number
of distinct files visited so far.
"""

from tracelens import analyze, compare, generate_synthetic

spec = {
    "compose": [
        {"archetype": "investigate-edit-validate"},
        {"archetype": "oscillate"},
    ]
}
recording, _ = generate_synthetic(spec, seed=21)
report, _ = analyze(recording)

print("visit history (first ten):")
for visit in report.history[:10]:
    print(f"  #{visit.visit_index:<3} {visit.path:<22} cyclissity {visit.cyclissity:.2f}")

trajectory = report.trajectory
print(f"\n{len(trajectory.triggers)} triggers:")
for trigger in trajectory.triggers:
    sign = f"{trigger.delta:+d}" if trigger.delta else " 0"
    print(f"  [{sign}] {trigger.kind:<22} at event {trigger.event_id} {trigger.detail}")
print(f"final score {trajectory.final_score}, "
      f"{trajectory.distinct_files} distinct files visited")

assert trajectory.final_score == sum(t.delta for t in trajectory.triggers)

# Same behaviour, different seeds: the rankings break ties by recording id,
# and trajectories align because the manifests agree.
summaries, trajectories, manifests = [], {}, {}
for seed in (21, 22):
    recording, _ = generate_synthetic(spec, seed=seed)
    report, _ = analyze(recording)
    summaries.append(report.summary)
    trajectories[recording.recording_id] = report.trajectory
    manifests[recording.recording_id] = recording.line_counts()

result = compare(summaries, trajectories, manifests)
print("\nrankings:")
for metric in ("final_score", "mean_cyclissity", "duration_ms"):
    row = ", ".join(f"{r['recording_id']}={r['value']}" for r in result["rankings"][metric])
    print(f"  {metric}: {row}")
print("shared manifest:", result["aligned"]["shared_manifest"])
