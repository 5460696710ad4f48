#!/usr/bin/env python3
"""Plot a recording on the global line axis and zoom out step by step.

Every file of the manifest occupies a contiguous slice of one shared
1-based line axis, so an event anywhere in the project is a single number.
Zooming out runs a shape-preserving polyline simplification: each level
doubles the tolerated vertical deviation, and the retained point sets nest,
so a glyph visible when zoomed out never disappears when zooming in.
"""

from tracelens import (
    FilterSpec,
    GlobalIndex,
    build_track,
    generate_synthetic,
    level_point_counts,
    simplify,
)

recording, _ = generate_synthetic({"archetype": "investigate-edit-validate"}, seed=4)

index = GlobalIndex(recording.files, rule="alphabetical")
print("file spans on the global axis:")
for path in index.ordered_paths:
    first = index.to_global(path, 1)
    last = first + index.line_counts[path] - 1
    print(f"  {first:>5}..{last:<5} {path}")

track = build_track(recording, index)
print(f"\nlevel-0 track: {len(track.points)} points")
first = track.points[0]
print(f"first point: event {first.event_id} ({first.type}) "
      f"at global line {first.global_pos}")

counts = level_point_counts(track, up_to=10)
print("\npoints per zoom level:", counts)
for level in (2, 5, 8):
    thinned = simplify(track, level)
    kept = {p.event_id for p in thinned.points}
    assert kept <= {p.event_id for p in track.points}
    print(f"  level {level}: {len(thinned.points)} points, tolerance {2**level} lines")

# Filtering keeps only what a question needs; positions still come from the
# full edit history, so a filtered track never drifts.
nav_only = build_track(recording, index, FilterSpec.parse("Navigation"))
print(f"\nnavigation-only track: {len(nav_only.points)} points")
windowed = build_track(recording, index, FilterSpec.parse("0..120000"))
print(f"first two minutes: {len(windowed.points)} points")
