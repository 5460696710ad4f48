#!/usr/bin/env python3
"""Collapse keystroke noise into edit groups and judge what survived.

A recording stores every single keystroke. Consecutive changes to the same
line merge into one group with a before/after rewrite, silence above two
seconds closes the group, and a deletion always opens a fresh group so
undo-and-retype behaviour stays visible. An edited line whose final text
differs from what the first group replaced counts as a surviving edit;
otherwise the work was reverted.
"""

from tracelens import Event, FileEntry, aggregate_edits, edit_outcomes


def keystroke(event_id, ts, line, col, inserted="", deleted=""):
    payload = {
        "file": "src/Main.java",
        "line": line,
        "col": col,
        "inserted": inserted,
        "deleted": deleted,
    }
    return Event(id=event_id, timestamp_ms=ts, type="CodeChangeEvent", payload=payload)


files = [FileEntry("src/Main.java", 40)]

# Typing "int x = 5;" on line 3, a pause, then retyping the value: the
# deletion of "5" escapes into a second group.
events = [
    keystroke(1, 0, 3, 0, inserted="int x = "),
    keystroke(2, 400, 3, 8, inserted="5;"),
    keystroke(3, 5_000, 3, 8, deleted="5"),
    keystroke(4, 5_300, 3, 8, inserted="7"),
]

groups = aggregate_edits(events, files)
print(f"{len(events)} keystrokes became {len(groups)} groups:")
for group in groups:
    span = f"events {group.start_event_id}..{group.end_event_id}"
    print(f"  line {group.origin.anchor} ({span}): "
          f"{group.before!r} -> {group.after!r}"
          + ("  [starts with a deletion]" if group.contains_deletion else ""))

outcomes = edit_outcomes(events, files)
for outcome in outcomes:
    verdict = "survived" if outcome.surviving else "reverted"
    print(f"line {outcome.origin.anchor}: {verdict}, final text {outcome.final_text!r}")

# The same machinery applied to an undo: the final text equals what stood
# before the first group, so the line counts as reverted.
undo = events + [
    keystroke(5, 9_000, 3, 0, deleted="int x = 7;"),
]
for outcome in edit_outcomes(undo, files):
    verdict = "survived" if outcome.surviving else "reverted"
    print(f"after the undo, line {outcome.origin.anchor}: {verdict}")
