"""Detector behaviour on hand-built streams."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from conftest import StreamBuilder, entries, recording_of
from tracelens import patterns as pat
from tracelens.spatial import GlobalIndex
from tracelens.track import build_track


def track_of(files, events):
    return build_track(recording_of(files, events), GlobalIndex(files))


# ------------------------------------------------------------------ oscillate


def test_four_alternations_in_one_file_match_once():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    b.scroll("a.py", 15, 25, dt=10_000)
    b.scroll("a.py", 85, 95, dt=10_000)
    b.scroll("a.py", 20, 30, dt=10_000)
    b.scroll("a.py", 88, 98, dt=10_000)
    b.scroll("a.py", 18, 28, dt=10_000)
    matches = pat.detect_oscillate(track_of(files, b.events))
    assert len(matches) == 1
    match = matches[0]
    assert match.kind == pat.OSCILLATE
    assert match.start_event_id == 1
    assert match.end_event_id == 5
    assert len(match.evidence) == 5
    (file_a, span_a), (file_b, span_b) = match.region
    assert file_a == file_b == "a.py"
    assert span_a[0] <= 20 <= span_a[1]
    assert span_b[0] <= 90 <= span_b[1]


def test_three_alternations_are_enough():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    for first in (10, 120, 10, 120):
        b.scroll("a.py", first, first + 10, dt=10_000)
    assert len(pat.detect_oscillate(track_of(files, b.events))) == 1


def test_alternation_across_two_files():
    files = entries(("a.py", 100), ("b.py", 100))
    b = StreamBuilder()
    for path in ("a.py", "b.py", "a.py", "b.py", "a.py"):
        b.cursor(path, 10, dt=5_000)
    matches = pat.detect_oscillate(track_of(files, b.events))
    assert len(matches) == 1
    region_files = {file for file, _ in matches[0].region}
    assert region_files == {"a.py", "b.py"}


def test_monotone_read_through_never_alternates():
    files = entries(("a.py", 400),)
    b = StreamBuilder()
    for first in (10, 70, 130, 190, 250, 310):
        b.scroll("a.py", first, first + 10, dt=8_000)
    assert pat.detect_oscillate(track_of(files, b.events)) == []


def test_alternations_slower_than_the_window_do_not_match():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    for first in (10, 120, 10, 120):
        b.scroll("a.py", first, first + 10, dt=200_000)
    assert pat.detect_oscillate(track_of(files, b.events)) == []


def test_long_alternation_is_one_maximal_match():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    for i in range(10):
        first = 10 if i % 2 == 0 else 120
        b.scroll("a.py", first, first + 10, dt=10_000)
    matches = pat.detect_oscillate(track_of(files, b.events))
    assert len(matches) == 1
    assert len(matches[0].evidence) == 10


def test_dwelling_inside_one_region_merges_into_one_segment():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    b.scroll("a.py", 15, 25, dt=1_000)
    b.scroll("a.py", 20, 30, dt=1_000)
    b.scroll("a.py", 25, 35, dt=1_000)
    assert pat.detect_oscillate(track_of(files, b.events)) == []


# ----------------------------------------------------------------- doc switch


def test_doc_visit_between_code_focuses_matches():
    b = StreamBuilder()
    a1 = b.open_file("a.py", dt=1_000)
    doc = b.open_file("instructions.txt", dt=1_000)
    a2 = b.open_file("a.py", dt=1_000)
    matches = pat.detect_doc_switch(b.events)
    assert len(matches) == 1
    match = matches[0]
    assert (match.start_event_id, match.end_event_id) == (doc.id, doc.id)
    assert match.evidence == (a1.id, doc.id, a2.id)


def test_consecutive_doc_files_form_one_excursion():
    b = StreamBuilder()
    b.open_file("a.py", dt=1_000)
    d1 = b.open_file("instructions.txt", dt=1_000)
    d2 = b.open_file("notes.md", dt=1_000)
    b.open_file("b.py", dt=1_000)
    matches = pat.detect_doc_switch(b.events)
    assert len(matches) == 1
    assert (matches[0].start_event_id, matches[0].end_event_id) == (d1.id, d2.id)
    assert len(matches[0].evidence) == 4


def test_doc_focus_without_return_does_not_match():
    b = StreamBuilder()
    b.open_file("a.py", dt=1_000)
    b.open_file("instructions.txt", dt=1_000)
    assert pat.detect_doc_switch(b.events) == []


def test_session_starting_in_documentation_does_not_match():
    b = StreamBuilder()
    b.open_file("instructions.txt", dt=1_000)
    b.open_file("a.py", dt=1_000)
    assert pat.detect_doc_switch(b.events) == []


def test_custom_doc_globs():
    b = StreamBuilder()
    b.open_file("a.py", dt=1_000)
    b.open_file("docs/guide.adoc", dt=1_000)
    b.open_file("a.py", dt=1_000)
    assert pat.detect_doc_switch(b.events) == []
    assert len(pat.detect_doc_switch(b.events, doc_files=("docs/*",))) == 1


# --------------------------------------------------------------- debugger use


def test_breakpoint_debug_launch_hit_cycle():
    b = StreamBuilder()
    s = b.debug("breakpoint_set", "a.py", 10, dt=1_000)
    launch = b.launch(mode="debug", dt=1_000)
    h = b.debug("breakpoint_hit", "a.py", 10, dt=1_000)
    matches = pat.detect_debugger_use(b.events)
    assert len(matches) == 1
    assert matches[0].evidence == (s.id, launch.id, h.id)


def test_plain_run_does_not_count_as_debugging():
    b = StreamBuilder()
    b.debug("breakpoint_set", "a.py", 10, dt=1_000)
    b.launch(mode="run", dt=1_000)
    b.debug("breakpoint_hit", "a.py", 10, dt=1_000)
    assert pat.detect_debugger_use(b.events) == []


def test_hit_without_launch_does_not_count():
    b = StreamBuilder()
    b.debug("breakpoint_set", "a.py", 10, dt=1_000)
    b.debug("breakpoint_hit", "a.py", 10, dt=1_000)
    assert pat.detect_debugger_use(b.events) == []


def test_two_full_cycles_give_two_matches():
    b = StreamBuilder()
    for _ in range(2):
        b.debug("breakpoint_set", "a.py", 10, dt=1_000)
        b.launch(mode="debug", dt=1_000)
        b.debug("breakpoint_hit", "a.py", 10, dt=1_000)
    assert len(pat.detect_debugger_use(b.events)) == 2


# ------------------------------------------------------- poor man's debugger


PRINT = 'System.out.println("dbg");'


def test_print_insertion_followed_by_launch():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    edit = b.edit("a.py", 3, 0, inserted=PRINT, dt=1_000)
    launch = b.launch(dt=5_000)
    matches = pat.detect_poor_mans_debugger(b.events, files)
    assert len(matches) == 1
    match = matches[0]
    assert match.end_event_id == launch.id
    assert match.evidence == (edit.id, launch.id)
    assert match.flags == ()


def test_removing_the_print_later_sets_the_flag():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    b.edit("a.py", 3, 0, inserted=PRINT, dt=1_000)
    b.launch(dt=5_000)
    b.edit("a.py", 3, 0, deleted=PRINT, dt=10_000)
    matches = pat.detect_poor_mans_debugger(b.events, files)
    assert len(matches) == 1
    assert matches[0].flags == ("removed_later",)


def test_edits_sharing_a_launch_merge():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    b.edit("a.py", 3, 0, inserted=PRINT, dt=1_000)
    b.edit("a.py", 5, 0, inserted='print("x")', dt=3_000)
    b.launch(dt=5_000)
    assert len(pat.detect_poor_mans_debugger(b.events, files)) == 1


def test_two_cycles_give_two_matches():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    b.edit("a.py", 3, 0, inserted=PRINT, dt=1_000)
    b.launch(dt=5_000)
    b.edit("a.py", 5, 0, inserted='console.log("y")', dt=10_000)
    b.launch(dt=5_000)
    assert len(pat.detect_poor_mans_debugger(b.events, files)) == 2


def test_print_without_launch_or_launch_before_edit_does_not_match():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    b.launch(dt=1_000)
    b.edit("a.py", 3, 0, inserted=PRINT, dt=1_000)
    assert pat.detect_poor_mans_debugger(b.events, files) == []


def test_ordinary_edits_do_not_match():
    files = entries(("a.py", 10),)
    b = StreamBuilder()
    b.edit("a.py", 3, 0, inserted="int x = 1;", dt=1_000)
    b.launch(dt=5_000)
    assert pat.detect_poor_mans_debugger(b.events, files) == []


# --------------------------------------------------------------------- phases


def build_three_phase_stream():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    for t in range(0, 180_001, 5_000):
        b.at(t).cursor("a.py", 1 + t // 5_000)
    for i in range(33):
        t = 310_000 + i * 5_000
        if i % 2 == 0:
            b.at(t).edit("a.py", 1 + i, 0, inserted="x")
        else:
            b.at(t).cursor("a.py", 1 + i)
    for i in range(21):
        t = 600_000 + i * 5_000
        if i % 3 == 2:
            b.at(t).launch()
        else:
            b.at(t).cursor("a.py", 50 + i)
    return files, b.events


def test_quiet_gaps_cut_the_timeline_into_three_phases():
    files, events = build_three_phase_stream()
    spans = pat.segment_phases(events, files=files)
    assert [s.label for s in spans] == [
        pat.INVESTIGATION,
        pat.EDIT_PHASE,
        pat.VALIDATION,
    ]
    investigation, edit, validation = spans
    assert (investigation.start_ms, investigation.end_ms) == (0, 180_000)
    assert (edit.start_ms, edit.end_ms) == (310_000, 470_000)
    assert (validation.start_ms, validation.end_ms) == (600_000, 700_000)


def test_validation_needs_launches_after_the_last_surviving_edit():
    files = entries(("a.py", 200),)
    b = StreamBuilder()
    for i in range(33):
        t = i * 5_000
        if i % 2 == 0:
            b.at(t).edit("a.py", 1 + i, 0, inserted="x")
        else:
            b.at(t).cursor("a.py", 1 + i)
    for i in range(21):
        b.at(300_000 + i * 5_000).cursor("a.py", 50 + i)
    spans = pat.segment_phases(b.events, files=files)
    assert [s.label for s in spans] == [pat.EDIT_PHASE, pat.INVESTIGATION]


def test_event_free_steps_break_phase_spans():
    b = StreamBuilder()
    for t in range(0, 90_001, 5_000):
        b.at(t).cursor("a.py", 1)
    for t in range(240_000, 330_001, 5_000):
        b.at(t).cursor("a.py", 2)
    spans = pat.segment_phases(b.events)
    assert [s.label for s in spans] == [pat.INVESTIGATION, pat.INVESTIGATION]


def test_short_islands_are_dropped():
    b = StreamBuilder()
    for t in range(0, 25_001, 5_000):
        b.at(t).cursor("a.py", 1)
    assert pat.segment_phases(b.events) == []


def test_intermediate_density_stays_unlabeled():
    # One edit in ten events within every window: between the two densities.
    b = StreamBuilder()
    for i in range(40):
        t = i * 3_000
        if i % 10 == 0:
            b.at(t).edit("a.py", 1, 0, inserted="x")
        else:
            b.at(t).cursor("a.py", 1)
    spans = pat.segment_phases(b.events)
    assert spans == []


# -------------------------------------------------------------------- restart


@dataclass
class V:
    event_id: int
    timestamp_ms: int
    path: str
    cyclissity: float


EDIT_SPAN = pat.PhaseSpan(pat.EDIT_PHASE, 0, 0, 1_000, 5_000)


def test_doc_then_broad_unfamiliar_scan_is_a_restart():
    history = [
        V(1, 500, "a.py", 0.0),
        V(2, 2_000, "instructions.txt", 0.0),
        V(3, 2_010, "e1.py", 0.0),
        V(4, 2_020, "e2.py", 0.0),
        V(5, 2_030, "e3.py", 0.0),
    ]
    matches = pat.detect_restart([], [EDIT_SPAN], history)
    assert len(matches) == 1
    assert (matches[0].start_event_id, matches[0].end_event_id) == (2, 5)
    assert matches[0].evidence == (2, 3, 4, 5)


def test_no_restart_before_editing_started():
    history = [
        V(1, 100, "instructions.txt", 0.0),
        V(2, 110, "e1.py", 0.0),
        V(3, 120, "e2.py", 0.0),
        V(4, 130, "e3.py", 0.0),
    ]
    assert pat.detect_restart([], [EDIT_SPAN], history) == []
    assert pat.detect_restart([], [], history) == []


def test_returning_to_one_known_place_is_not_a_restart():
    history = [
        V(1, 2_000, "instructions.txt", 0.0),
        V(2, 2_010, "a.py", 0.9),
    ]
    assert pat.detect_restart([], [EDIT_SPAN], history) == []


def test_familiar_scan_is_not_a_restart():
    history = [
        V(1, 2_000, "instructions.txt", 0.0),
        V(2, 2_010, "e1.py", 0.5),
        V(3, 2_020, "e2.py", 0.4),
        V(4, 2_030, "e3.py", 0.6),
    ]
    assert pat.detect_restart([], [EDIT_SPAN], history) == []


def test_scan_outside_the_window_does_not_count():
    history = [
        V(1, 2_000, "instructions.txt", 0.0),
        V(2, 130_000, "e1.py", 0.0),
        V(3, 130_010, "e2.py", 0.0),
        V(4, 130_020, "e3.py", 0.0),
    ]
    assert pat.detect_restart([], [EDIT_SPAN], history) == []


def test_two_separate_restarts_both_match():
    history = [
        V(1, 2_000, "instructions.txt", 0.0),
        V(2, 2_010, "e1.py", 0.0),
        V(3, 2_020, "e2.py", 0.0),
        V(4, 2_030, "e3.py", 0.0),
        V(5, 500_000, "notes.md", 0.0),
        V(6, 500_010, "f1.py", 0.0),
        V(7, 500_020, "f2.py", 0.0),
        V(8, 500_030, "f3.py", 0.0),
    ]
    assert len(pat.detect_restart([], [EDIT_SPAN], history)) == 2


# --------------------------------------------------------- validation launches


def test_only_launches_inside_validation_spans_match():
    b = StreamBuilder()
    early = b.at(9_000).launch()
    inside = b.at(15_000).launch()
    late = b.at(21_000).launch()
    spans = [pat.PhaseSpan(pat.VALIDATION, 0, 0, 10_000, 20_000)]
    matches = pat.detect_validation_launches(b.events, spans)
    assert [m.start_event_id for m in matches] == [inside.id]
    assert early.id != inside.id != late.id


# ------------------------------------------------------------- focus sequence


def test_focus_sequence_sources_and_dedup():
    from tracelens.events import EventContext

    b = StreamBuilder()
    b.open_file("a.py", dt=1_000)
    b.open_file("a.py", dt=1_000)
    b.add(
        "EditorEvent",
        {"editor_id": "e", "action": "focus"},
        context=EventContext(file="b.py"),
        dt=1_000,
    )
    b.add("TreeSelectionEvent", {"path": "c.py"}, dt=1_000)
    b.add("TreeSelectionEvent", {"path": "build/out.o"}, dt=1_000)
    focus = pat.focus_sequence(b.events, known_files={"a.py", "b.py", "c.py"})
    assert [path for _, path in focus] == ["a.py", "b.py", "c.py"]
    unrestricted = pat.focus_sequence(b.events)
    assert [path for _, path in unrestricted][-1] == "build/out.o"


def test_doc_file_globs():
    assert pat.is_doc_file("instructions.txt")
    assert pat.is_doc_file("notes.md")
    assert not pat.is_doc_file("a.py")
